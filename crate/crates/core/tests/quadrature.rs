use num_complex::Complex64;

use ergolab::dynsys::{MpSystem, Observable, SystemPoint};
use ergolab::expr::{parse_coeff, parse_real};
use ergolab::limits::{limit_irrational_at, limit_rational_at};

fn table(v: &[f64]) -> Observable {
    Observable::FiniteTable(v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
}

/// `|v(2G) − v(G)|` for successive doublings.
fn changes(v: &[Vec<Complex64>]) -> Vec<f64> {
    v.windows(2)
        .map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
        .collect()
}

fn assert_cauchy(ch: &[f64]) {
    for w in ch.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{ch:?}");
    }
}

fn rotation_limit(gamma: &str, inner_n: u64, grid: u32) -> Vec<Complex64> {
    let sys = MpSystem::CircleRotation {
        theta: parse_real("sqrt(2)-1").unwrap(),
    };
    let pts = sys.sample_points(4, 1);
    limit_irrational_at(
        &sys,
        &Observable::Character(vec![1]),
        &Observable::Character(vec![-1]),
        &parse_coeff(gamma).unwrap(),
        &pts,
        inner_n,
        grid,
    )
    .unwrap()
    .values
}

#[test]
fn doubling_grid_shrinks_change_on_rotation() {
    let vals: Vec<Vec<Complex64>> = [1, 2, 4, 8, 16].iter().map(|&g| rotation_limit("2", 4000, g)).collect();
    assert_cauchy(&changes(&vals));
}

#[test]
fn even_grids_are_exact_for_gamma_two() {
    // ⌊2(n+t)⌋ = 2n + ⌊2t⌋ jumps only at t = 1/2
    let a = rotation_limit("2", 4000, 64);
    let b = rotation_limit("2", 4000, 512);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).norm() < 1e-12, "{x} {y}");
    }
}

#[test]
fn doubling_grid_shrinks_change_on_cycle() {
    let sys = MpSystem::FiniteCycle { modulus: 12 };
    let f = table(&[1.0, -0.5, 0.25, 0.75, -1.0, 0.5, 0.0, -0.75, 1.0, 0.25, -0.25, 0.5]);
    let g = table(&[0.5, 1.0, -1.0, 0.25, 0.75, -0.5, -0.25, 1.0, 0.0, -0.75, 0.5, 0.25]);
    let pts: Vec<SystemPoint> = (0..12).map(SystemPoint::Cycle).collect();
    let vals: Vec<Vec<Complex64>> = [3, 6, 12, 24, 48]
        .iter()
        .map(|&grid| limit_rational_at(&sys, &f, &g, 3, 2, &pts, 1200, grid).unwrap().values)
        .collect();
    let ch = changes(&vals);
    assert_cauchy(&ch);
}
