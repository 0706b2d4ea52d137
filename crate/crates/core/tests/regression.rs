//! Pinned values checked against integer oracles that never touch the
//! double-double code.

#[path = "../src/oracle.rs"]
mod oracle;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use ergolab::config::load_config;
use ergolab::experiment::run_experiment;

/// For characters e(x), e(-x) on the rotation the summand is
/// `e((⌊2n^c⌋ − ⌊n^c⌋)θ)` at every point. θ = √2 − 1 as a 64-bit fixed
/// point fraction makes each phase exact mod 1 up to 2^-64.
fn oracle_rotation_char(n_max: u64) -> Complex64 {
    let s2: BigUint = (BigUint::from(2u32) << 128usize).sqrt();
    let theta = (s2 - (BigUint::from(1u32) << 64usize)).to_u64().unwrap();
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..=n_max {
        let k = oracle::floor_rational_power(2, 1, n, 51, 50) - oracle::floor_rational_power(1, 1, n, 51, 50);
        let ph = (k as u64).wrapping_mul(theta) as f64 / 2f64.powi(64);
        sum += Complex64::from_polar(1.0, std::f64::consts::TAU * ph);
    }
    sum / n_max as f64
}

fn run(sets: &[&str]) -> Vec<Complex64> {
    let sets: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
    let out = run_experiment(&load_config(r#"{"preset": "tb_rotation_char"}"#, &sets).unwrap()).unwrap();
    out.summary["final_per_point"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| Complex64::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap()))
        .collect()
}

#[test]
fn rotation_char_matches_oracle_at_moderate_n() {
    let want = oracle_rotation_char(30_000);
    for got in run(&["schedule.n_max=30000"]) {
        assert!((got - want).norm() < 1e-12, "{got} vs {want}");
    }
}

/// Frozen from `oracle_rotation_char(1_000_000)`.
const ROTATION_CHAR_1E6: Complex64 = Complex64::new(-8.097538655032279e-5, 4.1116475935201865e-4);

#[test]
fn rotation_char_pinned_at_full_scale() {
    for got in run(&[]) {
        assert!((got - ROTATION_CHAR_1E6).norm() < 1e-12, "{got}");
    }
}
