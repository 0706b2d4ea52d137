//! Explicit limit formulas for the double averages, and reports comparing
//! them with direct runs.
//!
//! For `α/β = p/q` rational the limit is
//! `(1/|p|) Σ_{r<q} ∫_{pr/q}^{p(r+1)/q} lim (1/N) Σ_{n<N} g(T^{qn+r}x) f(T^{pn+⌊t⌋}x) dt`,
//! and for irrational `γ = α/β` it is
//! `∫_0^1 lim (1/N) Σ_{n<N} g(T^n x) f(T^{⌊γ(n+t)⌋}x) dt`.
//! Inner limits are replaced by the average at a single `inner_n`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::accum::{self, Prepared};
use crate::averages::{linear_sums, AverageSeries, LinearParams};
use crate::dynsys::{MpSystem, Observable, SystemPoint};
use crate::error::{Error, Result};
use crate::precision::{Coeff, HighReal};

pub const DEFAULT_INNER_N: u64 = 100_000;
pub const DEFAULT_GRID: u32 = 512;
/// Inner averages whose partial values move by more than this are flagged.
pub const NODE_OSC_FLAG: f64 = 0.05;

/// Formula values per point together with inner-average diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitEval {
    pub values: Vec<Complex64>,
    /// Number of quadrature nodes (or exact pieces when `grid = 0`).
    pub nodes: usize,
    /// Largest change of an inner average between `inner_n/4`, `inner_n/2`
    /// and `inner_n`, over all nodes and points.
    pub max_node_oscillation: f64,
    pub flagged_nodes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitReport {
    pub lhs_value: [f64; 2],
    pub rhs_value: [f64; 2],
    pub abs_diff: f64,
    /// Per sampled point: `|direct − formula|`.
    pub per_point_diff: Vec<f64>,
    pub max_point_diff: f64,
    pub quadrature_points: usize,
    pub inner_n: u64,
    pub max_node_oscillation: f64,
    pub flagged_nodes: usize,
}

fn inner_counts(inner_n: u64) -> Result<Vec<u64>> {
    if inner_n < 4 {
        return Err(Error::validation("inner_N must be at least 4"));
    }
    Ok(vec![inner_n / 4, inner_n / 2, inner_n])
}

fn spread(row: &[Complex64]) -> f64 {
    let mut m = 0.0f64;
    for (i, a) in row.iter().enumerate() {
        for b in &row[i + 1..] {
            m = m.max((a - b).norm());
        }
    }
    m
}

/// `(1/N) Σ_{n<N} g(T^{qn+r}x) f(T^{pn+j}x)` at the three inner counts.
fn shifted_inner(
    sys: &MpSystem,
    f: &Observable,
    g: &Observable,
    (p, q, r, j): (i64, i64, i64, i64),
    counts: &[u64],
    points: &[SystemPoint],
) -> Result<Vec<Vec<Complex64>>> {
    let table = accum::run_sums(
        counts,
        points,
        |lo, hi| {
            let idx = |a: i64, b: i64, n: u64| -> Result<i64> {
                (a as i128 * n as i128 + b as i128)
                    .try_into()
                    .map_err(|_| Error::Numeric("orbit index overflow".into()))
            };
            let mut d = Vec::with_capacity((hi - lo) as usize);
            for n in lo..hi {
                d.push((idx(q, r, n)?, idx(p, j, n)?));
            }
            Ok(Prepared {
                data: d,
                flagged: Vec::new(),
            })
        },
        |d, k, x| {
            let (u, v) = d[k];
            Ok(g.eval(sys, &sys.power_apply(u, x)?)? * f.eval(sys, &sys.power_apply(v, x)?)?)
        },
    )?;
    Ok(table
        .sums
        .into_iter()
        .map(|row| row.iter().zip(counts).map(|(s, n)| s / *n as f64).collect())
        .collect())
}

fn check_inputs(sys: &MpSystem, f: &Observable, g: &Observable, points: &[SystemPoint]) -> Result<()> {
    sys.validate()?;
    sys.check_observable(f)?;
    sys.check_observable(g)?;
    if points.is_empty() {
        return Err(Error::validation("no points to evaluate"));
    }
    Ok(())
}

/// The rational-ratio limit formula at each of `points`.
///
/// `grid = 0` integrates exactly over the integer breakpoints of `⌊t⌋`;
/// otherwise each sub-interval gets `grid` midpoint nodes. For `p < 0` each
/// sub-interval `[p(r+1)/q, pr/q]` is traversed with positive length.
#[allow(clippy::too_many_arguments)]
pub fn limit_rational_at(
    sys: &MpSystem,
    f: &Observable,
    g: &Observable,
    p: i64,
    q: i64,
    points: &[SystemPoint],
    inner_n: u64,
    grid: u32,
) -> Result<LimitEval> {
    check_inputs(sys, f, g, points)?;
    if p == 0 || q < 1 {
        return Err(Error::validation("need p != 0 and q >= 1"));
    }
    if p.unsigned_abs().gcd(&(q as u64)) != 1 {
        return Err(Error::validation(format!("gcd(|{p}|, {q}) must be 1")));
    }
    let counts = inner_counts(inner_n)?;
    // weights[(r, j)] = total length of t with ⌊t⌋ = j inside sub-interval r,
    // as an exact fraction num / den
    let mut weights: BTreeMap<(i64, i64), i128> = BTreeMap::new();
    let den: i128;
    if grid == 0 {
        den = q as i128;
        for r in 0..q {
            let (a, b) = {
                let (x, y) = (p as i128 * r as i128, p as i128 * (r as i128 + 1));
                (x.min(y), x.max(y))
            };
            // [a/q, b/q] cut at integers
            let mut lo = a;
            while lo < b {
                let j = Integer::div_floor(&lo, &(q as i128));
                let hi = ((j + 1) * q as i128).min(b);
                *weights.entry((r, j as i64)).or_default() += hi - lo;
                lo = hi;
            }
        }
    } else {
        // node i of sub-interval r sits at p(2Gr + 2i + 1)/(2qG), weight |p|/(qG)
        let g2 = 2 * grid as i128;
        den = q as i128 * grid as i128;
        for r in 0..q {
            for i in 0..grid as i128 {
                let num = p as i128 * (g2 * r as i128 + 2 * i + 1);
                let j = Integer::div_floor(&num, &(2 * q as i128 * grid as i128));
                *weights.entry((r, j as i64)).or_default() += p.unsigned_abs() as i128;
            }
        }
    }
    let keys: Vec<((i64, i64), i128)> = weights.into_iter().collect();
    let inner: Vec<Vec<Vec<Complex64>>> = keys
        .par_iter()
        .map(|((r, j), _)| shifted_inner(sys, f, g, (p, q, *r, *j), &counts, points))
        .collect::<Result<_>>()?;
    let scale = 1.0 / (p.unsigned_abs() as f64 * den as f64);
    let mut values = Vec::with_capacity(points.len());
    let mut max_osc = 0.0f64;
    let mut flagged = 0;
    for pi in 0..points.len() {
        let mut acc = accum::ComplexSum::default();
        for (rows, (_, w)) in inner.iter().zip(&keys) {
            let row = &rows[pi];
            acc.add(row[2] * (*w as f64));
            let osc = spread(row);
            max_osc = max_osc.max(osc);
            if osc > NODE_OSC_FLAG {
                flagged += 1;
            }
        }
        values.push(acc.value() * scale);
    }
    Ok(LimitEval {
        values,
        nodes: if grid == 0 {
            keys.len()
        } else {
            q as usize * grid as usize
        },
        max_node_oscillation: max_osc,
        flagged_nodes: flagged,
    })
}

/// Single-point form of [`limit_rational_at`].
#[allow(clippy::too_many_arguments)]
pub fn limit_rational(
    sys: &MpSystem,
    f: &Observable,
    g: &Observable,
    p: i64,
    q: i64,
    x: &SystemPoint,
    inner_n: u64,
    grid: u32,
) -> Result<Complex64> {
    Ok(limit_rational_at(sys, f, g, p, q, std::slice::from_ref(x), inner_n, grid)?.values[0])
}

/// The irrational-ratio limit formula at each of `points`, by midpoint
/// quadrature over `t ∈ [0, 1)` with `grid` nodes.
pub fn limit_irrational_at(
    sys: &MpSystem,
    f: &Observable,
    g: &Observable,
    gamma: &Coeff,
    points: &[SystemPoint],
    inner_n: u64,
    grid: u32,
) -> Result<LimitEval> {
    check_inputs(sys, f, g, points)?;
    if grid == 0 {
        return Err(Error::validation("grid must be positive"));
    }
    if gamma.value.abs() == HighReal::ONE || gamma.is_zero() {
        return Err(Error::validation("need |gamma| != 1 and gamma != 0"));
    }
    let counts = inner_counts(inner_n)?;
    let gamma_real = Coeff::real(gamma.value);
    let nodes: Vec<Vec<Vec<Complex64>>> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let t = HighReal::from_ratio(2 * i as i64 + 1, 2 * grid as i64);
            let params = LinearParams {
                a: Coeff::integer(1),
                b: if gamma.ratio.is_some() { *gamma } else { gamma_real },
                d: gamma.value * t,
                start: 0,
            };
            // g sits on T^n and f on T^{⌊γ(n+t)⌋}
            let table = linear_sums(sys, g, f, &params, &counts, points)?;
            Ok(table
                .sums
                .into_iter()
                .map(|row| row.iter().zip(&counts).map(|(s, n)| s / *n as f64).collect())
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(points.len());
    let mut max_osc = 0.0f64;
    let mut flagged = 0;
    for pi in 0..points.len() {
        let mut acc = accum::ComplexSum::default();
        for node in &nodes {
            let row = &node[pi];
            acc.add(row[2]);
            let osc = spread(row);
            max_osc = max_osc.max(osc);
            if osc > NODE_OSC_FLAG {
                flagged += 1;
            }
        }
        values.push(acc.value() / grid as f64);
    }
    Ok(LimitEval {
        values,
        nodes: grid as usize,
        max_node_oscillation: max_osc,
        flagged_nodes: flagged,
    })
}

pub fn limit_irrational(
    sys: &MpSystem,
    f: &Observable,
    g: &Observable,
    gamma: &Coeff,
    x: &SystemPoint,
    inner_n: u64,
    grid: u32,
) -> Result<Complex64> {
    Ok(limit_irrational_at(sys, f, g, gamma, std::slice::from_ref(x), inner_n, grid)?.values[0])
}

/// Report for a single formula value against the final sample mean.
pub fn compare_limits(direct: &AverageSeries, formula: Complex64) -> LimitReport {
    let lhs = direct.final_mean();
    let d = (lhs - formula).norm();
    LimitReport {
        lhs_value: [lhs.re, lhs.im],
        rhs_value: [formula.re, formula.im],
        abs_diff: d,
        per_point_diff: Vec::new(),
        max_point_diff: d,
        quadrature_points: 0,
        inner_n: 0,
        max_node_oscillation: 0.0,
        flagged_nodes: 0,
    }
}

/// Report comparing each point's final direct value with its own formula
/// value; `lhs` and `rhs` are the sample means.
pub fn compare_limits_per_point(direct: &AverageSeries, eval: &LimitEval, inner_n: u64) -> Result<LimitReport> {
    let fin = direct.final_values();
    if fin.len() != eval.values.len() {
        return Err(Error::validation("point counts differ between direct run and formula"));
    }
    let n = fin.len() as f64;
    let rhs = accum::sum_complex(eval.values.iter().copied()) / n;
    let per: Vec<f64> = fin.iter().zip(&eval.values).map(|(a, b)| (a - b).norm()).collect();
    let mut rep = compare_limits(direct, rhs);
    rep.max_point_diff = per.iter().copied().fold(0.0, f64::max);
    rep.per_point_diff = per;
    rep.quadrature_points = eval.nodes;
    rep.inner_n = inner_n;
    rep.max_node_oscillation = eval.max_node_oscillation;
    rep.flagged_nodes = eval.flagged_nodes;
    Ok(rep)
}
