//! Continued fractions, convergents and best rational approximations of a
//! double-double real.

use thiserror::Error;

use crate::precision::{HighReal, PrecisionError};

/// Hard cap on the number of partial quotients.
pub const MAX_DEPTH: usize = 64;
/// A remainder this close to an integer ends the expansion as rational.
pub const RATIONAL_THRESHOLD: f64 = 8.077_935_669_463_161e-28; // 2^-90

#[derive(Debug, Error)]
pub enum DiophantineError {
    #[error("no convergent with denominator up to the depth cap satisfies |gamma - p/q| < 1/{0}")]
    NotFound(u64),
    #[error("N must be at least 1")]
    BadBound,
    #[error(transparent)]
    Precision(#[from] PrecisionError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CfExpansion {
    pub quotients: Vec<i64>,
    /// The remainder vanished: the input is rational at working precision.
    pub terminated: bool,
    /// The expansion stopped because the next quotient could not be decided
    /// from 106 bits (or an integer overflowed).
    pub precision_exhausted: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Convergent {
    pub p: i64,
    pub q: u64,
    /// `1/(q_n q_{n+1})` when the next convergent is known, otherwise the
    /// measured `|γ - p/q|` (zero at the end of a rational expansion).
    pub error_bound: HighReal,
}

/// Partial quotients of `gamma`, at most `depth` of them (capped at
/// [`MAX_DEPTH`]).
pub fn cf_expand(gamma: HighReal, depth: usize) -> Result<CfExpansion, DiophantineError> {
    if !gamma.is_finite() {
        return Err(PrecisionError::NonFinite("continued fraction argument".into()).into());
    }
    let depth = depth.min(MAX_DEPTH);
    let mut quotients = Vec::new();
    let mut x = gamma;
    let mut err = gamma.abs().hi() * 2.465_190_328_815_662e-32;
    let mut terminated = false;
    let mut exhausted = false;
    while quotients.len() < depth {
        if err > 1e-3 {
            exhausted = true;
            break;
        }
        let nearest = x.round();
        let dist = (x - nearest).abs().hi();
        if dist <= RATIONAL_THRESHOLD.max(err) {
            if err < 9.313_225_746_154_785e-10 {
                quotients.push(nearest.to_i128() as i64);
                terminated = true;
            } else {
                exhausted = true;
            }
            break;
        }
        let a = x.floor();
        let ai = a.to_i128();
        if ai.unsigned_abs() > i64::MAX as u128 / 4 {
            exhausted = true;
            break;
        }
        quotients.push(ai as i64);
        let r = x - a;
        x = r.recip();
        err = err / (r.hi() * r.hi()) + x.hi().abs() * 2.465_190_328_815_662e-32;
    }
    Ok(CfExpansion {
        quotients,
        terminated,
        precision_exhausted: exhausted,
    })
}

fn residual(gamma: HighReal, p: i64, q: u64) -> HighReal {
    ((gamma * HighReal::from_i128(q as i128) - HighReal::from_i64(p)) / HighReal::from_i128(q as i128)).abs()
}

/// Convergents of `gamma` with their error bounds.
pub fn convergents(gamma: HighReal, depth: usize) -> Result<Vec<Convergent>, DiophantineError> {
    let cf = cf_expand(gamma, depth)?;
    let mut pq: Vec<(i64, u64)> = Vec::with_capacity(cf.quotients.len());
    // (p_{n-2}, q_{n-2}) and (p_{n-1}, q_{n-1}), seeded with the usual 0/1, 1/0
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut overflow = false;
    for &a in &cf.quotients {
        let (p2, q2) = (a as i128 * p1 + p0, a as i128 * q1 + q0);
        if p2.unsigned_abs() > i64::MAX as u128 || q2 > i64::MAX as i128 {
            overflow = true;
            break;
        }
        pq.push((p2 as i64, q2 as u64));
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    let n = pq.len();
    Ok(pq
        .iter()
        .enumerate()
        .map(|(i, &(p, q))| {
            let error_bound = if i + 1 < n {
                (HighReal::from_i128(q as i128) * HighReal::from_i128(pq[i + 1].1 as i128)).recip()
            } else if cf.terminated && !overflow {
                HighReal::ZERO
            } else {
                residual(gamma, p, q)
            };
            Convergent { p, q, error_bound }
        })
        .collect())
}

/// The convergent with the smallest denominator such that
/// `|γ - p/q| < 1/N`.
pub fn best_approx(gamma: HighReal, n: u64) -> Result<Convergent, DiophantineError> {
    if n == 0 {
        return Err(DiophantineError::BadBound);
    }
    let target = HighReal::from_i128(n as i128).recip();
    let cf = cf_expand(gamma, MAX_DEPTH)?;
    for c in convergents(gamma, MAX_DEPTH)? {
        let r = residual(gamma, c.p, c.q);
        if r < target || (cf.terminated && r.is_zero()) {
            return Ok(Convergent { error_bound: r, ..c });
        }
    }
    Err(DiophantineError::NotFound(n))
}

/// `⌊x⌋` for a negative real is rounded toward −∞, so `⌊-x⌋ = -⌊x⌋ - 1`
/// whenever `x` is not an integer.
pub fn floor_of_negation(floor_x: i64, x_is_integer: bool) -> i64 {
    if x_is_integer {
        -floor_x
    } else {
        -floor_x - 1
    }
}
