//! Compensated summation and the deterministic chunked engine behind every
//! running average.
//!
//! Terms are cut into fixed chunks of [`CHUNK`] indices. Each chunk is summed
//! left to right per point, recording the running state at every checkpoint
//! inside it; chunk results are then merged in index order. The grid does not
//! depend on the thread count or on which checkpoints were requested, so
//! parallel, serial and from-scratch runs produce identical bits.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const CHUNK: u64 = 1 << 14;

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn merged(&self, other: &Self) -> Self {
        let mut r = *self;
        r.add(other.sum);
        r.add(other.comp);
        r
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn merged(&self, other: &Self) -> Self {
        ComplexSum {
            re: self.re.merged(&other.re),
            im: self.im.merged(&other.im),
        }
    }
}

/// Sum of `values` in order with compensation.
pub fn sum_complex(values: impl IntoIterator<Item = Complex64>) -> Complex64 {
    let mut s = ComplexSum::default();
    for v in values {
        s.add(v);
    }
    s.value()
}

/// Data shared by all points for one chunk of term indices, plus the
/// indices whose floors carried a boundary flag.
pub struct Prepared<S> {
    pub data: S,
    pub flagged: Vec<u64>,
}

/// Raw (unnormalised) sums per point and checkpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct SumTable {
    pub sums: Vec<Vec<Complex64>>,
    /// Number of flagged term indices below each checkpoint.
    pub flags: Vec<u64>,
}

struct ChunkOut {
    states: Vec<Vec<(usize, ComplexSum)>>,
    ends: Vec<ComplexSum>,
    flagged: Vec<u64>,
}

/// Runs `Σ_{i < counts[j]} term(i, x)` for every point `x` and checkpoint
/// `j`. `prepare(lo, hi)` builds per-chunk data for indices `lo..hi`;
/// `term(data, i - lo, x)` evaluates one term.
pub fn run_sums<P, S, Prep, Term>(counts: &[u64], points: &[P], prepare: Prep, term: Term) -> Result<SumTable>
where
    P: Sync,
    S: Send,
    Prep: Fn(u64, u64) -> Result<Prepared<S>> + Sync,
    Term: Fn(&S, usize, &P) -> Result<Complex64> + Sync,
{
    check_counts(counts)?;
    let total = *counts.last().unwrap();
    let n_chunks = total.div_ceil(CHUNK);
    let outs: Vec<ChunkOut> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            let prep = prepare(lo, hi)?;
            let first = counts.partition_point(|&k| k <= lo);
            let mut states = Vec::with_capacity(points.len());
            let mut ends = Vec::with_capacity(points.len());
            for x in points {
                let mut acc = ComplexSum::default();
                let mut recorded = Vec::new();
                let mut next = first;
                for i in lo..hi {
                    acc.add(term(&prep.data, (i - lo) as usize, x)?);
                    while next < counts.len() && counts[next] == i + 1 {
                        recorded.push((next, acc));
                        next += 1;
                    }
                }
                states.push(recorded);
                ends.push(acc);
            }
            Ok(ChunkOut {
                states,
                ends,
                flagged: prep.flagged,
            })
        })
        .collect::<Result<_>>()?;

    let mut sums = vec![vec![Complex64::new(0.0, 0.0); counts.len()]; points.len()];
    for (p, row) in sums.iter_mut().enumerate() {
        let mut acc = ComplexSum::default();
        for out in &outs {
            for (j, st) in &out.states[p] {
                row[*j] = acc.merged(st).value();
            }
            acc = acc.merged(&out.ends[p]);
        }
    }
    let flagged: Vec<u64> = outs.iter().flat_map(|o| o.flagged.iter().copied()).collect();
    let flags = counts
        .iter()
        .map(|&k| flagged.partition_point(|&i| i < k) as u64)
        .collect();
    Ok(SumTable { sums, flags })
}

pub fn check_counts(counts: &[u64]) -> Result<()> {
    if counts.is_empty() {
        return Err(Error::validation("checkpoint list is empty"));
    }
    if counts[0] == 0 || counts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation(
            "checkpoints must be positive and strictly increasing",
        ));
    }
    Ok(())
}

/// `⌊λ^m⌋` for `λ = 2^{1/root}`, deduplicated, up to `n_max`, which is
/// always the last entry.
pub fn lacunary_schedule(root: u32, n_max: u64) -> Result<Vec<u64>> {
    if root == 0 || n_max == 0 {
        return Err(Error::validation("schedule needs lambda_root >= 1 and N_max >= 1"));
    }
    let mut out: Vec<u64> = Vec::new();
    for m in 0u32.. {
        let v = lacunary_point(root, m);
        if v > n_max {
            break;
        }
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    if out.last() != Some(&n_max) {
        out.push(n_max);
    }
    Ok(out)
}

/// `⌊2^{m/root}⌋`.
pub fn lacunary_point(root: u32, m: u32) -> u64 {
    let (a, b) = (m / root, m % root);
    if a >= 63 {
        return u64::MAX;
    }
    if b == 0 {
        return 1u64 << a;
    }
    let frac_pow = (crate::precision::HighReal::LN2 * crate::precision::HighReal::from_ratio(b as i64, root as i64))
        .exp()
        .expect("bounded exponent");
    let v = frac_pow.ldexp(a as i32).floor_i128();
    v.min(u64::MAX as i128) as u64
}
