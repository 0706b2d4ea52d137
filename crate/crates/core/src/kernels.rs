//! Weights along `Λ = {⌊L n^c⌋}`, the smoothed Fourier kernel, dyadic
//! splits, pair-counting measures, multiplicative differences and the
//! van der Corput inequality.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::dynsys::e1;
use crate::precision::{floor_pow, frac, phi, HighReal, PrecisionError};

/// Imaginary mass above this marks a Fourier kernel as not numerically real.
pub const REALNESS_TOL: f64 = 8.673_617_379_884_035e-19; // 2^-60

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Precision(#[from] PrecisionError),
}

fn domain<T>(msg: impl Into<String>) -> Result<T, KernelError> {
    Err(KernelError::Domain(msg.into()))
}

/// `ψ(y) = (y/L)^{1/c}`, the inverse of `x -> L x^c`.
pub fn psi_inverse(l: HighReal, c: HighReal, y: HighReal) -> Result<HighReal, KernelError> {
    if !(l > HighReal::ZERO) || !(c > HighReal::ZERO) {
        return domain("psi needs L > 0 and c > 0");
    }
    if y.is_sign_negative() && !y.is_zero() {
        return domain("psi needs y >= 0");
    }
    if y.is_zero() {
        return Ok(HighReal::ZERO);
    }
    if c == HighReal::ONE {
        return Ok(y / l);
    }
    Ok((y / l).powf(c.recip())?)
}

/// `Λ ∩ [N]` for `Λ = {⌊L n^c⌋ : n ≥ 1}`.
#[derive(Clone, Debug)]
pub struct LambdaSet {
    pub n: u64,
    /// Sorted, distinct.
    pub members: Vec<u64>,
    membership: Vec<bool>,
}

impl LambdaSet {
    pub fn count(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= 1 && n <= self.n && self.membership[n as usize]
    }

    /// `|Λ ∩ [m]|` for `m ≤ N`.
    pub fn count_upto(&self, m: u64) -> u64 {
        self.members.partition_point(|&x| x <= m) as u64
    }
}

pub fn lambda_count(l: HighReal, c: HighReal, n: u64) -> Result<LambdaSet, KernelError> {
    if !(l > HighReal::ZERO) || n == 0 {
        return domain("lambda_count needs L > 0 and N >= 1");
    }
    let mut members = Vec::new();
    let mut membership = vec![false; n as usize + 1];
    let mut m = 1u64;
    loop {
        let v = floor_pow(l, c, m)?.floor_value;
        if v > n as i64 {
            break;
        }
        if v >= 1 && !membership[v as usize] {
            membership[v as usize] = true;
            members.push(v as u64);
        }
        m += 1;
    }
    members.sort_unstable();
    Ok(LambdaSet { n, members, membership })
}

/// `Φ(−ψ(n+1)) − Φ(−ψ(n))`.
pub fn e_weight(l: HighReal, c: HighReal, n: u64) -> Result<HighReal, KernelError> {
    if n == 0 {
        return domain("e_weight needs n >= 1");
    }
    let a = psi_inverse(l, c, HighReal::from_i128(n as i128 + 1))?;
    let b = psi_inverse(l, c, HighReal::from_i128(n as i128))?;
    Ok(phi(-a)? - phi(-b)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelParams {
    pub c: HighReal,
    pub eps0: HighReal,
    pub sigma0: HighReal,
}

impl KernelParams {
    /// `M(N) = ⌊N^{σ₀}⌋`, at least 1.
    pub fn m_of_n(&self, n: u64) -> u64 {
        if n <= 1 {
            return 1;
        }
        let v = HighReal::from_i128(n as i128)
            .powf(self.sigma0)
            .map(|x| x.floor_i128())
            .unwrap_or(1);
        v.max(1) as u64
    }
}

/// `ε₀ = (23 − 22c)/(40c)` and `σ₀ = 1 + ε₀ − 1/c`, for `c ∈ (1, 23/22)`.
pub fn kernel_params(c: HighReal) -> Result<KernelParams, KernelError> {
    let upper = HighReal::from_ratio(23, 22);
    if !(c > HighReal::ONE && c < upper) {
        return domain(format!("kernel parameters need c in (1, 23/22), got {}", c.to_f64()));
    }
    let eps0 = (HighReal::from_f64(23.0) - HighReal::from_f64(22.0) * c) / (HighReal::from_f64(40.0) * c);
    let sigma0 = HighReal::ONE + eps0 - c.recip();
    Ok(KernelParams { c, eps0, sigma0 })
}

/// Real weights on `[offset, offset + values.len())`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSeq {
    pub tag: String,
    pub offset: u64,
    pub values: Vec<f64>,
    pub sup_norm: f64,
    /// Largest |imaginary part| dropped when the weights were made real.
    pub imag_residual: f64,
}

impl WeightSeq {
    pub fn new(tag: impl Into<String>, offset: u64, values: Vec<f64>) -> Self {
        let sup_norm = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        WeightSeq {
            tag: tag.into(),
            offset,
            values,
            sup_norm,
            imag_residual: 0.0,
        }
    }

    pub fn get(&self, n: u64) -> f64 {
        if n < self.offset {
            return 0.0;
        }
        self.values.get((n - self.offset) as usize).copied().unwrap_or(0.0)
    }

    /// Last index covered (inclusive), or `offset - 1` when empty.
    pub fn end(&self) -> u64 {
        self.offset + self.values.len() as u64
    }

    pub fn is_real(&self) -> bool {
        self.imag_residual <= REALNESS_TOL
    }
}

/// `K_N(n) = |Λ∩[N]|⁻¹ Σ_{0<|m|≤M} [e(mψ(n+1)) − e(mψ(n))]/(2πim)` on `[N]`.
pub fn fourier_kernel(params: &KernelParams, l: HighReal, n: u64) -> Result<WeightSeq, KernelError> {
    if n < 2 {
        return domain("fourier_kernel needs N >= 2");
    }
    let count = lambda_count(l, params.c, n)?.count();
    if count == 0 {
        return domain(format!("Λ ∩ [{n}] is empty"));
    }
    let m_max = params.m_of_n(n) as i64;
    let psis: Vec<HighReal> = (1..=n + 1)
        .into_par_iter()
        .map(|y| psi_inverse(l, params.c, HighReal::from_i128(y as i128)))
        .collect::<Result<_, _>>()?;
    let norm = count as f64;
    let terms: Vec<Complex64> = (0..n as usize)
        .into_par_iter()
        .map(|i| -> Result<Complex64, KernelError> {
            let (b, a) = (psis[i], psis[i + 1]);
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 1..=m_max {
                for s in [m, -m] {
                    let ea = e1(frac(HighReal::from_i64(s) * a)?.to_f64());
                    let eb = e1(frac(HighReal::from_i64(s) * b)?.to_f64());
                    acc += (ea - eb) / Complex64::new(0.0, std::f64::consts::TAU * s as f64);
                }
            }
            Ok(acc / norm)
        })
        .collect::<Result<_, _>>()?;
    let imag_residual = terms.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    let mut w = WeightSeq::new("fourier_kernel", 1, terms.iter().map(|z| z.re).collect());
    w.imag_residual = imag_residual;
    Ok(w)
}

/// Pieces `1_{[2^j, min(2^{j+1}, N+1))}·w` for `j = 0..=⌊log₂ N⌋`.
pub fn dyadic_split(w: &WeightSeq, n: u64) -> Result<Vec<WeightSeq>, KernelError> {
    if n == 0 {
        return domain("dyadic_split needs N >= 1");
    }
    if w.offset < 1 || w.end() > n + 1 {
        return domain("weights must be supported in [N]");
    }
    let top = 63 - n.leading_zeros() as u64;
    Ok((0..=top)
        .map(|j| {
            let lo = 1u64 << j;
            let hi = (1u64 << (j + 1)).min(n + 1);
            let vals = (lo..hi).map(|k| w.get(k)).collect();
            let mut piece = WeightSeq::new(format!("{}[{j}]", w.tag), lo, vals);
            piece.imag_residual = w.imag_residual;
            piece
        })
        .collect())
}

/// `max(N − |n|, 0)/N²`.
pub fn mu_n(n_big: u64, n: i64) -> Result<Ratio<i128>, KernelError> {
    if n_big == 0 {
        return domain("mu_N needs N >= 1");
    }
    let nb = n_big as i128;
    Ok(Ratio::new((nb - n.unsigned_abs() as i128).max(0), nb * nb))
}

/// Number of pairs in `H²` with difference `h`.
pub fn r_h(set: &BTreeSet<i64>, h: i64) -> u64 {
    set.iter().filter(|&&a| set.contains(&(a - h))).count() as u64
}

/// A finitely supported complex sequence on `ℤ`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FiniteSeq(pub BTreeMap<i64, Complex64>);

impl FiniteSeq {
    pub fn from_fn(range: std::ops::RangeInclusive<i64>, f: impl Fn(i64) -> Complex64) -> Self {
        FiniteSeq(range.map(|x| (x, f(x))).collect())
    }

    pub fn get(&self, x: i64) -> Complex64 {
        self.0.get(&x).copied().unwrap_or_default()
    }
}

/// `Δ_{h_1, …, h_s} f`, applying `h_1` first. The support shrinks to
/// `supp ∩ (supp − h)` at each step.
pub fn delta_diff(f: &FiniteSeq, shifts: &[i64]) -> FiniteSeq {
    let mut cur = f.clone();
    for &h in shifts {
        let next = cur
            .0
            .iter()
            .filter_map(|(&x, &v)| cur.0.get(&(x + h)).map(|w| (x, v * w.conj())))
            .collect();
        cur = FiniteSeq(next);
    }
    cur
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VdcSides {
    pub lhs: f64,
    pub rhs: f64,
}

impl VdcSides {
    /// `lhs ≤ rhs` up to 2^-40 relative slack.
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 9.094_947_017_729_282e-13 * self.rhs.abs().max(self.lhs.abs()).max(1e-300)
    }
}

/// Both sides of `|Σ g|² ≤ |S−H|/|H|² · Σ_h r_H(h) Σ_y g(y+h) ḡ(y)`.
pub fn vdc_check(g: &FiniteSeq, h: &BTreeSet<i64>) -> Result<VdcSides, KernelError> {
    if g.0.is_empty() || h.is_empty() {
        return domain("vdc_check needs non-empty support and H");
    }
    let total: Complex64 = g.0.values().sum();
    let lhs = total.norm_sqr();
    let diff_set: BTreeSet<i64> = g.0.keys().flat_map(|s| h.iter().map(move |t| s - t)).collect();
    let hv: Vec<i64> = h.iter().copied().collect();
    let mut shifts: BTreeMap<i64, u64> = BTreeMap::new();
    for a in &hv {
        for b in &hv {
            *shifts.entry(a - b).or_default() += 1;
        }
    }
    let mut corr = Complex64::new(0.0, 0.0);
    for (&d, &r) in &shifts {
        let mut inner = Complex64::new(0.0, 0.0);
        for (&y, &v) in &g.0 {
            inner += g.get(y + d) * v.conj();
        }
        corr += inner * r as f64;
    }
    let hn = hv.len() as f64;
    let rhs = diff_set.len() as f64 * corr.re / (hn * hn);
    Ok(VdcSides { lhs, rhs })
}

/// A random instance: `g` on `1..=32` consecutive integers with values in
/// the unit square, `H` a set of at most 8 integers in `[-10, 10)`.
pub fn random_vdc_instance<R: Rng>(rng: &mut R) -> (FiniteSeq, BTreeSet<i64>) {
    let len = rng.gen_range(1..=32);
    let start = rng.gen_range(-20..20);
    let g = FiniteSeq(
        (start..start + len)
            .map(|k| (k, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect(),
    );
    let hs = (0..rng.gen_range(1..=8)).map(|_| rng.gen_range(-10..10)).collect();
    (g, hs)
}

/// Both sides of the multiplicative-difference bound for four sequences:
/// `lhs = |Σ_x Σ_n f0(x) f1(x+pn) f2(x+qn) f3(n)|` and
/// `rhs = N^13 Σ_{h3} μ_N(h3) Σ_{|h1|,|h2|≤N} Σ_n Δ_{h1,h2,h3} f3(n)`.
/// Only the ratio is reported; no constant is asserted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BothSides {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

pub fn multiplicative_difference_sides(fs: [&FiniteSeq; 4], p: i64, q: i64, n: u64) -> Result<BothSides, KernelError> {
    if n == 0 || n > 16 {
        return domain("the both-sides evaluator is limited to 1 <= N <= 16");
    }
    let nn = n as i64;
    let mut s = Complex64::new(0.0, 0.0);
    for (&x, &a) in &fs[0].0 {
        for (&m, &d) in &fs[3].0 {
            s += a * fs[1].get(x + p * m) * fs[2].get(x + q * m) * d;
        }
    }
    let lhs = s.norm();
    let mut rhs = 0.0;
    for h3 in -(nn - 1)..=(nn - 1) {
        let mu = mu_n(n, h3)?;
        let mu = *mu.numer() as f64 / *mu.denom() as f64;
        let d3 = delta_diff(fs[3], &[h3]);
        let mut acc = 0.0;
        for h1 in -nn..=nn {
            let d31 = delta_diff(&d3, &[h1]);
            for h2 in -nn..=nn {
                let d = delta_diff(&d31, &[h2]);
                acc += d.0.values().map(|z| z.re).sum::<f64>();
            }
        }
        rhs += mu * acc;
    }
    rhs *= (n as f64).powi(13);
    let ratio = if rhs == 0.0 { f64::INFINITY } else { lhs / rhs };
    Ok(BothSides { lhs, rhs, ratio })
}
