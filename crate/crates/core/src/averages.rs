//! Running ergodic averages along floor sequences.
//!
//! Every average goes through [`accum::run_sums`], so each `n` is visited
//! once, checkpoints come out of a single pass, and the result does not
//! depend on the number of worker threads.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::accum::{self, ComplexSum, Prepared, SumTable};
use crate::diophantine::Convergent;
use crate::dynsys::{CommutingFamily, MpSystem, Observable, SystemPoint};
use crate::error::{Error, Result};
use crate::kernels::{dyadic_split, e_weight, fourier_kernel, lambda_count, KernelParams};
use crate::precision::{floor_ratio_times, pow_int, scaled_floor, split_floor, Coeff, FloorResult, HighReal};
use crate::suspension::{FlowPoint, SuspensionFlow};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub points: usize,
    pub seed: u64,
}

/// System, observables, checkpoints and the sampled points of one run.
#[derive(Clone, Debug)]
pub struct AverageSpec {
    pub system: MpSystem,
    pub f: Observable,
    pub g: Observable,
    pub checkpoints: Vec<u64>,
    pub sample: Sample,
    /// Explicit points; when absent they are drawn from `sample`.
    pub points: Option<Vec<SystemPoint>>,
}

impl AverageSpec {
    pub fn new(system: MpSystem, f: Observable, g: Observable, checkpoints: Vec<u64>, sample: Sample) -> Self {
        AverageSpec {
            system,
            f,
            g,
            checkpoints,
            sample,
            points: None,
        }
    }

    pub fn base_points(&self) -> Vec<SystemPoint> {
        match &self.points {
            Some(p) => p.clone(),
            None => self.system.sample_points(self.sample.points, self.sample.seed),
        }
    }

    fn validate(&self, with_g: bool) -> Result<()> {
        self.system.validate()?;
        self.system.check_observable(&self.f)?;
        if with_g {
            self.system.check_observable(&self.g)?;
        }
        accum::check_counts(&self.checkpoints)?;
        if self.points.is_none() && self.sample.points == 0 {
            return Err(Error::validation("sample needs at least one point"));
        }
        Ok(())
    }

    fn bound(&self) -> f64 {
        self.f.bound(&self.system) * self.g.bound(&self.system)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AverageSeries {
    pub variant: String,
    pub checkpoints: Vec<u64>,
    /// `per_point[i][j]`: point `i`, checkpoint `j`.
    pub per_point: Vec<Vec<Complex64>>,
    pub mean: Vec<Complex64>,
    /// Largest distance of a point's value from the mean.
    pub dispersion: Vec<f64>,
    /// Boundary-flagged floors among the terms up to each checkpoint.
    pub flags: Vec<u64>,
    pub bound: f64,
    pub warnings: Vec<String>,
}

impl AverageSeries {
    fn from_sums(variant: &str, checkpoints: &[u64], table: SumTable, norms: &[f64], bound: f64) -> Self {
        let per_point: Vec<Vec<Complex64>> = table
            .sums
            .iter()
            .map(|row| row.iter().zip(norms).map(|(s, d)| s / *d).collect())
            .collect();
        Self::from_values(variant, checkpoints, per_point, table.flags, bound)
    }

    pub fn from_values(
        variant: &str,
        checkpoints: &[u64],
        per_point: Vec<Vec<Complex64>>,
        flags: Vec<u64>,
        bound: f64,
    ) -> Self {
        let np = per_point.len().max(1) as f64;
        let mean: Vec<Complex64> = (0..checkpoints.len())
            .map(|j| accum::sum_complex(per_point.iter().map(|r| r[j])) / np)
            .collect();
        let dispersion = (0..checkpoints.len())
            .map(|j| per_point.iter().map(|r| (r[j] - mean[j]).norm()).fold(0.0, f64::max))
            .collect();
        AverageSeries {
            variant: variant.to_string(),
            checkpoints: checkpoints.to_vec(),
            per_point,
            mean,
            dispersion,
            flags,
            bound,
            warnings: Vec::new(),
        }
    }

    pub fn final_mean(&self) -> Complex64 {
        *self.mean.last().expect("non-empty series")
    }

    pub fn final_values(&self) -> Vec<Complex64> {
        self.per_point.iter().map(|r| *r.last().unwrap()).collect()
    }
}

/// Exponent and coefficients of a power-type average.
#[derive(Clone, Copy, Debug)]
pub struct PowerPair {
    pub alpha: Coeff,
    pub beta: Coeff,
    pub c: HighReal,
}

fn c_range_check(c: HighReal, allow: bool, warnings: &mut Vec<String>) -> Result<()> {
    if !(c > HighReal::ZERO && c < HighReal::from_f64(2.0)) {
        return Err(Error::validation(format!("c = {} must lie in (0, 2)", c.to_f64())));
    }
    let inside = c > HighReal::ONE && c < HighReal::from_ratio(23, 22);
    if !inside {
        if allow {
            warnings.push(format!(
                "c = {} lies outside (1, 23/22); running anyway as requested",
                c.to_f64()
            ));
        } else {
            return Err(Error::validation(format!(
                "c = {} lies outside (1, 23/22); set allow_out_of_range to run it",
                c.to_f64()
            )));
        }
    }
    Ok(())
}

/// `⌊coef · n^c⌋` from a shared power; zero coefficients give 0 and the
/// exact rational path is used whenever `c = 1`.
fn coeff_floor(coef: &Coeff, n: u64, power: HighReal, exact: bool, c_is_one: bool) -> Result<FloorResult> {
    if coef.is_zero() {
        return Ok(FloorResult {
            floor_value: 0,
            frac_value: HighReal::ZERO,
            boundary_flag: false,
        });
    }
    match coef.ratio {
        Some((p, q)) if c_is_one => Ok(floor_ratio_times(p, q, n as i128)?),
        _ => Ok(scaled_floor(coef.value, power, exact)?),
    }
}

/// `⌊b·n + d⌋`.
fn linear_floor(b: &Coeff, n: u64, d: HighReal) -> Result<FloorResult> {
    if d.is_zero() {
        if let Some((p, q)) = b.ratio {
            return Ok(floor_ratio_times(p, q, n as i128)?);
        }
    }
    let v = b.value * HighReal::from_i128(n as i128) + d;
    let exact = b.value.lo() == 0.0 && d.is_zero() && (n as f64) < 9.0e15 && b.ratio.is_some();
    let err = if exact {
        0.0
    } else {
        v.abs().hi() * 4.930_380_657_631_324e-32
    };
    Ok(split_floor(v, err)?)
}

/// Floors for one chunk of `n` values, one vector per coefficient.
fn power_floors(coefs: &[Coeff], c: HighReal, lo: u64, hi: u64, first_n: u64) -> Result<Prepared<Vec<Vec<i64>>>> {
    let c_is_one = c == HighReal::ONE;
    let mut data = vec![Vec::with_capacity((hi - lo) as usize); coefs.len()];
    let mut flagged = Vec::new();
    for i in lo..hi {
        let n = first_n + i;
        let (pw, exact) = if c_is_one {
            (HighReal::from_i128(n as i128), true)
        } else {
            pow_int(n, c)?
        };
        let mut flag = false;
        for (k, coef) in coefs.iter().enumerate() {
            let fr = coeff_floor(coef, n, pw, exact, c_is_one)?;
            flag |= fr.boundary_flag;
            data[k].push(fr.floor_value);
        }
        if flag {
            flagged.push(i);
        }
    }
    Ok(Prepared { data, flagged })
}

fn norms_n(checkpoints: &[u64]) -> Vec<f64> {
    checkpoints.iter().map(|&n| n as f64).collect()
}

/// `(1/N) Σ_{n≤N} f(T^{⌊αn^c⌋}x) g(T^{⌊βn^c⌋}x)`.
pub fn avg_nc_double(spec: &AverageSpec, params: &PowerPair, allow_out_of_range: bool) -> Result<AverageSeries> {
    spec.validate(true)?;
    let mut warnings = Vec::new();
    c_range_check(params.c, allow_out_of_range, &mut warnings)?;
    if params.alpha.is_zero() || params.beta.is_zero() {
        return Err(Error::validation("alpha and beta must be non-zero"));
    }
    // β = −α is the reflected single-sequence average and stays allowed;
    // only α = β is degenerate
    if params.alpha.value == params.beta.value {
        return Err(Error::validation("alpha and beta must differ"));
    }
    let points = spec.base_points();
    let sys = &spec.system;
    let coefs = [params.alpha, params.beta];
    let table = accum::run_sums(
        &spec.checkpoints,
        &points,
        |lo, hi| power_floors(&coefs, params.c, lo, hi, 1),
        |d, k, x| {
            let a = spec.f.eval(sys, &sys.power_apply(d[0][k], x)?)?;
            let b = spec.g.eval(sys, &sys.power_apply(d[1][k], x)?)?;
            Ok(a * b)
        },
    )?;
    let variant = if params.alpha.value == -params.beta.value {
        "reflected"
    } else {
        "tb"
    };
    let mut s = AverageSeries::from_sums(
        variant,
        &spec.checkpoints,
        table,
        &norms_n(&spec.checkpoints),
        spec.bound(),
    );
    s.warnings = warnings;
    Ok(s)
}

/// Coefficients of `(1/N) Σ f(T^{⌊an⌋}x) g(T^{⌊bn+d⌋}x)`.
#[derive(Clone, Copy, Debug)]
pub struct LinearParams {
    pub a: Coeff,
    pub b: Coeff,
    pub d: HighReal,
    /// First index of the sum (1 for the averages, 0 for inner limits).
    pub start: u64,
}

pub fn avg_linear_double(spec: &AverageSpec, params: &LinearParams) -> Result<AverageSeries> {
    spec.validate(true)?;
    let points = spec.base_points();
    let table = linear_sums(&spec.system, &spec.f, &spec.g, params, &spec.checkpoints, &points)?;
    Ok(AverageSeries::from_sums(
        "linear",
        &spec.checkpoints,
        table,
        &norms_n(&spec.checkpoints),
        spec.bound(),
    ))
}

pub(crate) fn linear_sums(
    sys: &MpSystem,
    f: &Observable,
    g: &Observable,
    params: &LinearParams,
    counts: &[u64],
    points: &[SystemPoint],
) -> Result<SumTable> {
    let a_int = params.a.as_integer();
    accum::run_sums(
        counts,
        points,
        |lo, hi| {
            let mut data = (
                Vec::with_capacity((hi - lo) as usize),
                Vec::with_capacity((hi - lo) as usize),
            );
            let mut flagged = Vec::new();
            for i in lo..hi {
                let n = params.start + i;
                let (fa, flag_a) = match a_int {
                    Some(a) => (
                        (a as i128)
                            .checked_mul(n as i128)
                            .filter(|v| v.unsigned_abs() <= 1u128 << 62)
                            .ok_or_else(|| Error::Numeric(format!("orbit index {a}·{n} exceeds 2^62")))?
                            as i64,
                        false,
                    ),
                    None => {
                        let fr = linear_floor(&params.a, n, HighReal::ZERO)?;
                        (fr.floor_value, fr.boundary_flag)
                    }
                };
                let fb = linear_floor(&params.b, n, params.d)?;
                if flag_a || (fb.boundary_flag && !(params.d.is_zero() && params.b.ratio.is_some())) {
                    flagged.push(i);
                }
                data.0.push(fa);
                data.1.push(fb.floor_value);
            }
            Ok(Prepared { data, flagged })
        },
        |d, k, x| {
            let a = f.eval(sys, &sys.power_apply(d.0[k], x)?)?;
            let b = g.eval(sys, &sys.power_apply(d.1[k], x)?)?;
            Ok(a * b)
        },
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BaeVariant {
    B,
    A,
    E,
}

#[derive(Clone, Copy, Debug)]
pub enum BaeCase {
    /// Arguments `(⌊γn⌋, n)` with flow step `β/L`.
    Irrational { gamma: Coeff },
    /// Arguments `(pn, qn)` with flow step `β/(qL)`.
    Rational { p: i64, q: i64 },
}

#[derive(Clone, Copy, Debug)]
pub struct BaeParams {
    pub case: BaeCase,
    pub l: Coeff,
    pub c: HighReal,
    pub beta: Coeff,
}

fn flow_floor(t: HighReal, s: HighReal) -> Result<i64> {
    let v = t + s;
    Ok(split_floor(v, v.abs().hi() * 4.930_380_657_631_324e-32)?.floor_value)
}

/// Flow time `τ·u` from a point at height `s`. With a rational step and
/// `s = 0` the floor is taken in integer arithmetic.
#[derive(Clone, Copy)]
struct FlowStep {
    tau: HighReal,
    ratio: Option<(i64, i64)>,
}

impl FlowStep {
    fn new(beta: &Coeff, l: &Coeff, q: i64) -> Self {
        let ratio = match (beta.ratio, l.ratio) {
            (Some((bn, bd)), Some((ln, ld))) => {
                let (num, den) = (bn as i128 * ld as i128, bd as i128 * ln as i128 * q as i128);
                let g = num_integer::gcd(num, den);
                let (num, den) = if den < 0 {
                    (-num / g, -den / g)
                } else {
                    (num / g, den / g)
                };
                i64::try_from(num).ok().zip(i64::try_from(den).ok())
            }
            _ => None,
        };
        FlowStep {
            tau: beta.value / (HighReal::from_i64(q) * l.value),
            ratio,
        }
    }

    fn floor(&self, u: i64, s: HighReal) -> Result<i64> {
        match self.ratio {
            Some((num, den)) if s.is_zero() => Ok(floor_ratio_times(num, den, u as i128)?.floor_value),
            _ => flow_floor(self.tau * HighReal::from_i64(u), s),
        }
    }
}

/// Flow points for `spec`: explicit base points get height 0 unless drawn
/// from the sampler.
pub fn flow_points(spec: &AverageSpec, flow: &SuspensionFlow) -> Vec<FlowPoint> {
    match &spec.points {
        Some(ps) => ps
            .iter()
            .map(|b| FlowPoint {
                base: b.clone(),
                heights: vec![HighReal::ZERO; flow.dim()],
            })
            .collect(),
        None => flow.sample_points(spec.sample.points, spec.sample.seed),
    }
}

/// The weighted averages `B`, `A`, `E` along `Λ = {⌊L n^c⌋}` on the
/// suspension flow, evaluated at `flow_pts` (or points drawn from `spec.sample`).
pub fn avg_bae_family(
    spec: &AverageSpec,
    params: &BaeParams,
    variant: BaeVariant,
    flow_pts: Option<&[FlowPoint]>,
) -> Result<AverageSeries> {
    spec.validate(true)?;
    if !(params.l.value > HighReal::ZERO) {
        return Err(Error::validation("L must be positive"));
    }
    let flow = SuspensionFlow::single(spec.system.clone())?;
    let owned;
    let pts = match flow_pts {
        Some(p) => p,
        None => {
            owned = flow_points(spec, &flow);
            &owned[..]
        }
    };
    let n_max = *spec.checkpoints.last().unwrap();
    let lam = lambda_count(params.l.value, params.c, n_max)?;
    let norms: Vec<f64> = match variant {
        BaeVariant::A => norms_n(&spec.checkpoints),
        _ => spec.checkpoints.iter().map(|&n| lam.count_upto(n) as f64).collect(),
    };
    if norms.contains(&0.0) {
        return Err(Error::Numeric(format!(
            "Λ ∩ [N] is empty at checkpoint {}",
            spec.checkpoints[norms.iter().position(|&d| d == 0.0).unwrap()]
        )));
    }
    let step = match params.case {
        BaeCase::Irrational { .. } => FlowStep::new(&params.beta, &params.l, 1),
        BaeCase::Rational { q, .. } => {
            if q <= 0 {
                return Err(Error::validation("q must be positive"));
            }
            FlowStep::new(&params.beta, &params.l, q)
        }
    };
    let sys = &spec.system;
    let table = accum::run_sums(
        &spec.checkpoints,
        pts,
        |lo, hi| {
            let mut data = Vec::with_capacity((hi - lo) as usize);
            let mut flagged = Vec::new();
            for i in lo..hi {
                let n = i + 1;
                let w = match variant {
                    BaeVariant::A => 1.0,
                    BaeVariant::B => {
                        if lam.contains(n) {
                            1.0
                        } else {
                            0.0
                        }
                    }
                    BaeVariant::E => e_weight(params.l.value, params.c, n)?.to_f64(),
                };
                let (u, v) = match params.case {
                    BaeCase::Irrational { gamma } => {
                        let fr = linear_floor(&gamma, n, HighReal::ZERO)?;
                        if fr.boundary_flag && gamma.ratio.is_none() {
                            flagged.push(i);
                        }
                        (fr.floor_value, n as i64)
                    }
                    BaeCase::Rational { p, q } => (p * n as i64, q * n as i64),
                };
                data.push((w, u, v));
            }
            Ok(Prepared { data, flagged })
        },
        |d, k, y: &FlowPoint| {
            let (w, u, v) = d[k];
            if w == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let s = y.heights[0];
            let a = spec.f.eval(sys, &sys.power_apply(step.floor(u, s)?, &y.base)?)?;
            let b = spec.g.eval(sys, &sys.power_apply(step.floor(v, s)?, &y.base)?)?;
            Ok(a * b * w)
        },
    )?;
    let name = match variant {
        BaeVariant::B => "bae_B",
        BaeVariant::A => "bae_A",
        BaeVariant::E => "bae_E",
    };
    let mut s = AverageSeries::from_sums(name, &spec.checkpoints, table, &norms, spec.bound());
    if variant == BaeVariant::E {
        // E carries signed weights in [-1, 1] over |Λ ∩ [N]|; its modulus is
        // bounded by N/|Λ ∩ [N]| times the observable bounds
        s.bound = spec.bound()
            * spec
                .checkpoints
                .iter()
                .zip(&norms)
                .map(|(n, d)| *n as f64 / d)
                .fold(0.0, f64::max);
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug)]
pub struct WParams {
    pub kernel: KernelParams,
    pub l: HighReal,
    pub beta: HighReal,
    pub n: u64,
    pub conv: Convergent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WResult {
    pub n: u64,
    pub p: i64,
    pub q: u64,
    pub values: Vec<Complex64>,
    /// Mean of `|W|` over the sample.
    pub l1: f64,
    /// Mean of `|W_j|` for each dyadic block `j`.
    pub block_l1: Vec<f64>,
    pub imag_residual: f64,
}

/// `W = Σ_n K_N(n) f̃(S^{nP τ} y) g̃(S^{nQ τ} y)` with `τ = β/(L Q)`,
/// summed block by block over the dyadic split of `[N]`.
pub fn avg_w(spec: &AverageSpec, params: &WParams, flow_pts: Option<&[FlowPoint]>) -> Result<WResult> {
    spec.validate(true)?;
    let flow = SuspensionFlow::single(spec.system.clone())?;
    let owned;
    let pts = match flow_pts {
        Some(p) => p,
        None => {
            owned = flow_points(spec, &flow);
            &owned[..]
        }
    };
    let kernel = fourier_kernel(&params.kernel, params.l, params.n)?;
    let blocks = dyadic_split(&kernel, params.n)?;
    let q = params.conv.q;
    if q == 0 {
        return Err(Error::validation("convergent denominator must be positive"));
    }
    let tau = params.beta / (params.l * HighReal::from_i128(q as i128));
    let sys = &spec.system;
    let per_point: Vec<(Complex64, Vec<Complex64>)> = pts
        .par_iter()
        .map(|y| -> Result<(Complex64, Vec<Complex64>)> {
            let s = y.heights[0];
            let mut block_vals = Vec::with_capacity(blocks.len());
            for b in &blocks {
                let mut acc = ComplexSum::default();
                for (i, &w) in b.values.iter().enumerate() {
                    let n = b.offset + i as u64;
                    let tp = tau * HighReal::from_i128(n as i128 * params.conv.p as i128);
                    let tq = tau * HighReal::from_i128(n as i128 * q as i128);
                    let fa = spec.f.eval(sys, &sys.power_apply(flow_floor(tp, s)?, &y.base)?)?;
                    let gb = spec.g.eval(sys, &sys.power_apply(flow_floor(tq, s)?, &y.base)?)?;
                    acc.add(fa * gb * w);
                }
                block_vals.push(acc.value());
            }
            Ok((accum::sum_complex(block_vals.iter().copied()), block_vals))
        })
        .collect::<Result<_>>()?;
    let np = pts.len().max(1) as f64;
    let values: Vec<Complex64> = per_point.iter().map(|(v, _)| *v).collect();
    let mut l1 = accum::CompensatedSum::default();
    values.iter().for_each(|v| l1.add(v.norm()));
    let block_l1 = (0..blocks.len())
        .map(|j| {
            let mut s = accum::CompensatedSum::default();
            per_point.iter().for_each(|(_, b)| s.add(b[j].norm()));
            s.value() / np
        })
        .collect();
    Ok(WResult {
        n: params.n,
        p: params.conv.p,
        q,
        values,
        l1: l1.value() / np,
        block_l1,
        imag_residual: kernel.imag_residual,
    })
}

/// Coefficient vectors of `(1/N) Σ f(T_1^{⌊b_1 n^c⌋}⋯x) g(T_1^{⌊d_1 n^c⌋}⋯x)`.
#[derive(Clone, Debug)]
pub struct TcParams {
    pub b: Vec<Coeff>,
    pub d: Vec<Coeff>,
    pub c: HighReal,
    /// Run even when `b` and `d` are not linearly dependent.
    pub exploratory: bool,
}

fn check_dependence(b: &[Coeff], d: &[Coeff]) -> std::result::Result<(), String> {
    if b.len() != d.len() || b.is_empty() {
        return Err("b and d must have the same positive length".into());
    }
    if b.iter().all(|x| x.is_zero()) || d.iter().all(|x| x.is_zero()) {
        return Err("b and d must be non-zero vectors".into());
    }
    if b.iter().zip(d).all(|(x, y)| x.value == y.value) {
        return Err("b and d must be distinct".into());
    }
    let i = b.iter().position(|x| !x.is_zero()).unwrap();
    let lambda = d[i].value / b[i].value;
    let scale = b.iter().chain(d).fold(0.0f64, |m, x| m.max(x.value.abs().hi()));
    for (x, y) in b.iter().zip(d) {
        if (y.value - lambda * x.value).abs().hi() > 1e-25 * scale.max(1.0) {
            return Err("b and d are not linearly dependent".into());
        }
    }
    Ok(())
}

pub fn avg_multi_tc(spec: &AverageSpec, params: &TcParams, allow_out_of_range: bool) -> Result<AverageSeries> {
    spec.validate(true)?;
    let mut warnings = Vec::new();
    c_range_check(params.c, allow_out_of_range, &mut warnings)?;
    let family = CommutingFamily::new(spec.system.clone())?;
    let m = family.dim();
    if params.b.len() != m || params.d.len() != m {
        return Err(Error::validation(format!(
            "b and d need {m} components for this system"
        )));
    }
    if let Err(why) = check_dependence(&params.b, &params.d) {
        if params.exploratory {
            warnings.push(format!("{why}; running as exploratory"));
        } else {
            return Err(Error::validation(format!("{why} (set exploratory to run anyway)")));
        }
    }
    let points = spec.base_points();
    let sys = &spec.system;
    let coefs: Vec<Coeff> = params.b.iter().chain(&params.d).copied().collect();
    let table = accum::run_sums(
        &spec.checkpoints,
        &points,
        |lo, hi| power_floors(&coefs, params.c, lo, hi, 1),
        |d, k, x| {
            let kb: Vec<i64> = (0..m).map(|i| d[i][k]).collect();
            let kd: Vec<i64> = (0..m).map(|i| d[m + i][k]).collect();
            let a = spec.f.eval(sys, &family.apply(&kb, x)?)?;
            let b = spec.g.eval(sys, &family.apply(&kd, x)?)?;
            Ok(a * b)
        },
    )?;
    let mut s = AverageSeries::from_sums(
        "tc",
        &spec.checkpoints,
        table,
        &norms_n(&spec.checkpoints),
        spec.bound(),
    );
    s.warnings = warnings;
    Ok(s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupProbe {
    pub per_point_sup: Vec<f64>,
    /// `(mean of sup²)^{1/2}` over the sample.
    pub l2: f64,
    pub series: AverageSeries,
}

/// Running `max_N |(1/N) Σ f(T_1^{⌊α_1 n^c⌋}⋯x)|` over the checkpoints.
pub fn sup_average_probe(spec: &AverageSpec, alphas: &[Coeff], c: HighReal) -> Result<SupProbe> {
    spec.validate(false)?;
    if !(c > HighReal::ZERO && c < HighReal::from_f64(2.0)) {
        return Err(Error::validation("c must lie in (0, 2)"));
    }
    let family = CommutingFamily::new(spec.system.clone())?;
    if alphas.len() != family.dim() {
        return Err(Error::validation(format!("need {} coefficients", family.dim())));
    }
    let points = spec.base_points();
    let sys = &spec.system;
    let table = accum::run_sums(
        &spec.checkpoints,
        &points,
        |lo, hi| power_floors(alphas, c, lo, hi, 1),
        |d, k, x| {
            let ks: Vec<i64> = d.iter().map(|v| v[k]).collect();
            Ok(spec.f.eval(sys, &family.apply(&ks, x)?)?)
        },
    )?;
    let bound = spec.f.bound(sys);
    let series = AverageSeries::from_sums("sup", &spec.checkpoints, table, &norms_n(&spec.checkpoints), bound);
    let per_point_sup: Vec<f64> = series
        .per_point
        .iter()
        .map(|r| r.iter().map(|v| v.norm()).fold(0.0, f64::max))
        .collect();
    let mut sq = accum::CompensatedSum::default();
    per_point_sup.iter().for_each(|s| sq.add(s * s));
    let l2 = (sq.value() / per_point_sup.len().max(1) as f64).sqrt();
    Ok(SupProbe {
        per_point_sup,
        l2,
        series,
    })
}

/// Checkpoints of `series` that lie on the `⌊λ^m⌋` grid, `λ = 2^{1/root}`.
fn lacunary_indices(checkpoints: &[u64], root: u32) -> Result<Vec<usize>> {
    if root == 0 {
        return Err(Error::validation("lambda root must be positive"));
    }
    let max = *checkpoints.last().ok_or_else(|| Error::validation("empty series"))?;
    let grid: std::collections::BTreeSet<u64> = (0u32..)
        .map(|m| accum::lacunary_point(root, m))
        .take_while(|&v| v <= max)
        .collect();
    Ok(checkpoints
        .iter()
        .enumerate()
        .filter(|(_, n)| grid.contains(n))
        .map(|(i, _)| i)
        .collect())
}

/// Largest `|v_i − v_j|` over the lacunary checkpoints in the final third
/// of the schedule (indices from `⌊2k/3⌋` on), for an arbitrary series.
pub fn oscillation_of(values: &[Complex64], checkpoints: &[u64], root: u32) -> Result<f64> {
    let idx = lacunary_indices(checkpoints, root)?;
    if idx.len() < 3 {
        return Err(Error::validation("oscillation needs at least 3 lacunary checkpoints"));
    }
    let tail = &idx[(2 * idx.len()) / 3..];
    let mut best = 0.0f64;
    for (a, &i) in tail.iter().enumerate() {
        for &j in &tail[a + 1..] {
            best = best.max((values[i] - values[j]).norm());
        }
    }
    Ok(best)
}

/// [`oscillation_of`] applied to the sample mean.
pub fn oscillation(series: &AverageSeries, root: u32) -> Result<f64> {
    oscillation_of(&series.mean, &series.checkpoints, root)
}

/// Worst per-point oscillation.
pub fn oscillation_per_point(series: &AverageSeries, root: u32) -> Result<f64> {
    series
        .per_point
        .iter()
        .map(|r| oscillation_of(r, &series.checkpoints, root))
        .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))
}
