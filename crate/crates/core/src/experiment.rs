//! Runs an [`ExperimentConfig`] and renders its CSV, sidecar and limit
//! report.

use std::collections::BTreeSet;
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::averages::{
    self, avg_bae_family, avg_linear_double, avg_multi_tc, avg_nc_double, avg_w, flow_points, sup_average_probe,
    AverageSeries, AverageSpec, BaeCase, BaeParams, BaeVariant, LinearParams, PowerPair, Sample, TcParams, WParams,
};
use crate::config::{require, ExperimentConfig, Kind, RealExpr, SIDECAR_MARKER};
use crate::diophantine::best_approx;
use crate::equidist::equidistribution_report;
use crate::error::{Error, Result};
use crate::kernels::{
    kernel_params, lambda_count, multiplicative_difference_sides, random_vdc_instance, vdc_check, FiniteSeq,
};
use crate::limits::{self, compare_limits_per_point, limit_irrational_at, limit_rational_at, LimitReport};
use crate::precision::{Coeff, HighReal, PRECISION_BITS};
use crate::suspension::SuspensionFlow;

pub const CSV_HEADER: &str = "N,value_re,value_im,dispersion,flags,ms";

/// Slack added to `max |E|` in the B/A/E comparison proxy.
pub const BAE_SLACK: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub n: u64,
    pub value_re: f64,
    pub value_im: f64,
    pub dispersion: f64,
    pub flags: u64,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub checkpoints: Vec<u64>,
    pub rows: Vec<ResultRow>,
    /// Bound on `|value|` for average kinds.
    pub bound: Option<f64>,
    pub summary: Value,
    pub warnings: Vec<String>,
    pub limit_report: Option<LimitReport>,
    /// Additional CSV files as `(suffix, contents)`.
    pub extra: Vec<(String, String)>,
    pub elapsed_ms: u64,
}

impl RunOutput {
    /// The results CSV. The `ms` column holds the run's wall time when
    /// `timing` is set and 0 otherwise, keeping default output reproducible.
    pub fn csv(&self, timing: bool) -> String {
        let ms = if timing { self.elapsed_ms } else { 0 };
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.n, r.value_re, r.value_im, r.dispersion, r.flags, ms
            ));
        }
        s
    }

    /// Metadata sidecar; running it as a config reproduces the CSV.
    pub fn sidecar(&self, threads: usize) -> Value {
        json!({
            SIDECAR_MARKER: 1,
            "config": self.config,
            "schedule": self.checkpoints,
            "versions": {"ergolab": env!("CARGO_PKG_VERSION"), "precision_bits": PRECISION_BITS},
            "bound": self.bound,
            "summary": self.summary,
            "warnings": self.warnings,
            "wall_time_ms": self.elapsed_ms,
            "threads": threads,
        })
    }

    pub fn final_value(&self) -> Option<Complex64> {
        self.rows.last().map(|r| Complex64::new(r.value_re, r.value_im))
    }
}

fn cplx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn rows_from_series(s: &AverageSeries) -> Vec<ResultRow> {
    (0..s.checkpoints.len())
        .map(|j| ResultRow {
            n: s.checkpoints[j],
            value_re: s.mean[j].re,
            value_im: s.mean[j].im,
            dispersion: s.dispersion[j],
            flags: s.flags[j],
        })
        .collect()
}

fn series_summary(s: &AverageSeries, root: u32) -> Value {
    json!({
        "variant": s.variant,
        "final": cplx(s.final_mean()),
        "final_per_point": s.final_values().into_iter().map(cplx).collect::<Vec<_>>(),
        "final_dispersion": s.dispersion.last(),
        "oscillation": averages::oscillation(s, root).ok(),
        "oscillation_per_point": averages::oscillation_per_point(s, root).ok(),
        "bound": s.bound,
    })
}

/// `a / b`, exact when both carry ratios.
fn coeff_div(a: &Coeff, b: &Coeff) -> Result<Coeff> {
    if b.is_zero() {
        return Err(Error::validation("division by a zero coefficient"));
    }
    if let (Some((an, ad)), Some((bn, bd))) = (a.ratio, b.ratio) {
        let num = an as i128 * bd as i128;
        let den = ad as i128 * bn as i128;
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        if let (Ok(n), Ok(d)) = (i64::try_from(num), i64::try_from(den)) {
            return Ok(Coeff::ratio(n, d)?);
        }
    }
    Ok(Coeff::real(a.value / b.value))
}

fn coeff(v: &Option<RealExpr>, key: &str) -> Result<Coeff> {
    require(v, key)?.coeff(key)
}

fn coeffs(v: &Option<Vec<RealExpr>>, key: &str) -> Result<Vec<Coeff>> {
    require(v, key)?.iter().map(|e| e.coeff(key)).collect()
}

fn real_or(v: &Option<RealExpr>, key: &str, default: HighReal) -> Result<HighReal> {
    match v {
        Some(e) => e.real(key),
        None => Ok(default),
    }
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    checkpoints: Vec<u64>,
    root: u32,
}

impl Ctx<'_> {
    fn spec(&self, with_g: bool) -> Result<AverageSpec> {
        let sys = self.cfg.system()?;
        let f = self.cfg.f()?;
        let g = if with_g {
            self.cfg.g()?
        } else {
            crate::dynsys::Observable::Constant(Complex64::new(1.0, 0.0))
        };
        Ok(AverageSpec::new(
            sys,
            f,
            g,
            self.checkpoints.clone(),
            Sample {
                points: self.cfg.sample.points,
                seed: self.cfg.sample.seed,
            },
        ))
    }

    fn c(&self) -> Result<HighReal> {
        coeff(&self.cfg.params.c, "params.c").map(|c| c.value)
    }

    fn power_pair(&self) -> Result<PowerPair> {
        let p = &self.cfg.params;
        Ok(PowerPair {
            alpha: coeff(&p.alpha, "params.alpha")?,
            beta: coeff(&p.beta, "params.beta")?,
            c: self.c()?,
        })
    }

    /// `γ` from `params.gamma`, or `α/β`.
    fn gamma(&self) -> Result<Coeff> {
        let p = &self.cfg.params;
        match &p.gamma {
            Some(g) => g.coeff("params.gamma"),
            None => coeff_div(&coeff(&p.alpha, "params.gamma")?, &coeff(&p.beta, "params.gamma")?),
        }
    }

    /// `L` from `params.l`, or `k (|γ| + 3) |β|`.
    fn l_param(&self, gamma: HighReal, beta: HighReal) -> Result<HighReal> {
        let p = &self.cfg.params;
        let k = p.k.unwrap_or(1);
        if k == 0 {
            return Err(Error::validation("params.k must be positive"));
        }
        match &p.l {
            Some(l) => l.real("params.l"),
            None => Ok(HighReal::from_i64(k as i64) * (gamma.abs() + HighReal::from_i64(3)) * beta.abs()),
        }
    }
}

struct Outcome {
    rows: Vec<ResultRow>,
    checkpoints: Option<Vec<u64>>,
    bound: Option<f64>,
    summary: Value,
    warnings: Vec<String>,
    limit: Option<LimitReport>,
    extra: Vec<(String, String)>,
}

impl Outcome {
    fn from_series(s: &AverageSeries, root: u32) -> Self {
        Outcome {
            rows: rows_from_series(s),
            checkpoints: None,
            bound: Some(s.bound),
            summary: series_summary(s, root),
            warnings: s.warnings.clone(),
            limit: None,
            extra: Vec::new(),
        }
    }

    fn plain(rows: Vec<ResultRow>, summary: Value) -> Self {
        Outcome {
            rows,
            checkpoints: None,
            bound: None,
            summary,
            warnings: Vec::new(),
            limit: None,
            extra: Vec::new(),
        }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.check_precision()?;
    let start = Instant::now();
    let checkpoints = match cfg.kind {
        Kind::VdcSuite => Vec::new(),
        _ => cfg.schedule.resolve()?,
    };
    let ctx = Ctx {
        cfg,
        checkpoints: checkpoints.clone(),
        root: cfg.schedule.lambda_root,
    };
    let out = match cfg.kind {
        Kind::TbDirect => run_tb(&ctx)?,
        Kind::TcMulti => run_tc(&ctx)?,
        Kind::LinearBaseline => run_linear(&ctx)?,
        Kind::BaeFamily => run_bae(&ctx)?,
        Kind::WDecay => run_w(&ctx)?,
        Kind::LimitCompare => run_limit(&ctx)?,
        Kind::Equidistribution => run_equidist(&ctx)?,
        Kind::VdcSuite => run_vdc(&ctx)?,
        Kind::SupProbe => run_sup(&ctx)?,
    };
    Ok(RunOutput {
        config: cfg.clone(),
        checkpoints: out.checkpoints.unwrap_or(checkpoints),
        rows: out.rows,
        bound: out.bound,
        summary: out.summary,
        warnings: out.warnings,
        limit_report: out.limit,
        extra: out.extra,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn run_tb(ctx: &Ctx) -> Result<Outcome> {
    let spec = ctx.spec(true)?;
    let s = avg_nc_double(&spec, &ctx.power_pair()?, ctx.cfg.params.allow_out_of_range)?;
    Ok(Outcome::from_series(&s, ctx.root))
}

fn run_tc(ctx: &Ctx) -> Result<Outcome> {
    let p = &ctx.cfg.params;
    let spec = ctx.spec(true)?;
    let params = TcParams {
        b: coeffs(&p.b_vec, "params.b_vec")?,
        d: coeffs(&p.d_vec, "params.d_vec")?,
        c: ctx.c()?,
        exploratory: p.exploratory,
    };
    let s = avg_multi_tc(&spec, &params, p.allow_out_of_range)?;
    Ok(Outcome::from_series(&s, ctx.root))
}

fn run_linear(ctx: &Ctx) -> Result<Outcome> {
    let p = &ctx.cfg.params;
    let spec = ctx.spec(true)?;
    let params = LinearParams {
        a: coeff(&p.a, "params.a")?,
        b: coeff(&p.b, "params.b")?,
        d: real_or(&p.d, "params.d", HighReal::ZERO)?,
        start: 1,
    };
    let s = avg_linear_double(&spec, &params)?;
    Ok(Outcome::from_series(&s, ctx.root))
}

fn run_bae(ctx: &Ctx) -> Result<Outcome> {
    let p = &ctx.cfg.params;
    let c = ctx.c()?;
    let beta = match &p.beta {
        Some(b) => b.coeff("params.beta")?,
        None => Coeff::integer(1),
    };
    let (case, gamma) = match (p.p, p.q) {
        (Some(pp), Some(qq)) => (BaeCase::Rational { p: pp, q: qq }, HighReal::from_ratio(pp, qq)),
        _ => {
            let g = ctx.gamma()?;
            (BaeCase::Irrational { gamma: g }, g.value)
        }
    };
    let l = match &p.l {
        Some(l) => l.coeff("params.l")?,
        None => Coeff::real(ctx.l_param(gamma, beta.value)?),
    };
    let mut spec = ctx.spec(true)?;
    let lam = lambda_count(l.value, c, *spec.checkpoints.last().unwrap())?;
    let mut warnings = Vec::new();
    let before = spec.checkpoints.len();
    spec.checkpoints.retain(|&n| lam.count_upto(n) > 0);
    if spec.checkpoints.is_empty() {
        return Err(Error::Numeric("Λ ∩ [N] is empty at every checkpoint".into()));
    }
    if spec.checkpoints.len() < before {
        warnings.push(format!(
            "dropped {} leading checkpoints where Λ ∩ [N] is empty",
            before - spec.checkpoints.len()
        ));
    }
    let flow = SuspensionFlow::single(spec.system.clone())?;
    let pts = flow_points(&spec, &flow);
    let params = BaeParams { case, l, c, beta };
    let b = avg_bae_family(&spec, &params, BaeVariant::B, Some(&pts))?;
    let a = avg_bae_family(&spec, &params, BaeVariant::A, Some(&pts))?;
    let e = avg_bae_family(&spec, &params, BaeVariant::E, Some(&pts))?;
    let tail = spec.checkpoints.len().saturating_sub(3);
    let b_minus_a = (tail..spec.checkpoints.len())
        .map(|j| (b.mean[j] - a.mean[j]).norm())
        .fold(0.0, f64::max);
    let max_e = (tail..spec.checkpoints.len())
        .map(|j| e.mean[j].norm())
        .fold(0.0, f64::max);
    let chosen = match p.variant.unwrap_or(BaeVariant::B) {
        BaeVariant::B => &b,
        BaeVariant::A => &a,
        BaeVariant::E => &e,
    };
    let mut out = Outcome::from_series(chosen, ctx.root);
    out.checkpoints = Some(spec.checkpoints.clone());
    out.warnings.extend(warnings);
    out.summary = json!({
        "series": out.summary,
        "l": l.value.to_f64(),
        "lambda_count": lam.count(),
        "final": {"B": cplx(b.final_mean()), "A": cplx(a.final_mean()), "E": cplx(e.final_mean())},
        "comparison": {
            "b_minus_a_tail": b_minus_a,
            "max_e_tail": max_e,
            "slack": BAE_SLACK,
            "within": b_minus_a <= max_e + BAE_SLACK,
        },
    });
    Ok(out)
}

/// Least-squares slope of `ln y` against `ln x` over positive `y`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn run_w(ctx: &Ctx) -> Result<Outcome> {
    let p = &ctx.cfg.params;
    let c = ctx.c()?;
    let kp = kernel_params(c)?;
    let gamma = ctx.gamma()?.value;
    let beta = real_or(&p.beta, "params.beta", HighReal::ONE)?;
    let l = ctx.l_param(gamma, beta)?;
    let spec = ctx.spec(true)?;
    let flow = SuspensionFlow::single(spec.system.clone())?;
    let pts = flow_points(&spec, &flow);
    let mut rows = Vec::new();
    let mut per_n = Vec::new();
    for &n in &ctx.checkpoints {
        if n < 2 {
            continue;
        }
        let conv = best_approx(gamma, n)?;
        let w = avg_w(
            &spec,
            &WParams {
                kernel: kp,
                l,
                beta,
                n,
                conv,
            },
            Some(&pts),
        )?;
        let spread = w.values.iter().map(|v| (v.norm() - w.l1).abs()).fold(0.0, f64::max);
        rows.push(ResultRow {
            n,
            value_re: w.l1,
            value_im: 0.0,
            dispersion: spread,
            flags: 0,
        });
        per_n.push(json!({
            "n": n,
            "p": w.p,
            "q": w.q,
            "m": kp.m_of_n(n),
            "l1": w.l1,
            "block_l1": w.block_l1,
            "imag_residual": w.imag_residual,
        }));
    }
    if rows.is_empty() {
        return Err(Error::validation("w_decay needs checkpoints N >= 2"));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.value_re).collect();
    let mut out = Outcome::plain(
        rows,
        json!({"slope": loglog_slope(&xs, &ys), "l": l.to_f64(), "eps0": kp.eps0.to_f64(), "sigma0": kp.sigma0.to_f64(), "per_n": per_n}),
    );
    out.checkpoints = Some(xs.iter().map(|x| *x as u64).collect());
    Ok(out)
}

fn run_limit(ctx: &Ctx) -> Result<Outcome> {
    let p = &ctx.cfg.params;
    let spec = ctx.spec(true)?;
    let pair = ctx.power_pair()?;
    let direct = avg_nc_double(&spec, &pair, p.allow_out_of_range)?;
    let points = spec.base_points();
    let inner_n = p.inner_n.unwrap_or(limits::DEFAULT_INNER_N);
    let grid = p.grid.unwrap_or(limits::DEFAULT_GRID);
    let (eval, formula) = match (p.p, p.q) {
        (Some(pp), Some(qq)) => {
            if pair.alpha.value * HighReal::from_i64(qq) != pair.beta.value * HighReal::from_i64(pp) {
                return Err(Error::validation("params.p / params.q must equal alpha / beta"));
            }
            let ev = limit_rational_at(&spec.system, &spec.f, &spec.g, pp, qq, &points, inner_n, grid)?;
            (ev, json!({"type": "rational", "p": pp, "q": qq}))
        }
        (None, None) => {
            let gamma = ctx.gamma()?;
            let ev = limit_irrational_at(&spec.system, &spec.f, &spec.g, &gamma, &points, inner_n, grid)?;
            (ev, json!({"type": "irrational", "gamma": gamma.value.to_f64()}))
        }
        _ => return Err(Error::validation("give both params.p and params.q, or neither")),
    };
    let report = compare_limits_per_point(&direct, &eval, inner_n)?;
    let mut out = Outcome::from_series(&direct, ctx.root);
    out.summary = json!({
        "direct": out.summary,
        "formula": formula,
        "formula_per_point": eval.values.iter().copied().map(cplx).collect::<Vec<_>>(),
        "limit": report,
    });
    out.limit = Some(report);
    Ok(out)
}

fn run_equidist(ctx: &Ctx) -> Result<Outcome> {
    let p = &ctx.cfg.params;
    let alpha = match &p.alpha {
        Some(a) => a.coeff("params.alpha")?,
        None => Coeff::integer(1),
    };
    let c = ctx.c()?;
    let bins = p.bins.unwrap_or(100);
    let ik = match (p.ik_k, p.ik_s) {
        (Some(k), Some(s)) => Some((k, s)),
        (None, None) => None,
        _ => return Err(Error::validation("give both params.ik_k and params.ik_s, or neither")),
    };
    let reps = equidistribution_report(&alpha, c, &ctx.checkpoints, bins, ik)?;
    let rows = reps
        .iter()
        .map(|r| ResultRow {
            n: r.n,
            value_re: r.star_discrepancy,
            value_im: r.hit_rate.map_or(0.0, |h| h.frequency),
            dispersion: 0.0,
            flags: r.boundary_flags,
        })
        .collect();
    let decreasing = reps.windows(2).all(|w| w[1].star_discrepancy < w[0].star_discrepancy);
    let last = reps.last().unwrap();
    let mut hist = String::from("bin,lo,hi,count\n");
    for (j, h) in last.histogram.iter().enumerate() {
        hist.push_str(&format!(
            "{j},{},{},{h}\n",
            j as f64 / bins as f64,
            (j + 1) as f64 / bins as f64
        ));
    }
    let brief: Vec<Value> = reps
        .iter()
        .map(|r| {
            json!({"n": r.n, "star_discrepancy": r.star_discrepancy, "equidistributed": r.equidistributed,
                   "hit_rate": r.hit_rate, "boundary_flags": r.boundary_flags})
        })
        .collect();
    let mut out = Outcome::plain(rows, json!({"reports": brief, "decreasing": decreasing}));
    out.extra.push(("histogram".into(), hist));
    Ok(out)
}

fn run_vdc(ctx: &Ctx) -> Result<Outcome> {
    let count = ctx.cfg.params.instances.unwrap_or(200);
    let mut rows = Vec::with_capacity(count + 1);
    let push = |rows: &mut Vec<ResultRow>, s: crate::kernels::VdcSides| {
        rows.push(ResultRow {
            n: rows.len() as u64 + 1,
            value_re: s.lhs,
            value_im: s.rhs,
            dispersion: s.rhs - s.lhs,
            flags: (!s.holds()) as u64,
        })
    };
    let g1 = FiniteSeq::from_fn(1..=10, |_| Complex64::new(1.0, 0.0));
    let worked = vdc_check(&g1, &(1..=5).collect::<BTreeSet<i64>>())?;
    push(&mut rows, worked);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.sample.seed);
    for _ in 0..count {
        let (g, h) = random_vdc_instance(&mut rng);
        push(&mut rows, vdc_check(&g, &h)?);
    }
    let violations = rows.iter().filter(|r| r.flags > 0).count();
    let quad = FiniteSeq::from_fn(-24..=24, |x| crate::dynsys::e1((0.1 * (x * x) as f64).rem_euclid(1.0)));
    let both: Vec<Value> = [4u64, 8]
        .iter()
        .map(|&n| {
            multiplicative_difference_sides([&quad, &quad, &quad, &quad], 1, 2, n)
                .map(|b| json!({"n": n, "lhs": b.lhs, "rhs": b.rhs, "ratio": b.ratio}))
        })
        .collect::<std::result::Result<_, _>>()?;
    Ok(Outcome::plain(
        rows,
        json!({
            "worked_example": {"lhs": worked.lhs, "rhs": worked.rhs},
            "instances": count,
            "violations": violations,
            "multiplicative_difference_both_sides": both,
        }),
    ))
}

fn run_sup(ctx: &Ctx) -> Result<Outcome> {
    let spec = ctx.spec(false)?;
    let alphas = coeffs(&ctx.cfg.params.alphas, "params.alphas")?;
    let probe = sup_average_probe(&spec, &alphas, ctx.c()?)?;
    let s = &probe.series;
    let np = s.per_point.len() as f64;
    let rows = (0..s.checkpoints.len())
        .map(|j| {
            let sq: f64 = s
                .per_point
                .iter()
                .map(|r| {
                    let m = r[..=j].iter().map(|v| v.norm()).fold(0.0, f64::max);
                    m * m
                })
                .sum();
            ResultRow {
                n: s.checkpoints[j],
                value_re: (sq / np).sqrt(),
                value_im: 0.0,
                dispersion: s.dispersion[j],
                flags: s.flags[j],
            }
        })
        .collect();
    let mut out = Outcome::plain(
        rows,
        json!({
            "per_point_sup": probe.per_point_sup,
            "l2": probe.l2,
            "bound": s.bound,
            "l2_over_bound": if s.bound > 0.0 { probe.l2 / s.bound } else { 0.0 },
        }),
    );
    out.bound = Some(s.bound);
    Ok(out)
}

/// Checks `out` against an expectations document keyed by experiment name.
/// Each entry holds either `"value": [re, im]` with `"tol"`, or a JSON
/// `"pointer"` into the summary with `"max"` and/or `"min"`. Returns the
/// list of breaches.
pub fn check_expectations(out: &RunOutput, expectations: &Value) -> Result<Vec<String>> {
    let name = out.config.name();
    let entry = expectations
        .get(name)
        .ok_or_else(|| Error::validation(format!("no expectations for '{name}'")))?;
    let items: Vec<&Value> = match entry {
        Value::Array(a) => a.iter().collect(),
        v => vec![v],
    };
    let mut breaches = Vec::new();
    for e in items {
        if let Some(v) = e.get("value") {
            let re = v.get(0).and_then(Value::as_f64);
            let im = v.get(1).and_then(Value::as_f64).unwrap_or(0.0);
            let tol = e.get("tol").and_then(Value::as_f64);
            let (Some(re), Some(tol)) = (re, tol) else {
                return Err(Error::validation(format!("{name}: value needs [re, im] and tol")));
            };
            let got = out.final_value().ok_or_else(|| Error::validation("no rows to check"))?;
            let d = (got - Complex64::new(re, im)).norm();
            if d > tol {
                breaches.push(format!(
                    "{name}: final value {got} differs from {re}+{im}i by {d} > {tol}"
                ));
            }
        } else if let Some(ptr) = e.get("pointer").and_then(Value::as_str) {
            let got = out
                .summary
                .pointer(ptr)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::validation(format!("{name}: summary has no number at {ptr}")))?;
            if let Some(max) = e.get("max").and_then(Value::as_f64) {
                if got > max {
                    breaches.push(format!("{name}: {ptr} = {got} > {max}"));
                }
            }
            if let Some(min) = e.get("min").and_then(Value::as_f64) {
                if got < min {
                    breaches.push(format!("{name}: {ptr} = {got} < {min}"));
                }
            }
        } else {
            return Err(Error::validation(format!("{name}: expectation needs value or pointer")));
        }
    }
    Ok(breaches)
}
