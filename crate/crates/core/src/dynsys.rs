//! Measure-preserving systems with closed-form powers, their points and the
//! bounded observables evaluated on them.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::precision::{frac, HighReal, PrecisionError};

/// Largest |k| accepted by [`MpSystem::power_apply`].
pub const MAX_POWER: i64 = 1 << 62;

#[derive(Debug, Error)]
pub enum DynError {
    #[error("power {0} exceeds the 2^62 range")]
    PowerRange(i128),
    #[error("point does not belong to this system: {0}")]
    PointMismatch(String),
    #[error("observable is incompatible with this system: {0}")]
    Incompatible(String),
    #[error("invalid system: {0}")]
    Invalid(String),
    #[error(transparent)]
    Precision(#[from] PrecisionError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum MpSystem {
    CircleRotation {
        theta: HighReal,
    },
    TorusTranslation {
        theta: Vec<HighReal>,
    },
    /// `(x, y) -> (x + θ, y + x)` on the 2-torus.
    SkewProduct {
        theta: HighReal,
    },
    /// Left shift on `alphabet^Z` with uniform product measure. Sequences
    /// are generated on demand by a keyed hash.
    BernoulliShift {
        alphabet: u32,
        prf_seed: u64,
    },
    FiniteCycle {
        modulus: u64,
    },
    Product(Vec<MpSystem>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SystemPoint {
    Circle(HighReal),
    Torus(Vec<HighReal>),
    Skew(HighReal, HighReal),
    /// The sequence `n -> prf(seed, offset + n)`.
    Bernoulli {
        seed: u64,
        offset: i64,
    },
    Cycle(u64),
    Product(Vec<SystemPoint>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Observable {
    Constant(Complex64),
    /// `e(Σ m_i x_i)` over the continuous coordinates of the point.
    Character(Vec<i64>),
    /// Indicator of a box, one half-open interval per coordinate.
    CoordinateIndicator(Vec<(f64, f64)>),
    /// `x_0 - (alphabet - 1)/2` on a Bernoulli shift.
    BernoulliMeanZero,
    /// Lookup by residue on a finite cycle (mixed radix over products).
    FiniteTable(Vec<Complex64>),
    /// One factor observable per component of a product system.
    Tensor(Vec<Observable>),
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Symbol at `index` of the Bernoulli sequence keyed by `(key, seed)`.
pub fn prf_symbol(key: u64, seed: u64, index: i64, alphabet: u32) -> u32 {
    let h = splitmix(splitmix(key ^ splitmix(seed)) ^ index as u64);
    // multiply-shift keeps the bias below 2^-32 for small alphabets
    (((h >> 32) * alphabet as u64) >> 32) as u32
}

fn shift_mod1(x: HighReal, k: i64, theta: HighReal) -> Result<HighReal, PrecisionError> {
    frac(x + HighReal::from_i64(k) * theta)
}

fn check_power(k: i128) -> Result<i64, DynError> {
    if k.unsigned_abs() > MAX_POWER as u128 {
        Err(DynError::PowerRange(k))
    } else {
        Ok(k as i64)
    }
}

impl MpSystem {
    pub fn validate(&self) -> Result<(), DynError> {
        match self {
            MpSystem::CircleRotation { theta } => finite(*theta),
            MpSystem::TorusTranslation { theta } => {
                if theta.is_empty() {
                    return Err(DynError::Invalid("torus needs at least one angle".into()));
                }
                theta.iter().try_for_each(|t| finite(*t))
            }
            MpSystem::SkewProduct { theta } => finite(*theta),
            MpSystem::BernoulliShift { alphabet, .. } => {
                if *alphabet < 2 {
                    Err(DynError::Invalid(
                        "Bernoulli alphabet must have at least 2 symbols".into(),
                    ))
                } else {
                    Ok(())
                }
            }
            MpSystem::FiniteCycle { modulus } => {
                if *modulus == 0 {
                    Err(DynError::Invalid("cycle modulus must be positive".into()))
                } else {
                    Ok(())
                }
            }
            MpSystem::Product(parts) => {
                if parts.is_empty() {
                    return Err(DynError::Invalid("empty product".into()));
                }
                parts.iter().try_for_each(|p| p.validate())
            }
        }
    }

    /// `T^k x` in closed form, for any `|k| ≤ 2^62`.
    pub fn power_apply(&self, k: i64, x: &SystemPoint) -> Result<SystemPoint, DynError> {
        check_power(k as i128)?;
        Ok(match (self, x) {
            (MpSystem::CircleRotation { theta }, SystemPoint::Circle(v)) => {
                SystemPoint::Circle(shift_mod1(*v, k, *theta)?)
            }
            (MpSystem::TorusTranslation { theta }, SystemPoint::Torus(v)) if v.len() == theta.len() => {
                SystemPoint::Torus(
                    v.iter()
                        .zip(theta)
                        .map(|(v, t)| shift_mod1(*v, k, *t))
                        .collect::<Result<_, _>>()?,
                )
            }
            (MpSystem::SkewProduct { theta }, SystemPoint::Skew(a, b)) => {
                let kk = HighReal::from_i64(k);
                let tri = k as i128 * (k as i128 - 1) / 2;
                let nx = shift_mod1(*a, k, *theta)?;
                let ny = frac(*b + kk * *a + frac(HighReal::from_i128(tri) * *theta)?)?;
                SystemPoint::Skew(nx, ny)
            }
            (MpSystem::BernoulliShift { .. }, SystemPoint::Bernoulli { seed, offset }) => {
                let off = check_power(*offset as i128 + k as i128)?;
                SystemPoint::Bernoulli {
                    seed: *seed,
                    offset: off,
                }
            }
            (MpSystem::FiniteCycle { modulus }, SystemPoint::Cycle(r)) => {
                SystemPoint::Cycle((*r as i128 + k as i128).rem_euclid(*modulus as i128) as u64)
            }
            (MpSystem::Product(parts), SystemPoint::Product(pts)) if parts.len() == pts.len() => SystemPoint::Product(
                parts
                    .iter()
                    .zip(pts)
                    .map(|(s, p)| s.power_apply(k, p))
                    .collect::<Result<_, _>>()?,
            ),
            _ => return Err(DynError::PointMismatch(format!("{x:?}"))),
        })
    }

    /// Deterministic sample of `count` points distributed by the invariant
    /// measure.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<SystemPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.sample_one(&mut rng)).collect()
    }

    fn sample_one(&self, rng: &mut ChaCha8Rng) -> SystemPoint {
        match self {
            MpSystem::CircleRotation { .. } => SystemPoint::Circle(uniform_dd(rng)),
            MpSystem::TorusTranslation { theta } => SystemPoint::Torus(theta.iter().map(|_| uniform_dd(rng)).collect()),
            MpSystem::SkewProduct { .. } => {
                let a = uniform_dd(rng);
                SystemPoint::Skew(a, uniform_dd(rng))
            }
            MpSystem::BernoulliShift { .. } => SystemPoint::Bernoulli {
                seed: rng.gen(),
                offset: 0,
            },
            MpSystem::FiniteCycle { modulus } => SystemPoint::Cycle(rng.gen_range(0..*modulus)),
            MpSystem::Product(parts) => SystemPoint::Product(parts.iter().map(|p| p.sample_one(rng)).collect()),
        }
    }

    /// Checks that `obs` can be evaluated on points of this system.
    pub fn check_observable(&self, obs: &Observable) -> Result<(), DynError> {
        let bad = |why: &str| Err(DynError::Incompatible(format!("{why} ({obs:?} on {self:?})")));
        match obs {
            Observable::Constant(_) => Ok(()),
            Observable::Character(m) => match self.continuous_dim() {
                Some(d) if d == m.len() => Ok(()),
                _ => bad("character frequency length must match the continuous dimension"),
            },
            Observable::CoordinateIndicator(cells) => {
                if cells.len() != self.coordinate_dim() {
                    return bad("one interval per coordinate expected");
                }
                Ok(())
            }
            Observable::BernoulliMeanZero => match self {
                MpSystem::BernoulliShift { .. } => Ok(()),
                _ => bad("mean-zero symbol observable needs a Bernoulli shift"),
            },
            Observable::FiniteTable(t) => match self.table_size() {
                Some(m) if m == t.len() as u128 => Ok(()),
                _ => bad("table length must equal the cycle size"),
            },
            Observable::Tensor(fs) => match self {
                MpSystem::Product(parts) if parts.len() == fs.len() => {
                    parts.iter().zip(fs).try_for_each(|(s, f)| s.check_observable(f))
                }
                _ => bad("tensor observable needs a product with matching arity"),
            },
        }
    }

    fn continuous_dim(&self) -> Option<usize> {
        match self {
            MpSystem::CircleRotation { .. } => Some(1),
            MpSystem::TorusTranslation { theta } => Some(theta.len()),
            MpSystem::SkewProduct { .. } => Some(2),
            MpSystem::Product(parts) => parts.iter().map(|p| p.continuous_dim()).sum(),
            _ => None,
        }
    }

    fn coordinate_dim(&self) -> usize {
        match self {
            MpSystem::CircleRotation { .. } | MpSystem::BernoulliShift { .. } | MpSystem::FiniteCycle { .. } => 1,
            MpSystem::TorusTranslation { theta } => theta.len(),
            MpSystem::SkewProduct { .. } => 2,
            MpSystem::Product(parts) => parts.iter().map(|p| p.coordinate_dim()).sum(),
        }
    }

    fn table_size(&self) -> Option<u128> {
        match self {
            MpSystem::FiniteCycle { modulus } => Some(*modulus as u128),
            MpSystem::Product(parts) => parts
                .iter()
                .try_fold(1u128, |acc, p| p.table_size().and_then(|m| acc.checked_mul(m))),
            _ => None,
        }
    }
}

fn finite(x: HighReal) -> Result<(), DynError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(DynError::Invalid("non-finite rotation angle".into()))
    }
}

/// Uniform in `[0, 1)` with 106 random bits.
fn uniform_dd(rng: &mut ChaCha8Rng) -> HighReal {
    let hi = (rng.gen::<u64>() >> 11) as f64 * f64::EPSILON / 2.0;
    let lo = (rng.gen::<u64>() >> 11) as f64 * (f64::EPSILON / 2.0) * (f64::EPSILON / 2.0);
    HighReal::from_f64(hi) + HighReal::from_f64(lo)
}

impl SystemPoint {
    /// Coordinates used by characters and indicators. Bernoulli points
    /// expose their zeroth symbol, cycles their residue.
    fn coords(&self, sys: &MpSystem, out: &mut Vec<f64>) {
        match (self, sys) {
            (SystemPoint::Circle(v), _) => out.push(v.to_f64()),
            (SystemPoint::Torus(v), _) => out.extend(v.iter().map(|x| x.to_f64())),
            (SystemPoint::Skew(a, b), _) => {
                out.push(a.to_f64());
                out.push(b.to_f64());
            }
            (SystemPoint::Bernoulli { seed, offset }, MpSystem::BernoulliShift { alphabet, prf_seed }) => {
                out.push(prf_symbol(*prf_seed, *seed, *offset, *alphabet) as f64)
            }
            (SystemPoint::Cycle(r), _) => out.push(*r as f64),
            (SystemPoint::Product(ps), MpSystem::Product(ss)) => {
                for (p, s) in ps.iter().zip(ss) {
                    p.coords(s, out);
                }
            }
            _ => {}
        }
    }

    fn continuous(&self, out: &mut Vec<HighReal>) {
        match self {
            SystemPoint::Circle(v) => out.push(*v),
            SystemPoint::Torus(v) => out.extend_from_slice(v),
            SystemPoint::Skew(a, b) => {
                out.push(*a);
                out.push(*b);
            }
            SystemPoint::Product(ps) => ps.iter().for_each(|p| p.continuous(out)),
            _ => {}
        }
    }

    fn table_index(&self, sys: &MpSystem) -> Option<u128> {
        match (self, sys) {
            (SystemPoint::Cycle(r), MpSystem::FiniteCycle { .. }) => Some(*r as u128),
            (SystemPoint::Product(ps), MpSystem::Product(ss)) => {
                let mut idx = 0u128;
                for (p, s) in ps.iter().zip(ss) {
                    idx = idx * s.table_size()? + p.table_index(s)?;
                }
                Some(idx)
            }
            _ => None,
        }
    }
}

/// `e(t) = exp(2πi t)` for `t` already reduced mod 1.
pub fn e1(t: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * t).sin_cos();
    Complex64::new(c, s)
}

impl Observable {
    /// Sup norm, used to report the trivial bound of an average.
    pub fn bound(&self, sys: &MpSystem) -> f64 {
        match self {
            Observable::Constant(v) => v.norm(),
            Observable::Character(_) | Observable::CoordinateIndicator(_) => 1.0,
            Observable::BernoulliMeanZero => match sys {
                MpSystem::BernoulliShift { alphabet, .. } => (*alphabet as f64 - 1.0) / 2.0,
                _ => 0.0,
            },
            Observable::FiniteTable(t) => t.iter().map(|v| v.norm()).fold(0.0, f64::max),
            Observable::Tensor(fs) => match sys {
                MpSystem::Product(ss) => fs.iter().zip(ss).map(|(f, s)| f.bound(s)).product(),
                _ => 0.0,
            },
        }
    }

    /// Evaluates the observable. Compatibility is assumed to have been
    /// checked with [`MpSystem::check_observable`]; mismatches yield an error.
    pub fn eval(&self, sys: &MpSystem, x: &SystemPoint) -> Result<Complex64, DynError> {
        match self {
            Observable::Constant(v) => Ok(*v),
            Observable::Character(m) => {
                let mut cs = Vec::with_capacity(m.len());
                x.continuous(&mut cs);
                if cs.len() != m.len() {
                    return Err(DynError::Incompatible("character dimension".into()));
                }
                let mut phase = HighReal::ZERO;
                for (k, v) in m.iter().zip(&cs) {
                    phase += HighReal::from_i64(*k) * *v;
                }
                Ok(e1(frac(phase)?.to_f64()))
            }
            Observable::CoordinateIndicator(cells) => {
                let mut cs = Vec::with_capacity(cells.len());
                x.coords(sys, &mut cs);
                if cs.len() != cells.len() {
                    return Err(DynError::Incompatible("indicator dimension".into()));
                }
                let inside = cs.iter().zip(cells).all(|(v, (lo, hi))| *lo <= *v && *v < *hi);
                Ok(Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0))
            }
            Observable::BernoulliMeanZero => match (sys, x) {
                (MpSystem::BernoulliShift { alphabet, prf_seed }, SystemPoint::Bernoulli { seed, offset }) => {
                    let s = prf_symbol(*prf_seed, *seed, *offset, *alphabet) as f64;
                    Ok(Complex64::new(s - (*alphabet as f64 - 1.0) / 2.0, 0.0))
                }
                _ => Err(DynError::Incompatible(
                    "mean-zero symbol needs a Bernoulli point".into(),
                )),
            },
            Observable::FiniteTable(t) => {
                let i = x
                    .table_index(sys)
                    .ok_or_else(|| DynError::Incompatible("table needs a cycle point".into()))?;
                t.get(i as usize)
                    .copied()
                    .ok_or_else(|| DynError::Incompatible("table index out of range".into()))
            }
            Observable::Tensor(fs) => match (sys, x) {
                (MpSystem::Product(ss), SystemPoint::Product(ps)) if ss.len() == fs.len() && ps.len() == fs.len() => {
                    let mut acc = Complex64::new(1.0, 0.0);
                    for ((f, s), p) in fs.iter().zip(ss).zip(ps) {
                        acc *= f.eval(s, p)?;
                    }
                    Ok(acc)
                }
                _ => Err(DynError::Incompatible(
                    "tensor observable on a non-product point".into(),
                )),
            },
        }
    }
}

/// `m` commuting transformations built from one system: the coordinate
/// translations of a torus, the factors of a product, or the system itself.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutingFamily {
    pub system: MpSystem,
}

impl CommutingFamily {
    pub fn new(system: MpSystem) -> Result<Self, DynError> {
        system.validate()?;
        Ok(CommutingFamily { system })
    }

    pub fn dim(&self) -> usize {
        match &self.system {
            MpSystem::TorusTranslation { theta } => theta.len(),
            MpSystem::Product(parts) => parts.len(),
            _ => 1,
        }
    }

    /// `T_1^{k_1} ⋯ T_m^{k_m} x`.
    pub fn apply(&self, ks: &[i64], x: &SystemPoint) -> Result<SystemPoint, DynError> {
        if ks.len() != self.dim() {
            return Err(DynError::Invalid(format!(
                "expected {} powers, got {}",
                self.dim(),
                ks.len()
            )));
        }
        match (&self.system, x) {
            (MpSystem::TorusTranslation { theta }, SystemPoint::Torus(v)) if v.len() == theta.len() => {
                let mut out = Vec::with_capacity(v.len());
                for ((v, t), k) in v.iter().zip(theta).zip(ks) {
                    check_power(*k as i128)?;
                    out.push(shift_mod1(*v, *k, *t)?);
                }
                Ok(SystemPoint::Torus(out))
            }
            (MpSystem::Product(parts), SystemPoint::Product(ps)) if ps.len() == parts.len() => {
                Ok(SystemPoint::Product(
                    parts
                        .iter()
                        .zip(ps)
                        .zip(ks)
                        .map(|((s, p), k)| s.power_apply(*k, p))
                        .collect::<Result<_, _>>()?,
                ))
            }
            (sys, _) => sys.power_apply(ks[0], x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_real;

    fn sqrt2m1() -> HighReal {
        parse_real("sqrt(2) - 1").unwrap()
    }

    fn systems() -> Vec<MpSystem> {
        vec![
            MpSystem::CircleRotation { theta: sqrt2m1() },
            MpSystem::TorusTranslation {
                theta: vec![sqrt2m1(), parse_real("sqrt(3) - 1").unwrap()],
            },
            MpSystem::SkewProduct { theta: sqrt2m1() },
            MpSystem::BernoulliShift {
                alphabet: 3,
                prf_seed: 7,
            },
            MpSystem::FiniteCycle { modulus: 12 },
            MpSystem::Product(vec![
                MpSystem::FiniteCycle { modulus: 5 },
                MpSystem::CircleRotation { theta: sqrt2m1() },
            ]),
        ]
    }

    fn close(a: &SystemPoint, b: &SystemPoint) -> bool {
        let d = |x: HighReal, y: HighReal| {
            let t = (x - y).to_f64().abs();
            t.min(1.0 - t)
        };
        match (a, b) {
            (SystemPoint::Circle(x), SystemPoint::Circle(y)) => d(*x, *y) < 1e-20,
            (SystemPoint::Torus(x), SystemPoint::Torus(y)) => x.iter().zip(y).all(|(x, y)| d(*x, *y) < 1e-20),
            (SystemPoint::Skew(x1, y1), SystemPoint::Skew(x2, y2)) => d(*x1, *x2) < 1e-20 && d(*y1, *y2) < 1e-14,
            (SystemPoint::Product(x), SystemPoint::Product(y)) => x.iter().zip(y).all(|(x, y)| close(x, y)),
            _ => a == b,
        }
    }

    #[test]
    fn power_laws_hold() {
        for sys in systems() {
            let pts = sys.sample_points(4, 11);
            for x in &pts {
                assert!(close(&sys.power_apply(0, x).unwrap(), x));
                for &(a, b) in &[(3i64, 5i64), (-7, 2), (1000, -999), (123_456, 654_321)] {
                    let lhs = sys.power_apply(a + b, x).unwrap();
                    let rhs = sys.power_apply(a, &sys.power_apply(b, x).unwrap()).unwrap();
                    assert!(close(&lhs, &rhs), "{sys:?} {a} {b}: {lhs:?} vs {rhs:?}");
                }
                let back = sys.power_apply(-17, &sys.power_apply(17, x).unwrap()).unwrap();
                assert!(close(&back, x));
            }
        }
    }

    #[test]
    fn skew_matches_iteration() {
        let sys = MpSystem::SkewProduct { theta: sqrt2m1() };
        let x = sys.sample_points(1, 3).remove(0);
        let mut y = x.clone();
        for k in 1..=50 {
            y = sys.power_apply(1, &y).unwrap();
            assert!(close(&y, &sys.power_apply(k, &x).unwrap()));
        }
    }

    #[test]
    fn huge_powers_rejected() {
        let sys = MpSystem::FiniteCycle { modulus: 3 };
        assert!(sys.power_apply(i64::MAX, &SystemPoint::Cycle(0)).is_err());
        assert!(sys.power_apply(MAX_POWER, &SystemPoint::Cycle(0)).is_ok());
    }

    #[test]
    fn finite_cycle_wraps() {
        let sys = MpSystem::FiniteCycle { modulus: 12 };
        assert_eq!(
            sys.power_apply(-1, &SystemPoint::Cycle(0)).unwrap(),
            SystemPoint::Cycle(11)
        );
        assert_eq!(
            sys.power_apply(25, &SystemPoint::Cycle(3)).unwrap(),
            SystemPoint::Cycle(4)
        );
    }

    #[test]
    fn pushforward_of_cells_is_uniform() {
        // 16 cells, 4096 samples: cell counts after T^k stay near 256
        for sys in [
            MpSystem::CircleRotation { theta: sqrt2m1() },
            MpSystem::SkewProduct { theta: sqrt2m1() },
        ] {
            let pts = sys.sample_points(4096, 5);
            for k in [1i64, 37, -1000] {
                let mut counts = [0usize; 16];
                for p in &pts {
                    let y = sys.power_apply(k, p).unwrap();
                    let v = match y {
                        SystemPoint::Circle(v) => v.to_f64(),
                        SystemPoint::Skew(_, b) => b.to_f64(),
                        _ => unreachable!(),
                    };
                    counts[(v * 16.0) as usize] += 1;
                }
                for c in counts {
                    assert!((160..=352).contains(&c), "{sys:?} k={k}: {counts:?}");
                }
            }
        }
    }

    #[test]
    fn bernoulli_symbols_are_balanced_and_shift() {
        let sys = MpSystem::BernoulliShift {
            alphabet: 2,
            prf_seed: 1,
        };
        let x = SystemPoint::Bernoulli { seed: 99, offset: 0 };
        let f = Observable::BernoulliMeanZero;
        let mut s = 0.0;
        for k in 0..20_000 {
            s += f.eval(&sys, &sys.power_apply(k, &x).unwrap()).unwrap().re;
        }
        assert!((s / 20_000.0).abs() < 0.02);
        let y = sys.power_apply(5, &x).unwrap();
        assert_eq!(
            f.eval(&sys, &sys.power_apply(3, &y).unwrap()).unwrap(),
            f.eval(&sys, &sys.power_apply(8, &x).unwrap()).unwrap()
        );
    }

    #[test]
    fn sampling_is_deterministic() {
        for sys in systems() {
            assert_eq!(sys.sample_points(5, 42), sys.sample_points(5, 42));
        }
    }

    #[test]
    fn observables_and_compatibility() {
        let rot = MpSystem::CircleRotation { theta: sqrt2m1() };
        let x = SystemPoint::Circle(HighReal::from_f64(0.25));
        let v = Observable::Character(vec![1]).eval(&rot, &x).unwrap();
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(rot.check_observable(&Observable::Character(vec![1, 2])).is_err());
        assert!(rot.check_observable(&Observable::FiniteTable(vec![])).is_err());
        let prod = MpSystem::Product(vec![
            MpSystem::FiniteCycle { modulus: 2 },
            MpSystem::FiniteCycle { modulus: 3 },
        ]);
        let table: Vec<Complex64> = (0..6).map(|i| Complex64::new(i as f64, 0.0)).collect();
        let obs = Observable::FiniteTable(table);
        prod.check_observable(&obs).unwrap();
        let p = SystemPoint::Product(vec![SystemPoint::Cycle(1), SystemPoint::Cycle(2)]);
        assert_eq!(obs.eval(&prod, &p).unwrap().re, 5.0);
        let ind = Observable::CoordinateIndicator(vec![(1.0, 2.0), (2.0, 3.0)]);
        assert_eq!(ind.eval(&prod, &p).unwrap().re, 1.0);
        let tensor = Observable::Tensor(vec![
            Observable::FiniteTable(vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]),
            Observable::Constant(Complex64::new(0.5, 0.0)),
        ]);
        assert_eq!(tensor.eval(&prod, &p).unwrap().re, -0.5);
        assert_eq!(tensor.bound(&prod), 0.5);
    }

    #[test]
    fn commuting_family_matches_single_system() {
        let t = MpSystem::TorusTranslation {
            theta: vec![sqrt2m1(), parse_real("sqrt(3) - 1").unwrap()],
        };
        let fam = CommutingFamily::new(t.clone()).unwrap();
        assert_eq!(fam.dim(), 2);
        let x = t.sample_points(1, 8).remove(0);
        let a = fam.apply(&[5, 5], &x).unwrap();
        assert!(close(&a, &t.power_apply(5, &x).unwrap()));
        let b = fam.apply(&[3, 0], &fam.apply(&[0, 4], &x).unwrap()).unwrap();
        let c = fam.apply(&[0, 4], &fam.apply(&[3, 0], &x).unwrap()).unwrap();
        assert!(close(&b, &c));
        assert!(fam.apply(&[1], &x).is_err());
    }
}
