//! Suspension flows under the constant roof 1 and lifted observables.
//!
//! A point is `(x, s)` with `s ∈ [0, 1)` per flow direction, and
//! `S^t (x, s) = (T^{⌊t + s⌋} x, {t + s})`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynsys::{CommutingFamily, DynError, MpSystem, Observable, SystemPoint};
use crate::precision::{split_floor, FloorResult, HighReal};

#[derive(Clone, Debug, PartialEq)]
pub struct FlowPoint {
    pub base: SystemPoint,
    pub heights: Vec<HighReal>,
}

/// The flow (or commuting `m`-flow) built over a commuting family.
#[derive(Clone, Debug)]
pub struct SuspensionFlow {
    pub family: CommutingFamily,
}

/// `⌊t + s⌋` and `{t + s}` for a time already split into floor and
/// fractional part.
fn advance(t: &FloorResult, s: HighReal) -> (i64, HighReal) {
    let sum = t.frac_value + s;
    if sum >= HighReal::ONE {
        (t.floor_value + 1, sum - HighReal::ONE)
    } else {
        (t.floor_value, sum)
    }
}

/// 1 when `{t} ∈ [1 - s, 1)`, i.e. the flow crosses an extra roof; this
/// splits the lift of a floor into its `L₀` and `L₁` parts.
pub fn height_carry(s: HighReal, t: HighReal) -> Result<u8, DynError> {
    let ft = crate::precision::frac(t)?;
    Ok(if ft + s >= HighReal::ONE { 1 } else { 0 })
}

impl SuspensionFlow {
    pub fn new(family: CommutingFamily) -> Self {
        SuspensionFlow { family }
    }

    pub fn single(system: MpSystem) -> Result<Self, DynError> {
        Ok(SuspensionFlow {
            family: CommutingFamily::new(system)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.family.dim()
    }

    pub fn system(&self) -> &MpSystem {
        &self.family.system
    }

    /// `S_1^{t_1} ⋯ S_m^{t_m} p` for raw real times.
    pub fn flow_apply(&self, t: &[HighReal], p: &FlowPoint) -> Result<FlowPoint, DynError> {
        let floors = t.iter().map(|t| split_floor(*t, 0.0)).collect::<Result<Vec<_>, _>>()?;
        self.flow_apply_floors(&floors, p)
    }

    /// Same as [`flow_apply`](Self::flow_apply) for times that were split by
    /// the precision layer, e.g. `α n^c` from `floor_pow`.
    pub fn flow_apply_floors(&self, t: &[FloorResult], p: &FlowPoint) -> Result<FlowPoint, DynError> {
        if t.len() != self.dim() || p.heights.len() != self.dim() {
            return Err(DynError::Invalid(format!(
                "flow of dimension {} got {} times and {} heights",
                self.dim(),
                t.len(),
                p.heights.len()
            )));
        }
        let mut ks = Vec::with_capacity(t.len());
        let mut hs = Vec::with_capacity(t.len());
        for (t, s) in t.iter().zip(&p.heights) {
            let (k, h) = advance(t, *s);
            ks.push(k);
            hs.push(h);
        }
        Ok(FlowPoint {
            base: self.family.apply(&ks, &p.base)?,
            heights: hs,
        })
    }

    /// Base points from the system sampler, heights uniform in `[0, 1)`.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<FlowPoint> {
        let base = self.family.system.sample_points(count, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_F10A);
        base.into_iter()
            .map(|b| FlowPoint {
                base: b,
                heights: (0..self.dim())
                    .map(|_| HighReal::from_f64((rng.gen::<u64>() >> 11) as f64 * f64::EPSILON / 2.0))
                    .collect(),
            })
            .collect()
    }
}

/// `f̃(x, s) = f(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedObservable {
    pub inner: Observable,
}

pub fn lift_observable(f: Observable) -> LiftedObservable {
    LiftedObservable { inner: f }
}

impl LiftedObservable {
    pub fn eval(&self, flow: &SuspensionFlow, p: &FlowPoint) -> Result<Complex64, DynError> {
        self.inner.eval(flow.system(), &p.base)
    }
}
