//! JSON experiment configuration: types, loading with presets and `--set`
//! overrides, and conversion into engine values.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::averages::BaeVariant;
use crate::dynsys::{MpSystem, Observable};
use crate::error::{Error, Result};
use crate::expr::parse_coeff;
use crate::precision::{Coeff, HighReal, PRECISION_BITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    TbDirect,
    TcMulti,
    LinearBaseline,
    BaeFamily,
    WDecay,
    LimitCompare,
    Equidistribution,
    VdcSuite,
    SupProbe,
}

/// A real parameter written as a JSON number or an expression string such
/// as `"sqrt(2)-1"`. Numbers keep their decimal spelling, so `1.02` is read
/// as the exact ratio 51/50.
#[derive(Clone, Debug, PartialEq)]
pub struct RealExpr(pub String);

impl<'de> Deserialize<'de> for RealExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => Ok(RealExpr(n.to_string())),
            Value::String(s) => Ok(RealExpr(s)),
            other => Err(serde::de::Error::custom(format!(
                "expected a number or expression string, found {other}"
            ))),
        }
    }
}

impl Serialize for RealExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl RealExpr {
    pub fn coeff(&self, key: &str) -> Result<Coeff> {
        parse_coeff(&self.0).map_err(|e| Error::validation(format!("{key}: {e}")))
    }

    pub fn real(&self, key: &str) -> Result<HighReal> {
        Ok(self.coeff(key)?.value)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemSpec {
    CircleRotation {
        theta: RealExpr,
    },
    TorusTranslation {
        theta: Vec<RealExpr>,
    },
    SkewProduct {
        theta: RealExpr,
    },
    BernoulliShift {
        alphabet: u32,
        #[serde(default)]
        prf_seed: u64,
    },
    FiniteCycle {
        modulus: u64,
    },
    Product {
        factors: Vec<SystemSpec>,
    },
}

impl SystemSpec {
    pub fn build(&self) -> Result<MpSystem> {
        let sys = match self {
            SystemSpec::CircleRotation { theta } => MpSystem::CircleRotation {
                theta: theta.real("system.theta")?,
            },
            SystemSpec::TorusTranslation { theta } => MpSystem::TorusTranslation {
                theta: theta.iter().map(|t| t.real("system.theta")).collect::<Result<_>>()?,
            },
            SystemSpec::SkewProduct { theta } => MpSystem::SkewProduct {
                theta: theta.real("system.theta")?,
            },
            SystemSpec::BernoulliShift { alphabet, prf_seed } => MpSystem::BernoulliShift {
                alphabet: *alphabet,
                prf_seed: *prf_seed,
            },
            SystemSpec::FiniteCycle { modulus } => MpSystem::FiniteCycle { modulus: *modulus },
            SystemSpec::Product { factors } => {
                MpSystem::Product(factors.iter().map(|f| f.build()).collect::<Result<_>>()?)
            }
        };
        sys.validate()?;
        Ok(sys)
    }
}

/// A table entry: a real number or a `[re, im]` pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableEntry {
    Real(f64),
    Complex([f64; 2]),
}

impl TableEntry {
    fn value(&self) -> Complex64 {
        match self {
            TableEntry::Real(r) => Complex64::new(*r, 0.0),
            TableEntry::Complex([a, b]) => Complex64::new(*a, *b),
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableSpec {
    Constant {
        #[serde(default = "one")]
        re: f64,
        #[serde(default)]
        im: f64,
    },
    Character {
        m: Vec<i64>,
    },
    Indicator {
        cells: Vec<(f64, f64)>,
    },
    BernoulliMeanZero,
    Table {
        values: Vec<TableEntry>,
    },
    Tensor {
        factors: Vec<ObservableSpec>,
    },
}

impl ObservableSpec {
    pub fn build(&self) -> Observable {
        match self {
            ObservableSpec::Constant { re, im } => Observable::Constant(Complex64::new(*re, *im)),
            ObservableSpec::Character { m } => Observable::Character(m.clone()),
            ObservableSpec::Indicator { cells } => Observable::CoordinateIndicator(cells.clone()),
            ObservableSpec::BernoulliMeanZero => Observable::BernoulliMeanZero,
            ObservableSpec::Table { values } => Observable::FiniteTable(values.iter().map(TableEntry::value).collect()),
            ObservableSpec::Tensor { factors } => Observable::Tensor(factors.iter().map(|f| f.build()).collect()),
        }
    }
}

fn default_root() -> u32 {
    8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    /// `λ = 2^{1/lambda_root}`.
    #[serde(default = "default_root")]
    pub lambda_root: u32,
    /// Drops lacunary checkpoints below this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_min: Option<u64>,
    /// Explicit checkpoints; overrides the lacunary schedule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<u64>>,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            n_max: None,
            lambda_root: 8,
            n_min: None,
            checkpoints: None,
        }
    }
}

impl Schedule {
    pub fn resolve(&self) -> Result<Vec<u64>> {
        let ck = match &self.checkpoints {
            Some(c) => c.clone(),
            None => {
                let n_max = self
                    .n_max
                    .ok_or_else(|| Error::validation("missing key schedule.n_max"))?;
                let mut s = crate::accum::lacunary_schedule(self.lambda_root, n_max)?;
                if let Some(lo) = self.n_min {
                    s.retain(|&n| n >= lo);
                }
                s
            }
        };
        crate::accum::check_counts(&ck)?;
        Ok(ck)
    }
}

fn default_points() -> usize {
    8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSpec {
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { points: 8, seed: 0 }
    }
}

/// Experiment parameters; which keys are required depends on the kind.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<RealExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<RealExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<RealExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<RealExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    /// Linear baseline coefficients `f(T^{⌊an⌋}x) g(T^{⌊bn+d⌋}x)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<RealExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<RealExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<RealExpr>,
    /// Coefficient vectors of the commuting-family average.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_vec: Option<Vec<RealExpr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_vec: Option<Vec<RealExpr>>,
    /// Coefficients of the single sup-average probe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<RealExpr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    /// `L`; defaults to `k (|γ| + 3) |β|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<RealExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<BaeVariant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ik_k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ik_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_out_of_range: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub exploratory: bool,
}

/// Output file names relative to the output directory. Each defaults to
/// the experiment name with the matching extension.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sidecar: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_report: Option<String>,
}

fn default_bits() -> u32 {
    PRECISION_BITS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<ObservableSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<ObservableSpec>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub schedule: Schedule,
    #[serde(default)]
    pub sample: SampleSpec,
    #[serde(default = "default_bits")]
    pub precision_bits: u32,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Required-key helper producing "missing key params.c" style messages.
pub fn require<'a, T>(v: &'a Option<T>, key: &str) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| Error::validation(format!("missing key {key}")))
}

impl ExperimentConfig {
    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("experiment")
    }

    pub fn check_precision(&self) -> Result<()> {
        if self.precision_bits != PRECISION_BITS {
            return Err(Error::validation(format!(
                "precision_bits = {} is not supported; only {PRECISION_BITS} is available",
                self.precision_bits
            )));
        }
        Ok(())
    }

    pub fn system(&self) -> Result<MpSystem> {
        require(&self.system, "system")?.build()
    }

    pub fn f(&self) -> Result<Observable> {
        Ok(require(&self.f, "f")?.build())
    }

    pub fn g(&self) -> Result<Observable> {
        Ok(require(&self.g, "g")?.build())
    }
}

/// Marker key identifying a JSON sidecar, which can be run directly.
pub const SIDECAR_MARKER: &str = "ergolab_sidecar";

fn set_path(root: &mut Value, path: &str, value: Value) -> Result<()> {
    let mut cur = root;
    let parts: Vec<&str> = path.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::validation(format!("bad --set key '{path}'")));
    }
    for (i, part) in parts.iter().enumerate() {
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| Error::validation(format!("--set {path}: '{part}' is not inside an object")))?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        cur = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Map::new()));
    }
    unreachable!()
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, o) => *b = o,
    }
}

/// Parses a config document, expanding a `"preset"` key (other keys are
/// merged over the preset), unwrapping sidecars and applying `key=value`
/// overrides. Override values are read as JSON when they parse, otherwise
/// as strings.
pub fn load_config(text: &str, sets: &[String]) -> Result<ExperimentConfig> {
    let mut v: Value = serde_json::from_str(text).map_err(|e| Error::validation(format!("config: {e}")))?;
    if v.get(SIDECAR_MARKER).is_some() {
        v = v
            .get("config")
            .cloned()
            .ok_or_else(|| Error::validation("sidecar has no config"))?;
    }
    if let Some(obj) = v.as_object_mut() {
        if let Some(p) = obj.remove("preset") {
            let name = p
                .as_str()
                .ok_or_else(|| Error::validation("preset must be a string"))?
                .to_string();
            let mut base =
                crate::presets::preset(&name).ok_or_else(|| Error::validation(format!("unknown preset '{name}'")))?;
            merge(&mut base, Value::Object(std::mem::take(obj)));
            v = base;
        }
    }
    for s in sets {
        let (k, raw) = s
            .split_once('=')
            .ok_or_else(|| Error::validation(format!("--set expects key=value, got '{s}'")))?;
        let val = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        set_path(&mut v, k.trim(), val)?;
    }
    let cfg: ExperimentConfig = serde_json::from_value(v).map_err(|e| Error::validation(format!("config: {e}")))?;
    cfg.check_precision()?;
    Ok(cfg)
}
