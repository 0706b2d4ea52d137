//! C ABI over `ergolab`.
//!
//! Functions return an [`ErgolabStatus`] code (0 on success, negative on
//! failure) and write results through out-pointers. After a failure the
//! message is available from [`ergolab_last_error`] on the same thread.
//! Strings returned by the library are owned by the caller and must be
//! released with [`ergolab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ergolab::config::{load_config, ExperimentConfig};
use ergolab::diophantine::best_approx;
use ergolab::experiment::{run_experiment, RunOutput};
use ergolab::expr::parse_coeff;
use ergolab::precision::floor_pow_coeff;
use ergolab::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErgolabStatus {
    Ok = 0,
    NullPointer = -1,
    Validation = -2,
    Numeric = -3,
    InvalidUtf8 = -4,
    OutOfRange = -5,
    Panic = -6,
}

/// Opaque parsed experiment configuration.
pub struct ErgolabConfig {
    text: String,
    sets: Vec<String>,
    config: ExperimentConfig,
}

/// Opaque experiment result.
pub struct ErgolabResult {
    output: RunOutput,
    threads: usize,
}

/// One checkpoint row of a result.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErgolabRow {
    pub n: u64,
    pub value_re: f64,
    pub value_im: f64,
    pub dispersion: f64,
    pub flags: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ErgolabStatus {
    set_error(&e.to_string());
    if e.is_validation() {
        ErgolabStatus::Validation
    } else {
        ErgolabStatus::Numeric
    }
}

fn guard(f: impl FnOnce() -> Result<(), ErgolabStatus>) -> ErgolabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ErgolabStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            ErgolabStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, ErgolabStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(ErgolabStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        ErgolabStatus::InvalidUtf8
    })
}

fn null_check<T>(p: *const T, what: &str) -> Result<(), ErgolabStatus> {
    if p.is_null() {
        set_error(&format!("null {what}"));
        return Err(ErgolabStatus::NullPointer);
    }
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ergolab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ergolab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parses a JSON config (a full config, a `{"preset": ...}` document or a
/// sidecar).
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ergolab_config_from_json(json: *const c_char, out: *mut *mut ErgolabConfig) -> ErgolabStatus {
    guard(|| {
        null_check(out, "output pointer")?;
        let text = str_arg(json)?.to_string();
        let config = load_config(&text, &[]).map_err(|e| status_of(&e))?;
        *out = Box::into_raw(Box::new(ErgolabConfig {
            text,
            sets: Vec::new(),
            config,
        }));
        Ok(())
    })
}

/// Applies a `key=value` override, as `--set` does on the command line.
/// The config is left unchanged if the result does not validate.
///
/// # Safety
/// `cfg` must come from [`ergolab_config_from_json`]; `key_value` must be a
/// valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ergolab_config_set(cfg: *mut ErgolabConfig, key_value: *const c_char) -> ErgolabStatus {
    guard(|| {
        null_check(cfg, "config")?;
        let kv = str_arg(key_value)?.to_string();
        let cfg = &mut *cfg;
        let mut sets = cfg.sets.clone();
        sets.push(kv);
        cfg.config = load_config(&cfg.text, &sets).map_err(|e| status_of(&e))?;
        cfg.sets = sets;
        Ok(())
    })
}

/// # Safety
/// `cfg` must come from [`ergolab_config_from_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn ergolab_config_free(cfg: *mut ErgolabConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Runs the experiment on `threads` workers (0 picks the default).
///
/// # Safety
/// `cfg` must be a live config handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ergolab_run(
    cfg: *const ErgolabConfig,
    threads: u32,
    out: *mut *mut ErgolabResult,
) -> ErgolabStatus {
    guard(|| {
        null_check(cfg, "config")?;
        null_check(out, "output pointer")?;
        let mut b = rayon::ThreadPoolBuilder::new();
        if threads > 0 {
            b = b.num_threads(threads as usize);
        }
        let pool = b.build().map_err(|e| {
            set_error(&e.to_string());
            ErgolabStatus::Validation
        })?;
        let config = &(*cfg).config;
        let output = pool.install(|| run_experiment(config)).map_err(|e| status_of(&e))?;
        *out = Box::into_raw(Box::new(ErgolabResult {
            output,
            threads: pool.current_num_threads(),
        }));
        Ok(())
    })
}

/// # Safety
/// `res` must come from [`ergolab_run`] or be null.
#[no_mangle]
pub unsafe extern "C" fn ergolab_result_free(res: *mut ErgolabResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Number of checkpoint rows, 0 for a null handle.
///
/// # Safety
/// `res` must be a live result handle or null.
#[no_mangle]
pub unsafe extern "C" fn ergolab_result_rows(res: *const ErgolabResult) -> usize {
    res.as_ref().map_or(0, |r| r.output.rows.len())
}

/// # Safety
/// `res` must be a live result handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ergolab_result_row(
    res: *const ErgolabResult,
    index: usize,
    out: *mut ErgolabRow,
) -> ErgolabStatus {
    guard(|| {
        null_check(res, "result")?;
        null_check(out, "output pointer")?;
        let res = &*res;
        let r = res.output.rows.get(index).ok_or_else(|| {
            set_error(&format!("row {index} out of range"));
            ErgolabStatus::OutOfRange
        })?;
        *out = ErgolabRow {
            n: r.n,
            value_re: r.value_re,
            value_im: r.value_im,
            dispersion: r.dispersion,
            flags: r.flags,
        };
        Ok(())
    })
}

/// The results CSV (with `ms` = 0). Free with [`ergolab_string_free`].
///
/// # Safety
/// `res` must be a live result handle or null.
#[no_mangle]
pub unsafe extern "C" fn ergolab_result_csv(res: *const ErgolabResult) -> *mut c_char {
    match res.as_ref() {
        Some(r) => to_c_string(r.output.csv(false)),
        None => {
            set_error("null result");
            ptr::null_mut()
        }
    }
}

/// The JSON sidecar. Free with [`ergolab_string_free`].
///
/// # Safety
/// `res` must be a live result handle or null.
#[no_mangle]
pub unsafe extern "C" fn ergolab_result_sidecar(res: *const ErgolabResult) -> *mut c_char {
    match res.as_ref() {
        Some(r) => to_c_string(r.output.sidecar(r.threads).to_string()),
        None => {
            set_error("null result");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ergolab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `⌊α n^c⌋` with `α` and `c` given as expressions (e.g. `"sqrt(2)"`).
/// `boundary` is set to 1 when the fractional part lies within the guard
/// band of an integer.
///
/// # Safety
/// String arguments must be valid NUL-terminated strings; out-pointers must
/// be valid.
#[no_mangle]
pub unsafe extern "C" fn ergolab_floor_pow(
    alpha: *const c_char,
    c: *const c_char,
    n: u64,
    floor_out: *mut i64,
    boundary_out: *mut i32,
) -> ErgolabStatus {
    guard(|| {
        null_check(floor_out, "output pointer")?;
        null_check(boundary_out, "output pointer")?;
        let a = parse_coeff(str_arg(alpha)?).map_err(|e| status_of(&e.into()))?;
        let c = parse_coeff(str_arg(c)?).map_err(|e| status_of(&e.into()))?;
        if !(c.value.hi() > 0.0 && c.value.hi() < 2.0) || a.value.is_zero() {
            set_error("need c in (0, 2) and alpha != 0");
            return Err(ErgolabStatus::Validation);
        }
        let r = floor_pow_coeff(&a, c.value, n).map_err(|e| status_of(&e.into()))?;
        *floor_out = r.floor_value;
        *boundary_out = r.boundary_flag as i32;
        Ok(())
    })
}

/// First continued-fraction convergent `p/q` of `γ` with `|γ − p/q| < 1/n`.
///
/// # Safety
/// `gamma` must be a valid NUL-terminated string; out-pointers must be
/// valid.
#[no_mangle]
pub unsafe extern "C" fn ergolab_best_approx(
    gamma: *const c_char,
    n: u64,
    p_out: *mut i64,
    q_out: *mut u64,
) -> ErgolabStatus {
    guard(|| {
        null_check(p_out, "output pointer")?;
        null_check(q_out, "output pointer")?;
        let g = parse_coeff(str_arg(gamma)?).map_err(|e| status_of(&e.into()))?;
        let conv = best_approx(g.value, n).map_err(|e| status_of(&e.into()))?;
        *p_out = conv.p;
        *q_out = conv.q;
        Ok(())
    })
}
