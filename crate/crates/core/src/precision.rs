//! Double-double real arithmetic.
//!
//! A [`HighReal`] is an unevaluated sum `hi + lo` of two `f64` values with
//! `|lo| <= ulp(hi) / 2`, giving roughly 106 significant bits. All operations
//! are branch-deterministic: the same inputs give the same bits on every run
//! and every thread.
//!
//! The orbit indices `⌊α n^c⌋` for `n` up to ~10^8 need about 27 integer bits
//! and a comfortable margin of fractional bits, which is what this type buys
//! over plain `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use thiserror::Error;

/// Significant bits carried by [`HighReal`].
pub const PRECISION_BITS: u32 = 106;

/// Guard width `2^-40` used for [`FloorResult::boundary_flag`].
pub const GUARD: f64 = 9.094_947_017_729_282e-13;

/// Relative error budget attached to `α·n^c` on the transcendental path.
const POW_REL_ERR: f64 = 7.888_609_052_210_118e-31; // 2^-100

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PrecisionError {
    #[error("non-finite input: {0}")]
    NonFinite(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot parse real expression `{expr}`: {reason}")]
    Parse { expr: String, reason: String },
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Extended-precision real scalar (double-double).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HighReal {
    hi: f64,
    lo: f64,
}

impl HighReal {
    pub const ZERO: HighReal = HighReal { hi: 0.0, lo: 0.0 };
    pub const ONE: HighReal = HighReal { hi: 1.0, lo: 0.0 };
    pub const HALF: HighReal = HighReal { hi: 0.5, lo: 0.0 };
    pub const PI: HighReal = HighReal {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };
    pub const TWO_PI: HighReal = HighReal {
        hi: std::f64::consts::TAU,
        lo: 2.449_293_598_294_706_4e-16,
    };
    pub const LN2: HighReal = HighReal {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };
    pub const E: HighReal = HighReal {
        hi: std::f64::consts::E,
        lo: 1.445_646_891_729_250_2e-16,
    };

    /// Builds a value from two components, renormalising them.
    pub fn from_parts(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        HighReal { hi, lo }
    }

    pub fn from_f64(x: f64) -> Self {
        HighReal { hi: x, lo: 0.0 }
    }

    /// Exact conversion for `|x| < 2^106`.
    pub fn from_i128(x: i128) -> Self {
        let hi = x as f64;
        // `hi as i128` saturates only beyond the supported range.
        let rem = x.wrapping_sub(hi as i128);
        HighReal::from_parts(hi, rem as f64)
    }

    pub fn from_i64(x: i64) -> Self {
        Self::from_i128(x as i128)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn precision_bits(self) -> u32 {
        PRECISION_BITS
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    pub fn abs(self) -> Self {
        if self.is_sign_negative() {
            -self
        } else {
            self
        }
    }

    /// Multiplication by `2^k`, exact barring under/overflow.
    pub fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        HighReal {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        HighReal { hi, lo }
    }

    pub fn square(self) -> Self {
        self * self
    }

    pub fn recip(self) -> Self {
        HighReal::ONE / self
    }

    /// Largest integer not exceeding `self`, as a `HighReal`.
    pub fn floor(self) -> Self {
        let fh = self.hi.floor();
        if fh == self.hi {
            let fl = self.lo.floor();
            let (hi, lo) = quick_two_sum(fh, fl);
            HighReal { hi, lo }
        } else {
            HighReal { hi: fh, lo: 0.0 }
        }
    }

    pub fn round(self) -> Self {
        (self + HighReal::HALF).floor()
    }

    /// Converts an integer-valued `HighReal` to `i128`.
    pub fn to_i128(self) -> i128 {
        self.hi as i128 + self.lo as i128
    }

    /// `⌊self⌋` as an integer.
    pub fn floor_i128(self) -> i128 {
        self.floor().to_i128()
    }

    pub fn sqrt(self) -> Result<Self, PrecisionError> {
        if !self.is_finite() {
            return Err(PrecisionError::NonFinite(format!("sqrt({})", self.hi)));
        }
        if self.is_sign_negative() && !self.is_zero() {
            return Err(PrecisionError::Domain(format!("sqrt of negative {}", self.hi)));
        }
        if self.is_zero() {
            return Ok(HighReal::ZERO);
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let ax_dd = HighReal::from_f64(ax);
        let diff = self - ax_dd.square();
        Ok(ax_dd + HighReal::from_f64(diff.hi * x * 0.5))
    }

    /// Natural exponential.
    pub fn exp(self) -> Result<Self, PrecisionError> {
        if !self.is_finite() {
            return Err(PrecisionError::NonFinite(format!("exp({})", self.hi)));
        }
        if self.hi > 709.0 {
            return Err(PrecisionError::Domain(format!("exp overflow at {}", self.hi)));
        }
        if self.hi < -745.0 {
            return Ok(HighReal::ZERO);
        }
        if self.is_zero() {
            return Ok(HighReal::ONE);
        }
        const SQUARINGS: i32 = 10;
        let k = (self.hi / Self::LN2.hi).round();
        let r = (self - Self::LN2.mul_f64(k)).ldexp(-SQUARINGS);

        // expm1(r) by Taylor series; |r| < 3.4e-4 so ~10 terms reach 2^-110.
        let mut term = r;
        let mut sum = r;
        for i in 2..=24 {
            term = (term * r) / HighReal::from_f64(i as f64);
            sum += term;
            if term.hi.abs() < 1e-36 * sum.hi.abs().max(1e-300) {
                break;
            }
        }
        // expm1(2r) = 2 expm1(r) + expm1(r)^2
        for _ in 0..SQUARINGS {
            sum = sum.ldexp(1) + sum.square();
        }
        Ok((sum + HighReal::ONE).ldexp(k as i32))
    }

    /// Natural logarithm by one Newton step on `exp` from the `f64` estimate.
    pub fn ln(self) -> Result<Self, PrecisionError> {
        if !self.is_finite() {
            return Err(PrecisionError::NonFinite(format!("ln({})", self.hi)));
        }
        if self.hi <= 0.0 {
            return Err(PrecisionError::Domain(format!("ln of non-positive {}", self.hi)));
        }
        if self == HighReal::ONE {
            return Ok(HighReal::ZERO);
        }
        let x0 = HighReal::from_f64(self.hi.ln());
        let x1 = x0 + self * (-x0).exp()? - HighReal::ONE;
        Ok(x1)
    }

    /// `self^c` for `self > 0`.
    pub fn powf(self, c: HighReal) -> Result<Self, PrecisionError> {
        if self == HighReal::ONE || c.is_zero() {
            return Ok(HighReal::ONE);
        }
        if c == HighReal::ONE {
            return Ok(self);
        }
        (c * self.ln()?).exp()
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal_string(self, digits: usize) -> String {
        if !self.is_finite() {
            return format!("{}", self.hi);
        }
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_sign_negative();
        let mut x = self.abs();
        let mut e = x.hi.log10().floor() as i32;
        x = x / pow10(e);
        if x.hi >= 10.0 {
            x = x.mul_f64(0.1);
            e += 1;
        } else if x.hi < 1.0 {
            x = x.mul_f64(10.0);
            e -= 1;
        }
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        let mut ds = Vec::with_capacity(digits);
        for _ in 0..digits {
            let d = x.hi.floor().clamp(0.0, 9.0);
            ds.push(d as u8);
            x = (x - HighReal::from_f64(d)).mul_f64(10.0);
        }
        out.push((b'0' + ds[0]) as char);
        out.push('.');
        for d in &ds[1..] {
            out.push((b'0' + d) as char);
        }
        out.push_str(&format!("e{}", e));
        out
    }
}

fn pow10(e: i32) -> HighReal {
    let mut base = HighReal::from_f64(10.0);
    let mut acc = HighReal::ONE;
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base;
        }
        base = base.square();
        k >>= 1;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

impl From<f64> for HighReal {
    fn from(x: f64) -> Self {
        HighReal::from_f64(x)
    }
}

impl From<i64> for HighReal {
    fn from(x: i64) -> Self {
        HighReal::from_i64(x)
    }
}

impl Neg for HighReal {
    type Output = HighReal;
    fn neg(self) -> HighReal {
        HighReal {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for HighReal {
    type Output = HighReal;
    fn add(self, b: HighReal) -> HighReal {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        HighReal { hi, lo }
    }
}

impl Sub for HighReal {
    type Output = HighReal;
    fn sub(self, b: HighReal) -> HighReal {
        self + (-b)
    }
}

impl Mul for HighReal {
    type Output = HighReal;
    fn mul(self, b: HighReal) -> HighReal {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        HighReal { hi, lo }
    }
}

impl Div for HighReal {
    type Output = HighReal;
    fn div(self, b: HighReal) -> HighReal {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        HighReal { hi: q1, lo: q2 } + HighReal::from_f64(q3)
    }
}

impl AddAssign for HighReal {
    fn add_assign(&mut self, b: HighReal) {
        *self = *self + b;
    }
}

impl SubAssign for HighReal {
    fn sub_assign(&mut self, b: HighReal) {
        *self = *self - b;
    }
}

impl PartialOrd for HighReal {
    fn partial_cmp(&self, other: &HighReal) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl fmt::Display for HighReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(32))
    }
}

/// Result of `⌊α n^c⌋` with its fractional part and boundary diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloorResult {
    pub floor_value: i64,
    pub frac_value: HighReal,
    /// Set iff `frac_value` lies within [`GUARD`] of 0 or 1.
    pub boundary_flag: bool,
}

fn check_finite(x: HighReal, what: &str) -> Result<(), PrecisionError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(PrecisionError::NonFinite(format!("{what} = {}", x.hi)))
    }
}

/// `x - ⌊x⌋`, always in `[0, 1)`.
pub fn frac(x: HighReal) -> Result<HighReal, PrecisionError> {
    check_finite(x, "frac argument")?;
    let f = x - x.floor();
    if f >= HighReal::ONE {
        return Ok(HighReal::ZERO);
    }
    Ok(f)
}

/// The centred sawtooth `{x} - 1/2`.
pub fn phi(x: HighReal) -> Result<HighReal, PrecisionError> {
    Ok(frac(x)? - HighReal::HALF)
}

/// `n^c` for a positive integer `n`, with a flag telling whether the
/// result is exact.
pub fn pow_int(n: u64, c: HighReal) -> Result<(HighReal, bool), PrecisionError> {
    if n == 0 {
        return Err(PrecisionError::Domain("pow_int needs n >= 1".into()));
    }
    if n == 1 {
        return Ok((HighReal::ONE, true));
    }
    if c == HighReal::ONE {
        return Ok((HighReal::from_i128(n as i128), true));
    }
    Ok((HighReal::from_i128(n as i128).powf(c)?, false))
}

/// Splits an already computed `value` (carrying absolute error `err`) into
/// floor, fractional part and boundary flag. When the error interval
/// straddles an integer the downward choice is returned.
pub fn split_floor(value: HighReal, err: f64) -> Result<FloorResult, PrecisionError> {
    check_finite(value, "floor argument")?;
    let fl = value.floor();
    let mut floor_value = fl.to_i128();
    let mut frac_value = value - fl;
    if frac_value >= HighReal::ONE {
        floor_value += 1;
        frac_value = HighReal::ZERO;
    }
    if err > 0.0 && frac_value.hi < err {
        floor_value -= 1;
        frac_value += HighReal::ONE;
        if frac_value >= HighReal::ONE {
            frac_value = HighReal::from_parts(1.0, -f64::EPSILON * f64::EPSILON);
        }
    }
    if floor_value.unsigned_abs() > (1u128 << 62) {
        return Err(PrecisionError::Domain(format!(
            "floor {} exceeds the 2^62 index range",
            floor_value
        )));
    }
    let f = frac_value.hi;
    Ok(FloorResult {
        floor_value: floor_value as i64,
        frac_value,
        boundary_flag: !(GUARD..=1.0 - GUARD).contains(&f),
    })
}

/// `⌊α n^c⌋` together with `{α n^c}` and the boundary flag.
pub fn floor_pow(alpha: HighReal, c: HighReal, n: u64) -> Result<FloorResult, PrecisionError> {
    check_finite(alpha, "alpha")?;
    check_finite(c, "c")?;
    if n == 0 {
        return Err(PrecisionError::Domain("floor_pow needs n >= 1".into()));
    }
    if !(c > HighReal::ZERO && c < HighReal::from_f64(2.0)) {
        return Err(PrecisionError::Domain(format!("exponent c = {} outside (0, 2)", c.hi)));
    }
    if alpha.is_zero() {
        return Err(PrecisionError::Domain("alpha must be non-zero".into()));
    }
    let (power, exact) = pow_int(n, c)?;
    scaled_floor(alpha, power, exact)
}

/// `⌊α·p⌋` where `p = n^c` was produced by [`pow_int`]; lets callers share
/// one power between several coefficients.
pub fn scaled_floor(alpha: HighReal, power: HighReal, exact: bool) -> Result<FloorResult, PrecisionError> {
    let value = alpha * power;
    let err = if exact {
        // `two_prod` makes hi*p exact; only the lo*p term can round.
        if alpha.lo == 0.0 && power.lo == 0.0 && power.hi.abs() < 9.007_199_254_740_992e15 {
            0.0
        } else {
            value.hi.abs() * 2.465_190_328_815_662e-32 // 2^-105
        }
    } else {
        value.hi.abs() * POW_REL_ERR
    };
    split_floor(value, err)
}

/// A real coefficient that remembers an exact rational value when it has one.
///
/// Linear floors `⌊(p/q)·n⌋` are then computed with integer arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coeff {
    pub value: HighReal,
    pub ratio: Option<(i64, i64)>,
}

impl Coeff {
    pub fn real(value: HighReal) -> Self {
        Coeff { value, ratio: None }
    }

    /// `num/den` with `den > 0` after normalisation.
    pub fn ratio(num: i64, den: i64) -> Result<Self, PrecisionError> {
        if den == 0 {
            return Err(PrecisionError::Domain("zero denominator".into()));
        }
        let g = num_integer::gcd(num, den);
        let (num, den) = if den < 0 {
            (-num / g, -den / g)
        } else {
            (num / g, den / g)
        };
        Ok(Coeff {
            value: HighReal::from_ratio(num, den),
            ratio: Some((num, den)),
        })
    }

    pub fn integer(k: i64) -> Self {
        Coeff {
            value: HighReal::from_i64(k),
            ratio: Some((k, 1)),
        }
    }

    /// The integer value, when the coefficient is one.
    pub fn as_integer(&self) -> Option<i64> {
        match self.ratio {
            Some((p, 1)) => Some(p),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl From<HighReal> for Coeff {
    fn from(v: HighReal) -> Self {
        Coeff::real(v)
    }
}

/// `⌊(num/den)·m⌋` by integer arithmetic, `den > 0`.
pub fn floor_ratio_times(num: i64, den: i64, m: i128) -> Result<FloorResult, PrecisionError> {
    let prod = num as i128 * m;
    let fl = num_integer::Integer::div_floor(&prod, &(den as i128));
    let rem = prod - fl * den as i128;
    if fl.unsigned_abs() > (1u128 << 62) {
        return Err(PrecisionError::Domain(format!(
            "floor {fl} exceeds the 2^62 index range"
        )));
    }
    let frac_value = HighReal::from_i128(rem) / HighReal::from_i64(den);
    let f = frac_value.hi;
    Ok(FloorResult {
        floor_value: fl as i64,
        frac_value,
        boundary_flag: !(GUARD..=1.0 - GUARD).contains(&f),
    })
}

/// [`floor_pow`] for a [`Coeff`]: exact integer arithmetic when `c = 1`
/// and the coefficient is rational.
pub fn floor_pow_coeff(alpha: &Coeff, c: HighReal, n: u64) -> Result<FloorResult, PrecisionError> {
    match alpha.ratio {
        Some((num, den)) if c == HighReal::ONE => {
            if num == 0 {
                return Err(PrecisionError::Domain("alpha must be non-zero".into()));
            }
            floor_ratio_times(num, den, n as i128)
        }
        _ => floor_pow(alpha.value, c, n),
    }
}
