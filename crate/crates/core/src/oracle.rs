//! Exact integer oracles used only by tests.
//!
//! Everything here works on `BigUint`/`BigInt` and never touches the
//! double-double code path it is used to check.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `⌊(a_num/a_den) · n^(c_num/c_den)⌋` exactly, for `a_den, c_num, c_den > 0`.
pub fn floor_rational_power(a_num: i64, a_den: i64, n: u64, c_num: u32, c_den: u32) -> i128 {
    assert!(a_den > 0 && c_den > 0 && n >= 1);
    let a = BigUint::from(a_num.unsigned_abs());
    let b = BigUint::from(a_den as u64);
    // T = |a|^v n^u ; y = T^(1/v) / b
    let t = a.pow(c_den) * BigUint::from(n).pow(c_num);
    let r = t.nth_root(c_den);
    let m = &r / &b;
    let exact = r.pow(c_den) == t && (&r % &b).is_zero();
    let m = m.to_i128().expect("oracle floor overflow");
    if a_num >= 0 {
        m
    } else if exact {
        -m
    } else {
        -m - 1
    }
}

/// `n^(c_num/c_den)` to about 200 bits, returned as an (unnormalised)
/// pair of doubles whose sum carries at least 106 correct bits.
pub fn rational_power_dd(n: u64, c_num: u32, c_den: u32) -> (f64, f64) {
    const K: u32 = 200;
    let t = BigUint::from(n).pow(c_num) << (K as usize * c_den as usize);
    let v = t.nth_root(c_den);
    big_scaled_to_dd(&v, K)
}

/// `v / 2^k` as hi + lo.
pub fn big_scaled_to_dd(v: &BigUint, k: u32) -> (f64, f64) {
    let bits = v.bits() as i64;
    if bits <= 53 {
        let x = v.to_u64().unwrap() as f64;
        return (x * 2f64.powi(-(k as i32)), 0.0);
    }
    let shift = (bits - 53) as usize;
    let top = v >> shift;
    let hi = top.to_u64().unwrap() as f64 * 2f64.powi(shift as i32 - k as i32);
    let rem = v - (&top << shift);
    let lo = if rem.is_zero() {
        0.0
    } else {
        let rb = rem.bits() as i64;
        let s2 = (rb - 53).max(0) as usize;
        (rem >> s2).to_u64().unwrap() as f64 * 2f64.powi(s2 as i32 - k as i32)
    };
    (hi, lo)
}

/// Exact `⌊p/q⌋` for big integers.
pub fn big_floor_div(p: &BigInt, q: &BigInt) -> BigInt {
    let (d, r) = (p / q, p % q);
    if !r.is_zero() && ((r.sign() == Sign::Minus) != (q.sign() == Sign::Minus)) {
        d - BigInt::one()
    } else {
        d
    }
}

/// Partial quotients of the quadratic irrational `(p + sqrt(d)) / q`
/// (`d` not a square, `q > 0`) by the exact periodic algorithm.
pub fn cf_quadratic(p: i64, d: i64, q: i64, depth: usize) -> Vec<i64> {
    let (mut m, mut d, mut den) = (p, d, q);
    if (d - m * m) % den != 0 {
        m *= den;
        d *= den * den;
        den *= den;
    }
    let mut root = (d as f64).sqrt() as i64;
    while (root + 1) * (root + 1) <= d {
        root += 1;
    }
    while root * root > d {
        root -= 1;
    }
    let mut out = Vec::with_capacity(depth);
    while out.len() < depth {
        let a = (m + root).div_euclid(den);
        out.push(a);
        m = a * den - m;
        den = (d - m * m) / den;
    }
    out
}

/// Partial quotients of `num/den` by the Euclidean algorithm.
pub fn cf_rational(mut num: i64, mut den: i64) -> Vec<i64> {
    let mut out = Vec::new();
    while den != 0 {
        let a = num.div_euclid(den);
        out.push(a);
        let r = num - a * den;
        num = den;
        den = r;
    }
    out
}

/// `π·2^bits`, truncated, from Machin's formula with 32 guard bits.
pub fn pi_fixed(bits: usize) -> BigInt {
    let scale_bits = bits + 32;
    let one = BigInt::one() << scale_bits;
    let atan_inv = |x: i64| -> BigInt {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut term = &one / &x;
        let mut sum = term.clone();
        let mut k = 1i64;
        loop {
            term = &term / &x2;
            if term.is_zero() {
                break;
            }
            let t = &term / BigInt::from(2 * k + 1);
            if k % 2 == 1 {
                sum -= t;
            } else {
                sum += t;
            }
            k += 1;
        }
        sum
    };
    (BigInt::from(16) * atan_inv(5) - BigInt::from(4) * atan_inv(239)) >> 32usize
}

/// Partial quotients of π from a 400-bit rational approximation.
pub fn cf_pi(depth: usize) -> Vec<i64> {
    // Expand pi_num / 2^400, stopping well before truncation noise matters.
    let mut num = pi_fixed(400);
    let mut den = BigInt::one() << 400usize;
    let mut out = Vec::new();
    while out.len() < depth && !den.is_zero() {
        let a = big_floor_div(&num, &den);
        out.push(a.to_i64().unwrap());
        let r = &num - &a * &den;
        num = den;
        den = r;
    }
    out
}

/// Convergents `(p, q)` from partial quotients.
pub fn convergents_from(quotients: &[i64]) -> Vec<(i128, i128)> {
    let (mut p0, mut q0, mut p1, mut q1) = (1i128, 0i128, quotients[0] as i128, 1i128);
    let mut out = vec![(p1, q1)];
    for &a in &quotients[1..] {
        let (p2, q2) = (a as i128 * p1 + p0, a as i128 * q1 + q0);
        out.push((p2, q2));
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    out
}

/// `|x|` of an `i128` difference as f64, for error reports.
pub fn abs_f64(x: &BigInt) -> f64 {
    x.abs().to_f64().unwrap_or(f64::INFINITY)
}
