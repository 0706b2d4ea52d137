//! Parser for real-valued parameters written as small expressions.
//!
//! Grammar: `+ - * / ^`, parentheses, decimal literals (with exponent),
//! the constants `pi` and `e`, and the function `sqrt(..)`. Results keep an
//! exact rational alongside the double-double value whenever every step
//! stayed rational and fit in `i64`.

use crate::precision::{Coeff, HighReal, PrecisionError};

#[derive(Clone, Copy, Debug)]
struct Val {
    v: HighReal,
    r: Option<(i128, i128)>,
}

fn reduce(n: i128, d: i128) -> Option<(i128, i128)> {
    if d == 0 {
        return None;
    }
    let g = num_integer::gcd(n, d);
    let (n, d) = (n / g, d / g);
    if d < 0 {
        Some((-n, -d))
    } else {
        Some((n, d))
    }
}

fn rat_op(a: Option<(i128, i128)>, b: Option<(i128, i128)>, op: char) -> Option<(i128, i128)> {
    let ((an, ad), (bn, bd)) = (a?, b?);
    let (n, d) = match op {
        '+' => (
            an.checked_mul(bd)?.checked_add(bn.checked_mul(ad)?)?,
            ad.checked_mul(bd)?,
        ),
        '-' => (
            an.checked_mul(bd)?.checked_sub(bn.checked_mul(ad)?)?,
            ad.checked_mul(bd)?,
        ),
        '*' => (an.checked_mul(bn)?, ad.checked_mul(bd)?),
        '/' => (an.checked_mul(bd)?, ad.checked_mul(bn)?),
        _ => return None,
    };
    reduce(n, d)
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: impl Into<String>) -> PrecisionError {
        PrecisionError::Parse {
            expr: self.src.to_string(),
            reason: reason.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Val, PrecisionError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = c as char;
            acc = Val {
                v: if op == '+' { acc.v + rhs.v } else { acc.v - rhs.v },
                r: rat_op(acc.r, rhs.r, op),
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Val, PrecisionError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = c as char;
            if op == '/' && rhs.v.is_zero() {
                return Err(self.err("division by zero"));
            }
            acc = Val {
                v: if op == '*' { acc.v * rhs.v } else { acc.v / rhs.v },
                r: rat_op(acc.r, rhs.r, op),
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Val, PrecisionError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let v = self.unary()?;
                Ok(Val {
                    v: -v.v,
                    r: v.r.map(|(n, d)| (-n, d)),
                })
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Val, PrecisionError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.unary()?;
            if let Some((k, 1)) = exp.r {
                if k.unsigned_abs() <= 64 {
                    let mut v = HighReal::ONE;
                    let mut r = Some((1i128, 1i128));
                    for _ in 0..k.unsigned_abs() {
                        v = v * base.v;
                        r = rat_op(r, base.r, '*');
                    }
                    if k < 0 {
                        if v.is_zero() {
                            return Err(self.err("zero to a negative power"));
                        }
                        v = v.recip();
                        r = r.and_then(|(n, d)| reduce(d, n));
                    }
                    return Ok(Val { v, r });
                }
            }
            if base.v <= HighReal::ZERO {
                return Err(self.err("non-integer power of a non-positive base"));
            }
            return Ok(Val {
                v: base.v.powf(exp.v)?,
                r: None,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Val, PrecisionError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let ident = &self.src[start..self.pos];
                match ident {
                    "pi" => Ok(Val {
                        v: HighReal::PI,
                        r: None,
                    }),
                    "e" => Ok(Val {
                        v: HighReal::E,
                        r: None,
                    }),
                    "sqrt" => {
                        if self.peek() != Some(b'(') {
                            return Err(self.err("expected `(` after sqrt"));
                        }
                        let arg = self.atom()?;
                        let v = arg.v.sqrt()?;
                        // sqrt of a perfect-square rational stays rational
                        let r = arg.r.and_then(|(n, d)| {
                            let (sn, sd) = (isqrt(n)?, isqrt(d)?);
                            Some((sn, sd))
                        });
                        Ok(Val { v, r })
                    }
                    other => Err(self.err(format!("unknown identifier `{other}`"))),
                }
            }
            Some(c) => Err(self.err(format!("unexpected character `{}`", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Val, PrecisionError> {
        let mut mant: i128 = 0;
        let mut scale: i32 = 0;
        let mut digits = 0;
        let mut seen_dot = false;
        let mut exact = true;
        while self.pos < self.bytes.len() {
            let c = self.bytes[self.pos];
            if c.is_ascii_digit() {
                if digits < 36 {
                    mant = mant * 10 + (c - b'0') as i128;
                    digits += 1;
                    if seen_dot {
                        scale -= 1;
                    }
                } else {
                    exact = false;
                    if !seen_dot {
                        scale += 1;
                    }
                }
            } else if c == b'.' && !seen_dot {
                seen_dot = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if digits == 0 {
            return Err(self.err("malformed number"));
        }
        if self.pos < self.bytes.len() && (self.bytes[self.pos] == b'e' || self.bytes[self.pos] == b'E') {
            let save = self.pos;
            self.pos += 1;
            let mut sign = 1i32;
            if self.pos < self.bytes.len() && (self.bytes[self.pos] == b'+' || self.bytes[self.pos] == b'-') {
                if self.bytes[self.pos] == b'-' {
                    sign = -1;
                }
                self.pos += 1;
            }
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                // `e` belongs to something else, e.g. `2e` is not valid anyway
                self.pos = save;
            } else {
                let e: i32 = self.src[start..self.pos]
                    .parse()
                    .map_err(|_| self.err("bad exponent"))?;
                scale += sign * e;
            }
        }
        let m = HighReal::from_i128(mant);
        let v = if scale >= 0 {
            m * pow10_dd(scale)
        } else {
            m / pow10_dd(-scale)
        };
        let r = if !exact || scale.unsigned_abs() > 36 {
            None
        } else if scale >= 0 {
            10i128
                .checked_pow(scale as u32)
                .and_then(|p| mant.checked_mul(p))
                .map(|n| (n, 1))
        } else {
            10i128.checked_pow((-scale) as u32).and_then(|d| reduce(mant, d))
        };
        Ok(Val { v, r })
    }
}

fn isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

fn pow10_dd(k: i32) -> HighReal {
    let mut acc = HighReal::ONE;
    let mut base = HighReal::from_f64(10.0);
    let mut k = k as u32;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        k >>= 1;
    }
    acc
}

/// Parses an expression into a [`Coeff`], keeping the exact ratio when it
/// fits in `i64`.
pub fn parse_coeff(src: &str) -> Result<Coeff, PrecisionError> {
    let mut p = Parser {
        src,
        bytes: src.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err(format!("trailing input at byte {}", p.pos)));
    }
    if !v.v.is_finite() {
        return Err(PrecisionError::NonFinite(src.to_string()));
    }
    let ratio =
        v.r.and_then(|(n, d)| Some((i64::try_from(n).ok()?, i64::try_from(d).ok()?)));
    Ok(Coeff { value: v.v, ratio })
}

pub fn parse_real(src: &str) -> Result<HighReal, PrecisionError> {
    parse_coeff(src).map(|c| c.value)
}
