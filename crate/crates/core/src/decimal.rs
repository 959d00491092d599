//! Decimal rendering of exact rationals and log-space magnitudes.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Nearest,
    Floor,
    Ceil,
}

/// A number rounded to a fixed count of significant digits,
/// `±d.ddd × 10^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decimal {
    pub negative: bool,
    /// Significant digits; `"0"` for zero.
    pub digits: String,
    pub exponent: i64,
}

impl Decimal {
    pub fn zero() -> Self {
        Decimal {
            negative: false,
            digits: "0".into(),
            exponent: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.digits.bytes().all(|b| b == b'0')
    }

    /// Always `d.ddde±x` form.
    pub fn scientific(&self) -> String {
        let sign = if self.negative { "-" } else { "" };
        let (head, tail) = self.digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{}", self.exponent)
        } else {
            format!("{sign}{head}.{tail}e{}", self.exponent)
        }
    }

    /// Positional form, e.g. `0.068` or `2976`.
    pub fn positional(&self) -> String {
        let sign = if self.negative { "-" } else { "" };
        let d = &self.digits;
        let e = self.exponent;
        if e < 0 {
            format!("{sign}0.{}{d}", "0".repeat((-e - 1) as usize))
        } else if (e as usize) + 1 >= d.len() {
            format!("{sign}{d}{}", "0".repeat(e as usize + 1 - d.len()))
        } else {
            let (a, b) = d.split_at(e as usize + 1);
            format!("{sign}{a}.{b}")
        }
    }

    /// The exact rational value of the rendering.
    pub fn to_rational(&self) -> BigRational {
        let mantissa: BigInt = self.digits.parse().expect("digit string");
        let scale = self.exponent - (self.digits.len() as i64 - 1);
        let v = BigRational::from_integer(mantissa) * pow10(scale);
        if self.negative {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for Decimal {
    /// Positional for magnitudes in `[0.01, 10^6)`, scientific otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() || (-2..6).contains(&self.exponent) {
            f.write_str(&self.positional())
        } else {
            f.write_str(&self.scientific())
        }
    }
}

pub fn pow10(e: i64) -> BigRational {
    let p = BigInt::from(10u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `floor(log10(|q|))` for nonzero `q`.
fn decimal_exponent(q: &BigRational) -> i64 {
    let a = q.abs();
    let approx = (log10_abs(&a)).floor() as i64;
    // The float estimate can be off by one near powers of ten.
    let mut e = approx;
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    e
}

/// Rounds `q` to `sig` significant digits.
pub fn to_decimal(q: &BigRational, sig: usize, rounding: Rounding) -> Decimal {
    assert!(sig >= 1, "at least one significant digit");
    if q.is_zero() {
        return Decimal::zero();
    }
    let negative = q.is_negative();
    // Directed rounding of a negative value flips direction on the magnitude.
    let mode = match (negative, rounding) {
        (true, Rounding::Floor) => Rounding::Ceil,
        (true, Rounding::Ceil) => Rounding::Floor,
        (_, r) => r,
    };
    let a = q.abs();
    let mut e = decimal_exponent(&a);
    let scaled = &a * pow10(sig as i64 - 1 - e);
    let mut m = match mode {
        Rounding::Floor => scaled.floor(),
        Rounding::Ceil => scaled.ceil(),
        Rounding::Nearest => {
            let fl = scaled.floor();
            let frac = &scaled - &fl;
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            match frac.cmp(&half) {
                Ordering::Less => fl,
                Ordering::Greater => fl + BigRational::one(),
                Ordering::Equal if fl.to_integer().is_even() => fl,
                Ordering::Equal => fl + BigRational::one(),
            }
        }
    }
    .to_integer();
    let limit = BigInt::from(10u32).pow(sig as u32);
    if m >= limit {
        m /= 10;
        e += 1;
    }
    Decimal {
        negative,
        digits: m.to_string(),
        exponent: e,
    }
}

/// Parses `0.38`, `1.42e-11`, `-3`, `2.3E+4` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parameter(format!("not a decimal number: {s:?}"));
    let s = s.trim();
    let (body, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, body) = match body.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, body.strip_prefix('+').unwrap_or(body)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}0").parse().map_err(|_| bad())?;
    let v = BigRational::from_integer(digits) * pow10(exp - frac.len() as i64 - 1);
    Ok(if negative { -v } else { v })
}

fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of `|q|` without overflow; `-inf` for zero.
pub fn ln_abs(q: &BigRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    ln_biguint(num) - ln_biguint(den)
}

fn log10_abs(q: &BigRational) -> f64 {
    ln_abs(q) / std::f64::consts::LN_10
}

/// Renders `exp(ln_value)` to `sig` significant digits.
pub fn decimal_from_ln(ln_value: f64, sig: usize, rounding: Rounding) -> Decimal {
    if ln_value == f64::NEG_INFINITY {
        return Decimal::zero();
    }
    let l10 = ln_value / std::f64::consts::LN_10;
    let e = l10.floor();
    let scaled = 10f64.powf(l10 - e + sig as f64 - 1.0);
    let mut m = match rounding {
        Rounding::Nearest => scaled.round(),
        Rounding::Floor => scaled.floor(),
        Rounding::Ceil => scaled.ceil(),
    } as u64;
    let mut e = e as i64;
    if m >= 10u64.pow(sig as u32) {
        m /= 10;
        e += 1;
    }
    Decimal {
        negative: false,
        digits: m.to_string(),
        exponent: e,
    }
}
