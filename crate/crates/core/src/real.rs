//! Scalars that stay exact as long as every input is exact.
//!
//! `Real::Q` holds a big rational, `Real::F` a double. Mixed arithmetic
//! degrades to floats; comparisons involving a float use [`TOL`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Absolute/relative tolerance for float comparisons.
pub const TOL: f64 = 1e-9;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug)]
pub enum Real {
    Q(Rational),
    F(f64),
}

impl Real {
    pub fn int(n: i64) -> Self {
        Real::Q(qi(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Real::Q(q(n, d))
    }

    pub fn zero() -> Self {
        Real::int(0)
    }

    pub fn one() -> Self {
        Real::int(1)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Q(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Real::Q(r) => Some(r),
            Real::F(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Q(r) => rat_to_f64(r),
            Real::F(x) => *x,
        }
    }

    /// Drop exactness.
    pub fn to_float(&self) -> Real {
        Real::F(self.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Q(r) => r.is_zero(),
            Real::F(x) => x.abs() <= TOL,
        }
    }

    pub fn abs(&self) -> Real {
        match self {
            Real::Q(r) => Real::Q(r.abs()),
            Real::F(x) => Real::F(x.abs()),
        }
    }

    /// -1, 0 or 1; floats within `TOL` of zero count as zero.
    pub fn sign(&self) -> i32 {
        match self {
            Real::Q(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Real::F(x) => {
                if x.abs() <= TOL {
                    0
                } else if *x > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn floor(&self) -> Real {
        match self {
            Real::Q(r) => Real::Q(r.floor()),
            Real::F(x) => {
                // snap values sitting just below an integer
                let r = x.round();
                if (x - r).abs() <= TOL {
                    Real::F(r)
                } else {
                    Real::F(x.floor())
                }
            }
        }
    }

    /// Representative of `self` modulo `m` in `[0, m)`.
    pub fn rem_euclid(&self, m: &Real) -> Real {
        let k = (self.clone() / m.clone()).floor();
        let r = self.clone() - k * m.clone();
        match r {
            Real::F(x) if (x - m.to_f64()).abs() <= TOL || x.abs() <= TOL => Real::F(0.0),
            other => other,
        }
    }

    /// Nearest integer if `self` is an integer (exactly, or within `TOL`).
    pub fn to_integer(&self) -> Option<i64> {
        match self {
            Real::Q(r) => {
                if r.is_integer() {
                    r.to_integer().to_i64()
                } else {
                    None
                }
            }
            Real::F(x) => {
                let r = x.round();
                if (x - r).abs() <= TOL {
                    Some(r as i64)
                } else {
                    None
                }
            }
        }
    }

    pub fn is_integer(&self) -> bool {
        self.to_integer().is_some()
    }

    pub fn cmp_tol(&self, other: &Real) -> Ordering {
        match (self, other) {
            (Real::Q(a), Real::Q(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                if close(a, b) {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn min(self, other: Real) -> Real {
        if other.cmp_tol(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Real) -> Real {
        if other.cmp_tol(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn pow(&self, e: u32) -> Real {
        let mut acc = Real::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// `acos(x) / (2π)`, in `[0, 1/2]`. Exact at the five rational values
    /// where the answer is rational.
    pub fn acos_turns(&self) -> Real {
        if let Real::Q(r) = self {
            let table = [
                (qi(1), q(0, 1)),
                (q(1, 2), q(1, 6)),
                (qi(0), q(1, 4)),
                (q(-1, 2), q(1, 3)),
                (qi(-1), q(1, 2)),
            ];
            for (x, t) in table {
                if *r == x {
                    return Real::Q(t);
                }
            }
        }
        let x = self.to_f64().clamp(-1.0, 1.0);
        Real::F(x.acos() / (2.0 * std::f64::consts::PI))
    }

    /// `asin(x) / π`, in `[-1/2, 1/2]`; exact at rational special values.
    pub fn asin_halfturns(&self) -> Real {
        if let Real::Q(r) = self {
            let table = [
                (qi(1), q(1, 2)),
                (q(1, 2), q(1, 6)),
                (qi(0), q(0, 1)),
                (q(-1, 2), q(-1, 6)),
                (qi(-1), q(-1, 2)),
            ];
            for (x, t) in table {
                if *r == x {
                    return Real::Q(t);
                }
            }
        }
        let x = self.to_f64().clamp(-1.0, 1.0);
        Real::F(x.asin() / std::f64::consts::PI)
    }
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * 1f64.max(a.abs()).max(b.abs())
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // huge numerator or denominator: keep the top 60 bits of each
            let top = |x: &BigInt| {
                let sh = (x.bits() as i64 - 60).max(0);
                ((x >> sh as usize).to_f64().unwrap_or(f64::NAN), sh)
            };
            let (n, sn) = top(r.numer());
            let (d, sd) = top(r.denom());
            n / d * 2f64.powi((sn - sd) as i32)
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.cmp_tol(other) == Ordering::Equal
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        Some(self.cmp_tol(other))
    }
}

impl From<i64> for Real {
    fn from(v: i64) -> Self {
        Real::int(v)
    }
}

impl From<Rational> for Real {
    fn from(r: Rational) -> Self {
        Real::Q(r)
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real::F(x)
    }
}

macro_rules! real_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                match (self, rhs) {
                    (Real::Q(a), Real::Q(b)) => Real::Q(a $op b),
                    (a, b) => Real::F(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl<'a> $tr<&'a Real> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: &'a Real) -> Real {
                match (self, rhs) {
                    (Real::Q(a), Real::Q(b)) => Real::Q(a $op b),
                    (a, b) => Real::F(a.to_f64() $op b.to_f64()),
                }
            }
        }
    };
}

real_binop!(Add, add, +);
real_binop!(Sub, sub, -);
real_binop!(Mul, mul, *);

impl Div for Real {
    type Output = Real;
    fn div(self, rhs: Real) -> Real {
        match (self, rhs) {
            (Real::Q(a), Real::Q(b)) => {
                assert!(!b.is_zero(), "exact division by zero");
                Real::Q(a / b)
            }
            (a, b) => Real::F(a.to_f64() / b.to_f64()),
        }
    }
}

impl<'a> Div<&'a Real> for &'a Real {
    type Output = Real;
    fn div(self, rhs: &'a Real) -> Real {
        self.clone() / rhs.clone()
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        match self {
            Real::Q(a) => Real::Q(-a),
            Real::F(x) => Real::F(-x),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Q(r) => write!(f, "{}", r),
            Real::F(x) => match f.precision() {
                Some(p) => write!(f, "{:.*}", p, x),
                None => write!(f, "{}", x),
            },
        }
    }
}

/// Parses `p/q`, integers and finite decimals (`0.25`, `-1.5e-3`) exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
    let mut num = BigInt::from_str(&digits).map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

impl FromStr for Real {
    type Err = Error;
    fn from_str(s: &str) -> Result<Real> {
        parse_rational(s).map(Real::Q)
    }
}

/// Exact values serialize as `"p/q"` strings, floats as JSON numbers.
impl serde::Serialize for Real {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Real::Q(r) => s.serialize_str(&r.to_string()),
            Real::F(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> serde::Deserialize<'de> for Real {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Real, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(t) => t.parse().map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) => {
                // integers and short decimals stay exact
                parse_rational(&n.to_string())
                    .map(Real::Q)
                    .or_else(|_| n.as_f64().map(Real::F).ok_or(()))
                    .map_err(|_| serde::de::Error::custom("bad number"))
            }
            other => Err(serde::de::Error::custom(format!("expected number or string, got {other}"))),
        }
    }
}

/// Comma separated list of rationals.
pub fn parse_real_list(s: &str) -> Result<Vec<Real>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.parse::<Real>())
        .collect()
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn rat_is_one(r: &Rational) -> bool {
    r.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Real::frac(1, 3) + Real::frac(1, 6);
        assert!(a.is_exact());
        assert_eq!(a, Real::frac(1, 2));
        let b = a * Real::F(2.0);
        assert!(!b.is_exact());
        assert_eq!(b, Real::one());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-1.5e-1").unwrap(), q(-3, 20));
        assert_eq!(parse_rational("7").unwrap(), qi(7));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn rem_euclid_wraps() {
        assert_eq!(Real::frac(5, 2).rem_euclid(&Real::int(2)), Real::frac(1, 2));
        assert_eq!(Real::frac(-1, 3).rem_euclid(&Real::one()), Real::frac(2, 3));
        assert_eq!(Real::F(0.999_999_999_999).rem_euclid(&Real::one()), Real::zero());
    }

    #[test]
    fn special_angles() {
        assert_eq!(Real::frac(-1, 2).acos_turns(), Real::frac(1, 3));
        assert_eq!(Real::frac(1, 2).asin_halfturns(), Real::frac(1, 6));
        let x = Real::frac(1, 3).acos_turns();
        assert!(!x.is_exact());
        assert!(((2.0 * std::f64::consts::PI * x.to_f64()).cos() - 1.0 / 3.0).abs() < 1e-12);
    }
}
