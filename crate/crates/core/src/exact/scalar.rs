//! Gaussian rationals: complex numbers `a/b + (c/d)i` with rational parts.
//!
//! Every scalar in the crate lives in this field, so rank and membership
//! questions are decided exactly.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Q;
use crate::error::{Error, Result};

/// An element of ℚ(i). Both parts are kept in lowest terms with a positive
/// denominator; parts that fit in `i64` avoid big-integer arithmetic.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: Q,
    im: Q,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self {
            re: Q::int(n),
            im: Q::default(),
        }
    }

    /// `numer / denom` on the real axis.
    ///
    /// Panics if `denom == 0`.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self {
            re: Q::int(numer).div(&Q::int(denom)),
            im: Q::default(),
        }
    }

    /// `re + im·i` with integer parts.
    pub fn complex(re: i64, im: i64) -> Self {
        Self {
            re: Q::int(re),
            im: Q::int(im),
        }
    }

    pub fn i() -> Self {
        Self::complex(0, 1)
    }

    pub fn re(&self) -> BigRational {
        self.re.to_big()
    }

    pub fn im(&self) -> BigRational {
        self.im.to_big()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    /// `|z|²`, a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        self.norm_q().to_big()
    }

    fn norm_q(&self) -> Q {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Least common multiple of the two denominators.
    pub(crate) fn denom_lcm(&self) -> BigInt {
        match (&self.re, &self.im) {
            (Q::Small(_, a), Q::Small(_, b)) => num_integer::lcm(*a as i128, *b as i128).into(),
            _ => num_integer::lcm(self.re.denom(), self.im.denom()),
        }
    }

    /// `self · scale` as a Gaussian integer, for a `scale` that clears both
    /// denominators.
    pub(crate) fn scaled_parts(&self, scale: &BigInt) -> (BigInt, BigInt) {
        let part = |q: &Q| -> BigInt {
            match q {
                Q::Small(0, _) => BigInt::zero(),
                Q::Small(n, 1) => scale * n,
                Q::Small(n, d) => (scale / d) * n,
                Q::Big(r) => (scale / r.denom()) * r.numer(),
            }
        };
        (part(&self.re), part(&self.im))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Self {
                re: Q::int(1).div(&self.re),
                im: Q::default(),
            });
        }
        let n = self.norm_q();
        Some(Self {
            re: self.re.div(&n),
            im: self.im.div(&n).neg(),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if rhs.im.is_zero() {
            return Some(Self {
                re: self.re.div(&rhs.re),
                im: self.im.div(&rhs.re),
            });
        }
        rhs.inv().map(|r| self * &r)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self {
            re: r.into(),
            im: Q::default(),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                let f: fn(&GaussianRational, &GaussianRational) -> GaussianRational = $body;
                f(self, rhs)
            }
        }
        impl $trait for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussianRational {
    re: a.re.add(&b.re),
    im: a.im.add(&b.im),
});
forward_binop!(Sub, sub, |a, b| GaussianRational {
    re: a.re.sub(&b.re),
    im: a.im.sub(&b.im),
});
forward_binop!(Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return GaussianRational {
            re: a.re.mul(&b.re),
            im: Q::default(),
        };
    }
    GaussianRational {
        re: a.re.mul(&b.re).sub(&a.im.mul(&b.im)),
        im: a.re.mul(&b.im).add(&a.im.mul(&b.re)),
    }
});
forward_binop!(Div, div, |a, b| a
    .checked_div(b)
    .expect("division by zero Gaussian rational"));

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re = self.re.add(&rhs.re);
        self.im = self.im.add(&rhs.im);
    }
}

impl AddAssign for GaussianRational {
    fn add_assign(&mut self, rhs: GaussianRational) {
        *self += &rhs;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re = self.re.sub(&rhs.re);
        self.im = self.im.sub(&rhs.im);
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl Sum for GaussianRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

fn fmt_rational(r: &Q, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match r {
        Q::Small(n, 1) => write!(f, "{n}"),
        Q::Small(n, d) => write!(f, "{n}/{d}"),
        Q::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
        Q::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rational(&self.re, f),
            (true, false) => {
                fmt_rational(&self.im, f)?;
                f.write_str("i")
            }
            (false, false) => {
                fmt_rational(&self.re, f)?;
                if !self.im.is_negative() {
                    f.write_str("+")?;
                }
                fmt_rational(&self.im, f)?;
                f.write_str("i")
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

/// Parses `[+-]digits[/digits]`. `offset` is the position of `s` inside the
/// full literal, used for error reporting.
fn parse_rational(s: &str, offset: usize) -> Result<BigRational> {
    if s.is_empty() {
        return Err(parse_err(offset, "expected a number"));
    }
    let (num, den) = match s.find('/') {
        Some(k) => (&s[..k], Some((&s[k + 1..], offset + k + 1))),
        None => (s, None),
    };
    let digits_ok = |t: &str, signed: bool| {
        let body = if signed {
            t.strip_prefix(['+', '-']).unwrap_or(t)
        } else {
            t
        };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits_ok(num, true) {
        return Err(parse_err(offset, format!("invalid numerator `{num}`")));
    }
    let numer: BigInt = num
        .trim_start_matches('+')
        .parse()
        .map_err(|_| parse_err(offset, format!("invalid numerator `{num}`")))?;
    let denom = match den {
        None => BigInt::one(),
        Some((d, pos)) => {
            if !digits_ok(d, false) {
                return Err(parse_err(pos, format!("invalid denominator `{d}`")));
            }
            let d: BigInt = d
                .parse()
                .map_err(|_| parse_err(pos, "invalid denominator"))?;
            if d.is_zero() {
                return Err(parse_err(pos, "zero denominator"));
            }
            d
        }
    };
    Ok(BigRational::new(numer, denom))
}

impl FromStr for GaussianRational {
    type Err = Error;

    /// Accepts `a/b+c/di` with either part optional: `3`, `-1/2`, `2i`,
    /// `1+1i`, `1/2-3/4i`, `i`, `-i`. No whitespace.
    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(parse_err(0, "empty literal"));
        }
        if let Some(pos) = s.find(|c: char| c.is_whitespace()) {
            return Err(parse_err(pos, "whitespace is not allowed"));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(parse_rational(s, 0)?.into());
        };
        // Split at the last sign that is not the leading one.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re_part, im_part, im_offset) = match split {
            Some(k) => (Some(&body[..k]), &body[k..], k),
            None => (None, body, 0),
        };
        let im = match im_part {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_rational(t, im_offset)?,
        };
        let re = match re_part {
            Some(r) => parse_rational(r, 0)?,
            None => BigRational::zero(),
        };
        Ok(Self::new(re, im))
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Literal {
            Text(String),
            Int(i64),
        }
        match Literal::deserialize(deserializer)? {
            Literal::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Literal::Int(n) => Ok(Self::from_int(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_documented_forms() {
        assert_eq!(q("3"), GaussianRational::from_int(3));
        assert_eq!(q("-1/2"), GaussianRational::ratio(-1, 2));
        assert_eq!(q("2i"), GaussianRational::complex(0, 2));
        assert_eq!(q("1+1i"), GaussianRational::complex(1, 1));
        assert_eq!(q("i"), GaussianRational::i());
        assert_eq!(q("-i"), -GaussianRational::i());
        assert_eq!(q("1-i"), GaussianRational::complex(1, -1));
        assert_eq!(
            q("1/2-3/4i"),
            GaussianRational::new(BigRational::new(1.into(), 2.into()), BigRational::new((-3).into(), 4.into()))
        );
        assert_eq!(q("2/4"), GaussianRational::ratio(1, 2));
        assert_eq!(q("+3"), GaussianRational::from_int(3));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["", "1/0", "a", "1 + i", "1//2", "1+", "/2", "1/2/3", "1+2j", "4/-2"] {
            assert!(bad.parse::<GaussianRational>().is_err(), "{bad:?} parsed");
        }
        match "1/0".parse::<GaussianRational>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "3", "-1/2", "2i", "1+1i", "1/2-3/4i", "-5/3i"] {
            assert_eq!(q(s).to_string(), s);
        }
    }

    #[test]
    fn field_arithmetic() {
        let a = q("1+2i");
        let b = q("3-1/2i");
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(q("i") * q("i"), q("-1"));
        assert_eq!(a.inv().unwrap() * &a, GaussianRational::one());
        assert!(GaussianRational::zero().inv().is_none());
    }
}
