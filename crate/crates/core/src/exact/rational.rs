//! Rationals with an inline `i64` representation and a big-integer fallback.
//!
//! `Small(n, d)` is kept in lowest terms with `d > 0`; `Big` is only used when
//! the reduced value does not fit, so equal values have equal representations.

use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Q {
    Small(i64, i64),
    Big(BigRational),
}

impl Default for Q {
    fn default() -> Self {
        Q::Small(0, 1)
    }
}

impl Hash for Q {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Q::Small(n, d) => (0u8, n, d).hash(state),
            Q::Big(r) => (1u8, r).hash(state),
        }
    }
}

fn from_i128(n: i128, d: i128) -> Q {
    debug_assert!(d != 0);
    let g = n.gcd(&d);
    let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
    if d < 0 {
        n = -n;
        d = -d;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(n), Ok(d)) => Q::Small(n, d),
        _ => Q::Big(BigRational::new(n.into(), d.into())),
    }
}

impl Q {
    pub fn int(n: i64) -> Self {
        Q::Small(n, 1)
    }

    pub fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Q::Small(n, d),
            _ => Q::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw((*n).into(), (*d).into()),
            Q::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Q::Small(0, _))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Q::Small(n, _) => *n < 0,
            Q::Big(r) => r.is_negative(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Q::Small(_, d) => (*d).into(),
            Q::Big(r) => r.denom().clone(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Q::Small(0, _), _) => rhs.clone(),
            (_, Q::Small(0, _)) => self.clone(),
            (&Q::Small(a, b), &Q::Small(c, d)) => {
                if b == d {
                    return from_i128(a as i128 + c as i128, b as i128);
                }
                let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
                match (a * d).checked_add(c * b) {
                    Some(n) => from_i128(n, b * d),
                    None => Q::from_big(self.to_big() + rhs.to_big()),
                }
            }
            _ => Q::from_big(self.to_big() + rhs.to_big()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            &Q::Small(n, d) if n != i64::MIN => Q::Small(-n, d),
            _ => Q::from_big(-self.to_big()),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Q::Small(0, _), _) | (_, Q::Small(0, _)) => Q::default(),
            (Q::Small(1, 1), _) => rhs.clone(),
            (_, Q::Small(1, 1)) => self.clone(),
            (&Q::Small(a, b), &Q::Small(c, d)) => {
                from_i128(a as i128 * c as i128, b as i128 * d as i128)
            }
            _ => Q::from_big(self.to_big() * rhs.to_big()),
        }
    }

    /// Panics on division by zero.
    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "rational division by zero");
        match (self, rhs) {
            (&Q::Small(a, b), &Q::Small(c, d)) => {
                from_i128(a as i128 * d as i128, b as i128 * c as i128)
            }
            _ => Q::from_big(self.to_big() / rhs.to_big()),
        }
    }
}

impl From<BigRational> for Q {
    fn from(r: BigRational) -> Self {
        Q::from_big(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values_stay_reduced() {
        assert_eq!(Q::Small(1, 2).add(&Q::Small(1, 2)), Q::int(1));
        assert_eq!(Q::Small(1, 6).sub(&Q::Small(1, 3)), Q::Small(-1, 6));
        assert_eq!(Q::Small(2, 3).div(&Q::Small(-4, 9)), Q::Small(-3, 2));
    }

    #[test]
    fn overflow_promotes_and_shrinking_demotes() {
        let big = Q::int(i64::MAX).mul(&Q::int(4));
        assert!(matches!(big, Q::Big(_)));
        assert_eq!(big.div(&Q::int(4)), Q::int(i64::MAX));
        assert_eq!(Q::int(i64::MIN).neg().add(&Q::int(-1)), Q::int(i64::MAX));
        assert_eq!(
            Q::Small(1, i64::MAX).add(&Q::Small(1, i64::MAX - 1)).to_big(),
            BigRational::new(1.into(), i64::MAX.into()) + BigRational::new(1.into(), (i64::MAX - 1).into())
        );
    }
}
