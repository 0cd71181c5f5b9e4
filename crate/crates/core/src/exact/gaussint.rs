//! Gaussian integers ℤ[i], the integral domain fraction-free elimination runs in.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn one() -> Self {
        Self {
            re: BigInt::one(),
            im: BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// `x · scale` where `scale` clears both denominators of `x`.
    pub fn scaled(x: &GaussianRational, scale: &BigInt) -> Self {
        let (re, im) = x.scaled_parts(scale);
        Self { re, im }
    }

    pub fn to_rational(&self) -> GaussianRational {
        GaussianRational::new(
            BigRational::from_integer(self.re.clone()),
            BigRational::from_integer(self.im.clone()),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self {
                re: &self.re * &rhs.re,
                im: BigInt::zero(),
            };
        }
        Self {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    /// Division known to be exact in ℤ[i].
    pub fn div_exact(&self, rhs: &Self) -> Self {
        if rhs.is_one() {
            return self.clone();
        }
        if rhs.im.is_zero() {
            debug_assert!((&self.re % &rhs.re).is_zero() && (&self.im % &rhs.re).is_zero());
            return Self {
                re: &self.re / &rhs.re,
                im: &self.im / &rhs.re,
            };
        }
        let norm = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        let conj = Self {
            re: rhs.re.clone(),
            im: -&rhs.im,
        };
        let num = self.mul(&conj);
        debug_assert!((&num.re % &norm).is_zero() && (&num.im % &norm).is_zero());
        Self {
            re: num.re / &norm,
            im: num.im / norm,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_division_inverts_multiplication() {
        let a = GaussInt {
            re: 7.into(),
            im: (-3).into(),
        };
        let b = GaussInt {
            re: 2.into(),
            im: 5.into(),
        };
        assert_eq!(a.mul(&b).div_exact(&b), a);
        assert_eq!(a.mul(&b).div_exact(&a), b);
    }

    #[test]
    fn scaling_clears_denominators() {
        let x: GaussianRational = "1/2+2/3i".parse().unwrap();
        let g = GaussInt::scaled(&x, &x.denom_lcm());
        assert_eq!(g.re, BigInt::from(3));
        assert_eq!(g.im, BigInt::from(4));
    }
}
