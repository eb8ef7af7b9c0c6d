//! Exact arithmetic: base scalars, Laurent polynomials, differential forms,
//! divided-power series and dense matrices.
//!
//! Everything above this module is generic over [`Scalar`]. The concrete base
//! rings are [`BigInt`] (ℤ), [`BigRational`] (ℚ) and [`Zn`] (ℤ/n, a field when
//! n is prime). Runtime parameters such as the modulus travel as
//! [`Ring::Params`]; code that needs an integer constant asks for it through
//! [`Ring::from_i64`] with the parameters in hand.

mod divided;
mod form;
mod laurent;
mod matrix;
mod zn;

pub use divided::DividedPowerSeries;
pub use form::{form_wedge, DifferentialForm};
pub use laurent::{Exponent, LaurentPoly};
pub use matrix::Matrix;
pub use zn::{is_prime, Zn};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A commutative ring with runtime parameters.
///
/// `Zero::zero()` and `One::one()` are parameter-free identities. Stored data
/// should be built through [`Ring::from_i64`] / [`Ring::from_bigint`] so that
/// integer multiples are reduced in the right characteristic.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Params: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn from_bigint(params: &Self::Params, n: &BigInt) -> Self;

    fn from_i64(params: &Self::Params, n: i64) -> Self {
        Self::from_bigint(params, &BigInt::from(n))
    }

    fn try_inverse(&self) -> Option<Self>;

    /// Characteristic of the ring described by `params` (0 for ℤ, ℚ).
    fn characteristic(params: &Self::Params) -> BigUint;

    fn is_unit(&self) -> bool {
        self.try_inverse().is_some()
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a * base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc.unwrap_or_else(Self::one)
    }

    /// `self` multiplied by an integer, reduced in `self`'s characteristic.
    fn mul_bigint(&self, params: &Self::Params, n: &BigInt) -> Self {
        self.clone() * Self::from_bigint(params, n)
    }
}

/// A base scalar: a Euclidean ring (ℤ, a field, or ℤ/p^k) with printing.
///
/// The Euclidean structure is what Smith normal form needs; over a field every
/// nonzero element has norm 1 and division is exact.
pub trait Scalar: Ring + fmt::Display {
    /// Euclidean size; zero has size 0 and nothing else does.
    fn euclid_norm(&self) -> BigUint;

    /// `(q, r)` with `self = q·d + r` and `norm(r) < norm(d)`; `d` nonzero.
    fn div_rem_euclid(&self, d: &Self) -> (Self, Self);

    /// A unit `u` such that `self·u` is the canonical associate of `self`.
    fn canonical_unit(&self) -> Self;

    fn is_field(params: &Self::Params) -> bool;

    /// Lift to an integer representative (canonical for ℤ/n, numerator for ℚ
    /// with denominator 1). `None` when no integer representative exists.
    fn to_bigint(&self) -> Option<BigInt>;

    fn divide_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return if self.is_zero() { Some(Self::zero()) } else { None };
        }
        let (q, r) = self.div_rem_euclid(d);
        r.is_zero().then_some(q)
    }
}

impl Ring for BigInt {
    type Params = ();

    fn from_bigint(_: &(), n: &BigInt) -> Self {
        n.clone()
    }

    fn try_inverse(&self) -> Option<Self> {
        (self.abs().is_one()).then(|| self.clone())
    }

    fn characteristic(_: &()) -> BigUint {
        BigUint::zero()
    }
}

impl Scalar for BigInt {
    fn euclid_norm(&self) -> BigUint {
        self.magnitude().clone()
    }

    fn div_rem_euclid(&self, d: &Self) -> (Self, Self) {
        self.div_rem(d)
    }

    fn canonical_unit(&self) -> Self {
        if self.sign() == Sign::Minus {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }

    fn is_field(_: &()) -> bool {
        false
    }

    fn to_bigint(&self) -> Option<BigInt> {
        Some(self.clone())
    }
}

impl Ring for BigRational {
    type Params = ();

    fn from_bigint(_: &(), n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn try_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn characteristic(_: &()) -> BigUint {
        BigUint::zero()
    }
}

impl Scalar for BigRational {
    fn euclid_norm(&self) -> BigUint {
        if self.is_zero() {
            BigUint::zero()
        } else {
            BigUint::one()
        }
    }

    fn div_rem_euclid(&self, d: &Self) -> (Self, Self) {
        (self / d, BigRational::zero())
    }

    fn canonical_unit(&self) -> Self {
        if self.is_zero() {
            BigRational::one()
        } else {
            self.recip()
        }
    }

    fn is_field(_: &()) -> bool {
        true
    }

    fn to_bigint(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.to_integer())
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
    }

    #[test]
    fn integer_euclid() {
        let a = BigInt::from(-7);
        let b = BigInt::from(3);
        let (q, r) = a.div_rem_euclid(&b);
        assert_eq!(q * b.clone() + r.clone(), a);
        assert!(r.euclid_norm() < b.euclid_norm());
        assert_eq!(BigInt::from(-4).canonical_unit(), BigInt::from(-1));
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(BigInt::from(3).pow_u(5), BigInt::from(243));
        assert_eq!(BigInt::from(3).pow_u(0), BigInt::one());
    }
}
