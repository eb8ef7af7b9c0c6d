use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{Ring, Scalar};

/// Largest supported modulus; keeps every product inside `i128` comfortably.
pub const MAX_MODULUS: u64 = 1 << 31;

/// An element of ℤ/n with the modulus carried alongside the value.
///
/// `modulus == 0` marks an unbound integer, which is what `Zero::zero()` and
/// `One::one()` produce. Binary operations adopt the modulus of whichever
/// operand is bound.
#[derive(Clone, Copy)]
pub struct Zn {
    value: i64,
    modulus: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Zn {
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(
            modulus > 0 && modulus <= MAX_MODULUS,
            "modulus {modulus} out of range"
        );
        Zn {
            value: value.rem_euclid(modulus as i64),
            modulus,
        }
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    /// The modulus, or `None` for an unbound integer.
    pub fn modulus(&self) -> Option<u64> {
        (self.modulus != 0).then_some(self.modulus)
    }

    /// Symmetric representative in (−n/2, n/2].
    pub fn symmetric(&self) -> i64 {
        if self.modulus == 0 {
            return self.value;
        }
        let n = self.modulus as i64;
        if self.value > n / 2 {
            self.value - n
        } else {
            self.value
        }
    }

    /// Reinterpret in ℤ/m, where m divides the current modulus.
    pub fn reduce(&self, m: u64) -> Zn {
        if let Some(n) = self.modulus() {
            assert!(n % m == 0, "cannot reduce mod {n} to mod {m}");
        }
        Zn::new(self.value, m)
    }

    fn join(a: u64, b: u64) -> u64 {
        match (a, b) {
            (0, m) | (m, 0) => m,
            (x, y) => {
                assert_eq!(x, y, "mixed moduli {x} and {y}");
                x
            }
        }
    }

    fn make(value: i128, modulus: u64) -> Zn {
        if modulus == 0 {
            let v = i64::try_from(value).expect("unbound integer overflow");
            Zn { value: v, modulus }
        } else {
            Zn {
                value: value.rem_euclid(modulus as i128) as i64,
                modulus,
            }
        }
    }
}

impl fmt::Debug for Zn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 0 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{} mod {}", self.value, self.modulus)
        }
    }
}

impl fmt::Display for Zn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl PartialEq for Zn {
    fn eq(&self, other: &Self) -> bool {
        let m = Zn::join(self.modulus, other.modulus);
        if m == 0 {
            self.value == other.value
        } else {
            (self.value as i128 - other.value as i128).rem_euclid(m as i128) == 0
        }
    }
}

impl Eq for Zn {}

impl Add for Zn {
    type Output = Zn;
    fn add(self, rhs: Zn) -> Zn {
        let m = Zn::join(self.modulus, rhs.modulus);
        Zn::make(self.value as i128 + rhs.value as i128, m)
    }
}

impl Sub for Zn {
    type Output = Zn;
    fn sub(self, rhs: Zn) -> Zn {
        let m = Zn::join(self.modulus, rhs.modulus);
        Zn::make(self.value as i128 - rhs.value as i128, m)
    }
}

impl Mul for Zn {
    type Output = Zn;
    fn mul(self, rhs: Zn) -> Zn {
        let m = Zn::join(self.modulus, rhs.modulus);
        Zn::make(self.value as i128 * rhs.value as i128, m)
    }
}

impl Neg for Zn {
    type Output = Zn;
    fn neg(self) -> Zn {
        Zn::make(-(self.value as i128), self.modulus)
    }
}

impl Zero for Zn {
    fn zero() -> Self {
        Zn {
            value: 0,
            modulus: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl One for Zn {
    fn one() -> Self {
        Zn {
            value: 1,
            modulus: 0,
        }
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

impl Ring for Zn {
    type Params = u64;

    fn from_bigint(params: &u64, n: &BigInt) -> Self {
        let m = BigInt::from(*params);
        let r = n.mod_floor(&m);
        Zn::new(r.to_i64().expect("reduced value fits"), *params)
    }

    fn from_i64(params: &u64, n: i64) -> Self {
        Zn::new(n, *params)
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.modulus == 0 {
            return match self.value {
                1 | -1 => Some(*self),
                _ => None,
            };
        }
        let (g, x, _) = ext_gcd(self.value as i128, self.modulus as i128);
        (g == 1).then(|| Zn::make(x, self.modulus))
    }

    fn characteristic(params: &u64) -> BigUint {
        BigUint::from(*params)
    }
}

impl Scalar for Zn {
    fn euclid_norm(&self) -> BigUint {
        if self.value == 0 {
            return BigUint::zero();
        }
        if self.modulus == 0 {
            return BigUint::from(self.value.unsigned_abs());
        }
        BigUint::from((self.value as u64).gcd(&self.modulus))
    }

    // ℤ/n is a principal ideal ring; with the gcd norm this is a Euclidean
    // structure on ℤ/p^k, and plain field division when n is prime.
    fn div_rem_euclid(&self, d: &Self) -> (Self, Self) {
        let m = Zn::join(self.modulus, d.modulus);
        assert!(m != 0, "euclidean division needs a bound modulus");
        assert!(!d.is_zero(), "division by zero");
        let g = (d.value as u64).gcd(&m);
        if (self.value as u64) % g != 0 {
            return (Zn::new(0, m), *self);
        }
        let sub = m / g;
        let dd = Zn::new(d.value / g as i64, sub);
        let inv = dd.try_inverse().expect("unit after removing gcd");
        let q = Zn::new(self.value / g as i64, sub) * inv;
        (Zn::new(q.value, m), Zn::new(0, m))
    }

    fn canonical_unit(&self) -> Self {
        if self.modulus == 0 || self.value == 0 {
            return Zn::one();
        }
        let g = (self.value as u64).gcd(&self.modulus);
        let sub = self.modulus / g;
        if sub == 1 {
            return Zn::new(1, self.modulus);
        }
        // self = g·u with u a unit mod n/g; lift u⁻¹ to a unit mod n.
        let u = Zn::new(self.value / g as i64, sub);
        let inv = u.try_inverse().expect("unit");
        let mut lift = inv.value;
        while (lift as u64).gcd(&self.modulus) != 1 {
            lift += sub as i64;
        }
        Zn::new(lift, self.modulus)
    }

    fn is_field(params: &u64) -> bool {
        is_prime(*params)
    }

    fn to_bigint(&self) -> Option<BigInt> {
        Some(BigInt::from(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_inverse() {
        for a in 1..7 {
            let x = Zn::new(a, 7);
            assert_eq!(x * x.try_inverse().unwrap(), Zn::new(1, 7));
        }
        assert!(Zn::new(0, 7).try_inverse().is_none());
        assert!(Zn::new(3, 9).try_inverse().is_none());
    }

    #[test]
    fn unbound_identities_adopt_modulus() {
        let x = Zn::new(4, 5);
        assert_eq!(x + Zn::one(), Zn::new(0, 5));
        assert!((x + Zn::one()).is_zero());
        assert_eq!(Zn::one(), Zn::new(6, 5));
    }

    #[test]
    fn prime_power_division() {
        let p2 = 25;
        let a = Zn::new(10, p2);
        let d = Zn::new(5, p2);
        let (q, r) = a.div_rem_euclid(&d);
        assert!(r.is_zero());
        assert_eq!(q * d, a);
        let (q, r) = Zn::new(3, p2).div_rem_euclid(&d);
        assert!(q.is_zero());
        assert!(r.euclid_norm() < d.euclid_norm());
        let u = Zn::new(10, p2).canonical_unit();
        assert!(u.is_unit());
        assert_eq!((Zn::new(10, p2) * u).value(), 5);
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..20).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}
