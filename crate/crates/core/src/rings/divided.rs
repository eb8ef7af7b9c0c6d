use super::{binomial, Ring};
use crate::error::{Error, Result};

/// A truncated series `Σ_{k ≤ N} a_k · t^k/k!` in the divided-power basis.
///
/// Multiplication uses `γ_m γ_n = C(m+n, n) γ_{m+n}` with the binomial formed
/// exactly over ℤ and then mapped into the coefficient ring, so no division
/// ever happens.
#[derive(Clone, Debug, PartialEq)]
pub struct DividedPowerSeries<C: Ring> {
    params: C::Params,
    coeffs: Vec<C>,
}

impl<C: Ring> DividedPowerSeries<C> {
    /// Coefficients `a_0..=a_N`.
    pub fn new(params: C::Params, coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least a_0");
        DividedPowerSeries { params, coeffs }
    }

    pub fn one(params: C::Params, truncation: usize) -> Self {
        let mut coeffs = vec![C::from_i64(&params, 0); truncation + 1];
        coeffs[0] = C::from_i64(&params, 1);
        DividedPowerSeries { params, coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn params(&self) -> &C::Params {
        &self.params
    }

    /// Coefficient of `t^k/k!`.
    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.truncation() != other.truncation() {
            return Err(Error::ShapeMismatch(format!(
                "divided-power truncations {} and {}",
                self.truncation(),
                other.truncation()
            )));
        }
        if self.params != other.params {
            return Err(Error::ShapeMismatch(
                "divided-power coefficient rings differ".into(),
            ));
        }
        Ok(())
    }

    pub fn dp_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.truncation();
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k).fold(C::from_i64(&self.params, 0), |acc, i| {
                    let prod = self.coeffs[i].clone() * other.coeffs[k - i].clone();
                    if prod.is_zero() {
                        acc
                    } else {
                        acc + prod.mul_bigint(&self.params, &binomial(k as u64, i as u64))
                    }
                })
            })
            .collect();
        Ok(DividedPowerSeries {
            params: self.params.clone(),
            coeffs,
        })
    }

    pub fn dp_invert(&self) -> Result<Self> {
        let a0_inv = self.coeffs[0]
            .try_inverse()
            .ok_or_else(|| Error::NotUnit(format!("constant term {:?}", self.coeffs[0])))?;
        let n = self.truncation();
        let mut b: Vec<C> = Vec::with_capacity(n + 1);
        b.push(a0_inv.clone());
        for k in 1..=n {
            let s = (1..=k).fold(C::from_i64(&self.params, 0), |acc, i| {
                let prod = self.coeffs[i].clone() * b[k - i].clone();
                acc + prod.mul_bigint(&self.params, &binomial(k as u64, i as u64))
            });
            b.push(-(a0_inv.clone() * s));
        }
        Ok(DividedPowerSeries {
            params: self.params.clone(),
            coeffs: b,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Zn;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};

    fn z(v: &[i64]) -> DividedPowerSeries<BigInt> {
        DividedPowerSeries::new((), v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn binomial_products() {
        // (t/1!)·(t/1!) = 2·t²/2!
        assert_eq!(z(&[0, 1, 0]).dp_mul(&z(&[0, 1, 0])).unwrap(), z(&[0, 0, 2]));
        // (t²/2!)·(t³/3!) = 10·t⁵/5!
        let a = z(&[0, 0, 1, 0, 0, 0]);
        let b = z(&[0, 0, 0, 1, 0, 0]);
        assert_eq!(a.dp_mul(&b).unwrap(), z(&[0, 0, 0, 0, 0, 10]));
    }

    #[test]
    fn char_two_square_vanishes() {
        let p = 2;
        let t = DividedPowerSeries::new(p, vec![Zn::new(0, p), Zn::new(1, p), Zn::new(0, p)]);
        let sq = t.dp_mul(&t).unwrap();
        assert!(sq.coeff(2).is_zero());
    }

    #[test]
    fn mismatched_truncation() {
        assert!(z(&[1, 1]).dp_mul(&z(&[1, 1, 1])).is_err());
        assert!(z(&[2, 1]).dp_invert().is_err());
    }

    /// Independent oracle: convert to an ordinary power series over ℚ,
    /// invert there, convert back.
    fn ordinary_inverse_oracle(a: &[i64]) -> Vec<i64> {
        let n = a.len();
        let mut fact = vec![BigRational::one(); n];
        for k in 1..n {
            fact[k] = fact[k - 1].clone() * BigRational::from_integer(BigInt::from(k));
        }
        let ord: Vec<BigRational> = (0..n)
            .map(|k| BigRational::from_integer(BigInt::from(a[k])) / fact[k].clone())
            .collect();
        let mut inv = vec![BigRational::zero(); n];
        inv[0] = ord[0].recip();
        for k in 1..n {
            let s: BigRational = (1..=k).map(|i| ord[i].clone() * inv[k - i].clone()).sum();
            inv[k] = -s * inv[0].clone();
        }
        (0..n)
            .map(|k| (inv[k].clone() * fact[k].clone()).to_integer().to_i64().unwrap())
            .collect()
    }

    #[test]
    fn inverse_examples_match_oracle() {
        let one_plus_t = [1, 1, 0, 0, 0];
        let expected = ordinary_inverse_oracle(&one_plus_t);
        assert_eq!(expected, vec![1, -1, 2, -6, 24]);
        assert_eq!(z(&one_plus_t).dp_invert().unwrap(), z(&expected));

        let one_plus_half_t2 = [1, 0, 1, 0, 0];
        let expected = ordinary_inverse_oracle(&one_plus_half_t2);
        assert_eq!(expected[..3], [1, 0, -1]);
        assert_eq!(z(&one_plus_half_t2).dp_invert().unwrap(), z(&expected));

        assert_eq!(z(&[1, 0, 0]).dp_invert().unwrap(), z(&[1, 0, 0]));
    }
}
