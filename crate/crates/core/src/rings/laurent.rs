use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::{Ring, Scalar};

/// Exponent vector of a Laurent monomial.
pub type Exponent = Vec<i32>;

pub(crate) fn add_exp(a: &[i32], b: &[i32]) -> Exponent {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_add(*y).expect("Laurent exponent overflow"))
        .collect()
}

/// A Laurent polynomial in `nvars` variables.
///
/// Terms are kept in a sorted map with no zero coefficients, so structural
/// equality is ring equality. A polynomial with `nvars == 0` is a constant and
/// combines with polynomials in any number of variables.
#[derive(Clone)]
pub struct LaurentPoly<S> {
    nvars: usize,
    terms: BTreeMap<Exponent, S>,
}

impl<S: Scalar> LaurentPoly<S> {
    pub fn zero_in(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exp: Exponent, c: S) -> Self {
        let mut p = Self::zero_in(exp.len());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// The variable `x_i` with coefficient 1 in the ring given by `params`.
    pub fn var(params: &S::Params, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, S::from_i64(params, 1))
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, S)>) -> Self {
        let mut p = Self::zero_in(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &S)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Exponent, S)> {
        self.terms.into_iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[i32]) -> Option<&S> {
        self.terms.get(e)
    }

    pub fn add_term(&mut self, e: Exponent, c: S) {
        if c.is_zero() {
            return;
        }
        let e = if self.nvars == 0 && !e.is_empty() {
            self.widen(e.len());
            e
        } else {
            self.pad(e)
        };
        match self.terms.remove(&e) {
            None => {
                self.terms.insert(e, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
        }
    }

    fn pad(&self, e: Exponent) -> Exponent {
        if e.len() == self.nvars {
            e
        } else {
            assert!(e.is_empty(), "exponent length mismatch");
            vec![0; self.nvars]
        }
    }

    fn widen(&mut self, nvars: usize) {
        if self.nvars == nvars {
            return;
        }
        assert_eq!(self.nvars, 0, "variable count mismatch");
        let old = std::mem::take(&mut self.terms);
        self.nvars = nvars;
        for (_, c) in old {
            self.terms.insert(vec![0; nvars], c);
        }
    }

    fn aligned(mut self, other: &mut Self) -> Self {
        if self.nvars == 0 {
            self.widen(other.nvars);
        } else if other.nvars == 0 {
            other.widen(self.nvars);
        }
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        self
    }

    /// `Some((e, c))` when the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(&Exponent, &S)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> S {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(S::zero)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero_in(self.nvars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LaurentPoly<T> {
        let mut out = LaurentPoly::zero_in(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Re-create every coefficient in the ring described by `params`.
    pub fn bind(&self, params: &S::Params) -> Self {
        self.map_coeffs(|c| S::from_bigint(params, &c.to_bigint().expect("integral coefficient")))
    }

    pub fn partial(&self, i: usize, params: &S::Params) -> Self {
        let mut out = Self::zero_in(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c.clone() * S::from_i64(params, e[i] as i64));
        }
        out
    }

    /// Pull back along the monomial map `x_j ↦ t^{rows[j]}` into a ring with
    /// `target_nvars` variables.
    pub fn substitute_monomial(&self, rows: &[Exponent], target_nvars: usize) -> Self {
        let mut out = Self::zero_in(target_nvars);
        for (e, c) in &self.terms {
            let mut img = vec![0i32; target_nvars];
            for (j, &ej) in e.iter().enumerate() {
                if ej == 0 {
                    continue;
                }
                for (k, &r) in rows[j].iter().enumerate() {
                    img[k] = img[k]
                        .checked_add(ej.checked_mul(r).expect("Laurent exponent overflow"))
                        .expect("Laurent exponent overflow");
                }
            }
            out.add_term(img, c.clone());
        }
        out
    }

    /// General substitution `x_j ↦ images[j]`; negative powers need the image
    /// to be invertible.
    pub fn substitute(&self, images: &[Self]) -> Option<Self> {
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Self::zero_in(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (j, &ej) in e.iter().enumerate() {
                term = term * images[j].pow_i(ej as i64)?;
            }
            out = out + term;
        }
        Some(out)
    }

    /// Scale every exponent by `p`; on 𝔽_p coefficients this is the
    /// Frobenius endomorphism.
    pub fn scale_exponents(&self, p: i32) -> Self {
        let mut out = Self::zero_in(self.nvars);
        for (e, c) in &self.terms {
            let e2 = e
                .iter()
                .map(|x| x.checked_mul(p).expect("Laurent exponent overflow"))
                .collect();
            out.add_term(e2, c.clone());
        }
        out
    }

    pub fn pow_i(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow_n(e as u64))
        } else {
            Some(self.inverse()?.pow_n(e.unsigned_abs()))
        }
    }

    pub fn pow_n(&self, e: u64) -> Self {
        let mut acc = Self::constant(self.nvars, S::one());
        let mut base = self.clone();
        let mut e = e;
        if e == 0 {
            return acc;
        }
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                acc = if first { base.clone() } else { acc * base.clone() };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Inverse in the Laurent ring. Succeeds for a unit times a monomial, and
    /// for such a term plus a nilpotent remainder (coefficient rings ℤ/p^k).
    pub fn inverse(&self) -> Option<Self> {
        let mut units = self.terms.iter().filter(|(_, c)| c.is_unit());
        let (e, c) = units.next()?;
        if units.next().is_some() {
            return None;
        }
        let neg_e: Exponent = e.iter().map(|x| -x).collect();
        let lead_inv = Self::monomial(neg_e, c.try_inverse()?);
        let one = Self::constant(self.nvars, c.clone() * c.try_inverse()?);
        let nil = self.clone() * lead_inv.clone() - one.clone();
        if nil.is_zero() {
            return Some(lead_inv);
        }
        if nil.terms.values().any(|c| c.is_unit()) {
            return None;
        }
        // (1 + n)^{-1} = Σ (−n)^k, terminating because n is nilpotent.
        let mut sum = one.clone();
        let mut power = one;
        for _ in 0..64 {
            power = power * (-nil.clone());
            if power.is_zero() {
                return Some(sum * lead_inv);
            }
            sum = sum + power.clone();
        }
        None
    }

    /// Componentwise minimum of exponents, `None` for zero.
    pub fn min_exponents(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| {
            acc.iter().zip(e).map(|(a, b)| *a.min(b)).collect()
        }))
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            for (i, &x) in e.iter().enumerate() {
                let name = names
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| format!("x{i}"));
                match x {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{x}")),
                }
            }
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, cs),
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if factors.is_empty() {
                out.push_str(&mag);
            } else {
                if mag != "1" {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl<S: Scalar> PartialEq for LaurentPoly<S> {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars == other.nvars {
            return self.terms == other.terms;
        }
        if self.nvars != 0 && other.nvars != 0 {
            return false;
        }
        // a zero-variable constant against a polynomial in n variables
        self.terms.len() == other.terms.len()
            && self.constant_term() == other.constant_term()
            && self.terms.keys().chain(other.terms.keys()).all(|e| e.iter().all(|&x| x == 0))
    }
}

impl<S: Scalar> fmt::Debug for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}

impl<S: Scalar> fmt::Display for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}

impl<S: Scalar> Add for LaurentPoly<S> {
    type Output = Self;
    fn add(self, mut rhs: Self) -> Self {
        let mut lhs = self.aligned(&mut rhs);
        for (e, c) in rhs.terms {
            lhs.add_term(e, c);
        }
        lhs
    }
}

impl<S: Scalar> Sub for LaurentPoly<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Neg for LaurentPoly<S> {
    type Output = Self;
    fn neg(self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<S: Scalar> Mul for LaurentPoly<S> {
    type Output = Self;
    fn mul(self, mut rhs: Self) -> Self {
        let lhs = self.aligned(&mut rhs);
        let mut out = Self::zero_in(lhs.nvars);
        for (ea, ca) in &lhs.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(add_exp(ea, eb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Zero for LaurentPoly<S> {
    fn zero() -> Self {
        Self::zero_in(0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<S: Scalar> One for LaurentPoly<S> {
    fn one() -> Self {
        Self::constant(0, S::one())
    }
}

impl<S: Scalar> Ring for LaurentPoly<S> {
    /// Coefficient-ring parameters and number of variables.
    type Params = (S::Params, usize);

    fn from_bigint(params: &Self::Params, n: &BigInt) -> Self {
        Self::constant(params.1, S::from_bigint(&params.0, n))
    }

    fn try_inverse(&self) -> Option<Self> {
        self.inverse()
    }

    fn characteristic(params: &Self::Params) -> BigUint {
        S::characteristic(&params.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Zn;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_i64(&(), n)
    }

    #[test]
    fn arithmetic_is_canonical() {
        let x = LaurentPoly::<Q>::var(&(), 2, 0);
        let y = LaurentPoly::<Q>::var(&(), 2, 1);
        let p = x.clone() * y.clone() - y.clone() * x.clone();
        assert!(p.is_zero());
        let s = (x.clone() + y.clone()) * (x.clone() - y.clone());
        assert_eq!(s, x.pow_n(2) - y.pow_n(2));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn constants_widen() {
        let x = LaurentPoly::<Q>::var(&(), 3, 2);
        let p = x.clone() + LaurentPoly::one();
        assert_eq!(p.nvars(), 3);
        assert_eq!(p.constant_term(), q(1));
    }

    #[test]
    fn monomial_inverse() {
        let p = LaurentPoly::monomial(vec![2, -1], q(3));
        let inv = p.inverse().unwrap();
        assert_eq!(p * inv, LaurentPoly::constant(2, q(1)));
        let x = LaurentPoly::<Q>::var(&(), 1, 0);
        assert!((x + LaurentPoly::one()).inverse().is_none());
    }

    #[test]
    fn nilpotent_inverse_mod_p_squared() {
        let m = 9u64;
        let x = LaurentPoly::<Zn>::var(&m, 1, 0);
        let three = LaurentPoly::constant(1, Zn::new(3, m));
        let u = x.clone() + three.clone() * x.pow_n(2);
        let inv = u.inverse().unwrap();
        assert_eq!(u * inv, LaurentPoly::constant(1, Zn::new(1, m)));
    }

    #[test]
    fn partial_derivatives() {
        // d/dx (x^-1) = -x^-2
        let p = LaurentPoly::monomial(vec![-1], q(1));
        assert_eq!(p.partial(0, &()), LaurentPoly::monomial(vec![-2], q(-1)));
        // over F_5, d/dx x^5 = 0
        let f = LaurentPoly::monomial(vec![5], Zn::new(1, 5));
        assert!(f.partial(0, &5).is_zero());
    }

    #[test]
    fn monomial_substitution() {
        // x ↦ t^-1, y ↦ s t^-1
        let p = LaurentPoly::monomial(vec![1, 2], q(2));
        let img = p.substitute_monomial(&[vec![0, -1], vec![1, -1]], 2);
        assert_eq!(img, LaurentPoly::monomial(vec![2, -3], q(2)));
    }

    #[test]
    fn display_round_trip_shape() {
        let p = LaurentPoly::from_terms(2, vec![(vec![-1, 2], q(3)), (vec![0, 0], q(-1))]);
        assert_eq!(p.fmt_with(&["x".into(), "y".into()]), "3*x^-1*y^2 - 1");
    }
}
