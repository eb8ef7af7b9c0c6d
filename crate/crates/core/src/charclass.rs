//! Chern classes in Hodge cohomology from the Atiyah class.
//!
//! `A_ab = g_ab^{-1} dg_ab` is a 1-cocycle of `End(E) ⊗ Ω^1`. Its power sums
//! `p_j = tr(A^{⌣j})` are scalar `(j, j)` cocycles, and Newton's identities
//! turn them into the coefficients of `det(1 − tA)`. With this sign
//! `c_1(O(1)) = +h` on projective space, where `h` is the class of
//! `dlog(x_b/x_a)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cech::{
    class_coordinates, class_equal, CechCochain, Coefficients, CoveredScheme, FormMatrix,
    VectorBundle,
};
use crate::error::{Error, Result};
use crate::rings::{DifferentialForm, LaurentPoly, Matrix, Ring, Scalar};

/// Which invariant form of the logarithmic derivative to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtiyahConvention {
    /// `g^{-1} dg`, a cocycle in the frame of the last chart.
    Left,
    /// `dg · g^{-1}`, naturally in the frame of the first chart; moved to the
    /// last chart before use.
    Right,
}

fn differential_of<S: Scalar>(x: &CoveredScheme<S>, g: &Matrix<LaurentPoly<S>>) -> FormMatrix<S> {
    let n = x.dim();
    FormMatrix::from_entries(
        g.rows(),
        g.cols(),
        g.data()
            .iter()
            .map(|f| DifferentialForm::function(f.clone() + LaurentPoly::zero_in(n)).d(x.params()))
            .collect(),
    )
}

/// The Atiyah cocycle of `E` as an `End(E)`-valued `(1,1)` cochain.
pub fn atiyah_cocycle<S: Scalar>(e: &Arc<VectorBundle<S>>) -> CechCochain<S> {
    atiyah_cocycle_with(e, AtiyahConvention::Left)
}

pub fn atiyah_cocycle_with<S: Scalar>(
    e: &Arc<VectorBundle<S>>,
    convention: AtiyahConvention,
) -> CechCochain<S> {
    let x = e.scheme().clone();
    let mut values = std::collections::BTreeMap::new();
    for &(a, b) in e.transitions().keys() {
        let g = e.transition(a, b, b);
        let g_inv = e.transition(b, a, b);
        let dg = differential_of(&x, &g);
        let v = match convention {
            AtiyahConvention::Left => dg.left_fn(&g_inv),
            // dg·g^{-1} lives in the frame of chart a; conjugating into the
            // frame of chart b gives g^{-1}(dg g^{-1})g
            AtiyahConvention::Right => dg.right_fn(&g_inv).left_fn(&g_inv).right_fn(&g),
        };
        values.insert(vec![a, b], v);
    }
    CechCochain::new(x, Coefficients::Endo(e.clone()), 1, 1, values)
        .expect("logarithmic derivatives are regular on overlaps")
}

/// `tr(A ⌣ … ⌣ A)` with `j` factors; `j = 0` gives the rank as a 0-cochain.
pub fn power_sum<S: Scalar>(a: &CechCochain<S>, j: usize) -> Result<CechCochain<S>> {
    let Coefficients::Endo(e) = a.coefficients() else {
        return Err(Error::InvalidArgument("power sums need an End(E)-valued cochain".into()));
    };
    if j == 0 {
        return Ok(CechCochain::one(a.scheme().clone()).scale_i64(e.rank() as i64));
    }
    let mut acc = a.clone();
    for _ in 1..j {
        acc = acc.cup(a)?;
    }
    acc.trace()
}

/// Divide every coefficient of a cochain by `k`, exactly.
fn divide_cochain<S: Scalar>(c: &CechCochain<S>, k: usize) -> Result<CechCochain<S>> {
    let x = c.scheme();
    let params = x.params();
    let kk = S::from_i64(params, k as i64);
    if let Some(inv) = kk.try_inverse() {
        return Ok(c.scale(&inv));
    }
    let p = S::characteristic(params).to_u64().unwrap_or(0);
    if p != 0 {
        return Err(Error::DivisionObstruction { k, p });
    }
    let mut values = std::collections::BTreeMap::new();
    for (t, v) in c.values() {
        let f = v.entry(0, 0);
        let mut out = DifferentialForm::zero(x.dim(), f.degree());
        for (i, e, coef) in f.monomial_terms() {
            let q = coef.divide_exact(&kk).ok_or_else(|| {
                Error::InexactDivision(format!("coefficient {coef} of a Newton term by {k}"))
            })?;
            out = out.add(&DifferentialForm::term(x.dim(), i.clone(), LaurentPoly::monomial(e.clone(), q)));
        }
        values.insert(t.clone(), FormMatrix::scalar(out));
    }
    CechCochain::new(x.clone(), Coefficients::Scalar, c.cech_degree(), c.form_degree(), values)
}

/// Total Chern class `c_0 + c_1 + …` with `c_k` a scalar `(k, k)` cochain.
#[derive(Clone, Debug)]
pub struct CharPoly<S: Scalar> {
    coeffs: Vec<CechCochain<S>>,
}

impl<S: Scalar> CharPoly<S> {
    fn top(x: &CoveredScheme<S>) -> usize {
        x.dim().min(x.num_charts() - 1)
    }

    pub fn one(x: &Arc<CoveredScheme<S>>) -> Self {
        let top = Self::top(x);
        let mut coeffs = vec![CechCochain::one(x.clone())];
        for k in 1..=top {
            coeffs.push(CechCochain::zero(x.clone(), Coefficients::Scalar, k, k));
        }
        CharPoly { coeffs }
    }

    /// `1 + c` for a single `(1,1)` class.
    pub fn linear(c1: CechCochain<S>) -> Result<Self> {
        if c1.bidegree() != (1, 1) || !c1.coefficients().is_scalar() {
            let (a, b) = c1.bidegree();
            return Err(Error::BidegreeMismatch(a, b, 1, 1));
        }
        let mut p = Self::one(c1.scheme());
        if p.coeffs.len() > 1 {
            p.coeffs[1] = c1;
        }
        Ok(p)
    }

    pub fn scheme(&self) -> &Arc<CoveredScheme<S>> {
        self.coeffs[0].scheme()
    }

    /// `c_k`, zero above the dimension.
    pub fn c(&self, k: usize) -> CechCochain<S> {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| CechCochain::zero(self.scheme().clone(), Coefficients::Scalar, k, k))
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Product in the cohomology ring, truncated above the dimension.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let top = self.degree_bound();
        let mut coeffs = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let mut acc = CechCochain::zero(self.scheme().clone(), Coefficients::Scalar, k, k);
            for i in 0..=k {
                acc = acc.add(&self.coeffs[i].cup(&other.coeffs[k - i])?)?;
            }
            coeffs.push(acc);
        }
        Ok(CharPoly { coeffs })
    }

    /// Multiplicative inverse: `s_0 = 1`, `s_k = −Σ_{i≥1} c_i ⌣ s_{k−i}`.
    pub fn inverse(&self) -> Result<Self> {
        let top = self.degree_bound();
        let mut s: Vec<CechCochain<S>> = vec![CechCochain::one(self.scheme().clone())];
        for k in 1..=top {
            let mut acc = CechCochain::zero(self.scheme().clone(), Coefficients::Scalar, k, k);
            for i in 1..=k {
                acc = acc.add(&self.coeffs[i].cup(&s[k - i])?)?;
            }
            s.push(acc.neg());
        }
        Ok(CharPoly { coeffs: s })
    }

    /// Classwise equality.
    pub fn class_equal(&self, other: &Self) -> Result<bool> {
        for k in 0..=self.degree_bound().max(other.degree_bound()) {
            if !class_equal(&self.c(k), &other.c(k))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coordinates of each `c_k` on `h^k` (projective space only).
    pub fn coordinates_on_h(&self) -> Result<Vec<S>> {
        let x = self.scheme();
        let h = hyperplane_class(x)?;
        let mut hk = CechCochain::one(x.clone());
        let mut out = Vec::new();
        for k in 0..=self.degree_bound() {
            if k > 0 {
                hk = hk.cup(&h)?;
            }
            let c = class_coordinates(&self.coeffs[k], std::slice::from_ref(&hk))?
                .ok_or_else(|| Error::InvalidArgument(format!("c_{k} is not a multiple of h^{k}")))?;
            out.push(c[0].clone());
        }
        Ok(out)
    }
}

/// `h_ab = dlog(x_b/x_a)` on projective space; `c_1(O(1)) = h`.
pub fn hyperplane_class<S: Scalar>(x: &Arc<CoveredScheme<S>>) -> Result<CechCochain<S>> {
    let n = x.dim();
    if x.num_charts() != n + 1 || x.name() != format!("P{n}") {
        return Err(Error::InvalidScheme(format!("{} is not a projective space", x.name())));
    }
    let mut values = std::collections::BTreeMap::new();
    for t in x.tuples(2) {
        let a = t[0];
        // x_b/x_a = 1/(coordinate a of chart b)
        let mut e = vec![0i32; n];
        e[a] = -1;
        let f = DifferentialForm::term(n, vec![a], LaurentPoly::monomial(e, -x.one()));
        values.insert(t, FormMatrix::scalar(f));
    }
    CechCochain::new(x.clone(), Coefficients::Scalar, 1, 1, values)
}

/// Elementary symmetric functions from power sums by Newton's identities,
/// `k·e_k = Σ_{i=1}^k (−1)^{i−1} e_{k−i} p_i`, in any commutative ring where
/// the needed integers are invertible.
pub fn newton_elementary<R: Ring>(params: &R::Params, p: &[R]) -> Result<Vec<R>> {
    let mut e = vec![R::from_i64(params, 1)];
    for k in 1..=p.len() {
        let mut acc = R::from_i64(params, 0);
        for i in 1..=k {
            let term = e[k - i].clone() * p[i - 1].clone();
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        let inv = R::from_i64(params, k as i64).try_inverse().ok_or_else(|| {
            Error::DivisionObstruction {
                k,
                p: R::characteristic(params).to_u64().unwrap_or(0),
            }
        })?;
        e.push(acc * inv);
    }
    Ok(e)
}

/// Independent oracle: `c_k = (−1)^k Σ_{|I|=k} det A_{I,I}`, the coefficient
/// of `t^k` in `det(1 − tA)`.
pub fn det_minor_oracle<R: Ring>(a: &Matrix<R>, k: usize) -> R {
    let n = a.rows();
    let mut acc = R::zero();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return acc;
    }
    loop {
        acc = acc + a.submatrix(&idx, &idx).det();
        // next k-subset in lex order
        let mut i = k;
        loop {
            if i == 0 {
                return if k % 2 == 1 { -acc } else { acc };
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Chern classes through power sums and Newton's identities.
pub fn char_poly_newton<S: Scalar>(e: &Arc<VectorBundle<S>>) -> Result<CharPoly<S>> {
    let x = e.scheme().clone();
    let top = CharPoly::<S>::top(&x).min(e.rank());
    let a = atiyah_cocycle(e);
    let p: Vec<CechCochain<S>> = (1..=top).map(|j| power_sum(&a, j)).collect::<Result<_>>()?;
    let mut el: Vec<CechCochain<S>> = vec![CechCochain::one(x.clone())];
    for k in 1..=top {
        let mut acc = CechCochain::zero(x.clone(), Coefficients::Scalar, k, k);
        for i in 1..=k {
            let term = el[k - i].cup(&p[i - 1])?;
            acc = if i % 2 == 1 { acc.add(&term)? } else { acc.sub(&term)? };
        }
        el.push(divide_cochain(&acc, k)?);
    }
    let mut poly = CharPoly::one(&x);
    for (k, ek) in el.into_iter().enumerate().skip(1) {
        poly.coeffs[k] = if k % 2 == 1 { ek.neg() } else { ek };
    }
    Ok(poly)
}

/// Finest common block decomposition of the transition matrices.
pub fn split_blocks<S: Scalar>(e: &VectorBundle<S>) -> Vec<Vec<usize>> {
    let r = e.rank();
    let mut parent: Vec<usize> = (0..r).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for g in e.transitions().values() {
        for i in 0..r {
            for j in 0..r {
                if i != j && !num_traits::Zero::is_zero(&g[(i, j)]) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; r];
    for i in 0..r {
        let root = find(&mut parent, i);
        match root_of[root] {
            Some(b) => blocks[b].push(i),
            None => {
                root_of[root] = Some(blocks.len());
                blocks.push(vec![i]);
            }
        }
    }
    blocks
}

/// Restrict to a block of a block-diagonal bundle.
fn block_bundle<S: Scalar>(e: &VectorBundle<S>, idx: &[usize]) -> Result<VectorBundle<S>> {
    let trans = e
        .transitions()
        .iter()
        .map(|(k, g)| (*k, g.submatrix(idx, idx)))
        .collect();
    VectorBundle::new(e.scheme().clone(), idx.len(), trans)
}

/// Whitney product over the blocks of `E`. Line-bundle blocks contribute
/// `1 + c_1 = 1 − tr A` and never divide, so this path works in every
/// characteristic when `E` splits into line bundles.
pub fn char_poly_split<S: Scalar>(e: &Arc<VectorBundle<S>>) -> Result<CharPoly<S>> {
    let x = e.scheme().clone();
    let mut acc = CharPoly::one(&x);
    for idx in split_blocks(e) {
        let b = Arc::new(block_bundle(e, &idx)?);
        let factor = if idx.len() == 1 {
            let c1 = power_sum(&atiyah_cocycle(&b), 1)?.neg();
            CharPoly::linear(c1)?
        } else {
            char_poly_newton(&b)?
        };
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// Total Chern class: the split path when `E` decomposes, Newton otherwise.
pub fn char_poly<S: Scalar>(e: &Arc<VectorBundle<S>>) -> Result<CharPoly<S>> {
    if split_blocks(e).len() > 1 {
        char_poly_split(e)
    } else {
        char_poly_newton(e)
    }
}

/// `c(E^•) = Π c(E^i)^{(−1)^i}` for a bounded complex of bundles.
pub fn char_poly_complex<S: Scalar>(terms: &[(i64, Arc<VectorBundle<S>>)]) -> Result<CharPoly<S>> {
    let first = terms
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty complex".into()))?;
    let mut acc = CharPoly::one(first.1.scheme());
    for (deg, e) in terms {
        let c = char_poly(e)?;
        acc = acc.mul(&if deg.rem_euclid(2) == 1 { c.inverse()? } else { c })?;
    }
    Ok(acc)
}

/// Does `c(E_1 ⊕ E_2) = c(E_1)·c(E_2)` hold classwise, each side through the
/// Newton path?
pub fn whitney_check<S: Scalar>(e1: &Arc<VectorBundle<S>>, e2: &Arc<VectorBundle<S>>) -> Result<bool> {
    let sum = Arc::new(e1.direct_sum(e2)?);
    let lhs = char_poly_newton(&sum)?;
    let rhs = char_poly_newton(e1)?.mul(&char_poly_newton(e2)?)?;
    lhs.class_equal(&rhs)
}

/// Integer coordinates (symmetric lift) of the Chern classes on `h^k`.
pub fn chern_numbers<S: Scalar>(c: &CharPoly<S>) -> Result<Vec<BigInt>> {
    c.coordinates_on_h()?
        .into_iter()
        .map(|s| {
            s.to_bigint()
                .ok_or_else(|| Error::InvalidArgument(format!("coordinate {s} is not integral")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Zn;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn c1_of_line_bundles_on_p1() {
        let x = Arc::new(CoveredScheme::<Q>::projective((), 1).unwrap());
        for d in -3..=3 {
            let l = Arc::new(VectorBundle::line_bundle_o(x.clone(), d).unwrap());
            let c = char_poly(&l).unwrap();
            assert_eq!(c.coordinates_on_h().unwrap(), vec![q(1), q(d)]);
        }
    }

    #[test]
    fn newton_matches_split_on_p2() {
        let x = Arc::new(CoveredScheme::<Zn>::projective(5, 2).unwrap());
        let o = |d| Arc::new(VectorBundle::line_bundle_o(x.clone(), d).unwrap());
        let e = Arc::new(o(1).direct_sum(&o(-2)).unwrap());
        let n = char_poly_newton(&e).unwrap();
        let s = char_poly_split(&e).unwrap();
        assert!(n.class_equal(&s).unwrap());
        let coords = n.coordinates_on_h().unwrap();
        assert_eq!(coords, vec![Zn::new(1, 5), Zn::new(-1, 5), Zn::new(-2, 5)]);
    }

    #[test]
    fn division_obstruction_in_small_characteristic() {
        let x = Arc::new(CoveredScheme::<Zn>::projective(2, 2).unwrap());
        let o = |d| Arc::new(VectorBundle::line_bundle_o(x.clone(), d).unwrap());
        let e = Arc::new(o(1).direct_sum(&o(1)).unwrap());
        assert!(matches!(
            char_poly_newton(&e),
            Err(Error::DivisionObstruction { k: 2, p: 2 })
        ));
        // the split path needs no division
        let s = char_poly(&e).unwrap();
        assert_eq!(s.coordinates_on_h().unwrap(), vec![Zn::new(1, 2), Zn::new(0, 2), Zn::new(1, 2)]);
    }

    #[test]
    fn conventions_agree() {
        let x = Arc::new(CoveredScheme::<Q>::projective((), 1).unwrap());
        let l = Arc::new(VectorBundle::line_bundle_o(x.clone(), 2).unwrap());
        let a = atiyah_cocycle_with(&l, AtiyahConvention::Left);
        let b = atiyah_cocycle_with(&l, AtiyahConvention::Right);
        assert!(class_equal(&power_sum(&a, 1).unwrap(), &power_sum(&b, 1).unwrap()).unwrap());
    }

    #[test]
    fn minors_match_newton_symbolically() {
        // generic 3x3 matrix over Q[a_11..a_33]
        let params = ((), 9);
        let a = Matrix::from_vec(3, 3, (0..9).map(|i| LaurentPoly::<Q>::var(&(), 9, i)).collect());
        let mut pw = a.clone();
        let mut p = vec![pw.trace()];
        for _ in 1..3 {
            pw = pw.mul(&a);
            p.push(pw.trace());
        }
        let e = newton_elementary(&params, &p).unwrap();
        for k in 0..=3 {
            let ck = if k % 2 == 1 { -e[k].clone() } else { e[k].clone() };
            assert_eq!(ck, det_minor_oracle(&a, k), "c_{k}");
        }
    }

    #[test]
    fn inverse_of_total_class() {
        let x = Arc::new(CoveredScheme::<Q>::projective((), 2).unwrap());
        let l = Arc::new(VectorBundle::line_bundle_o(x.clone(), 3).unwrap());
        let c = char_poly(&l).unwrap();
        let inv = c.inverse().unwrap();
        assert_eq!(inv.coordinates_on_h().unwrap(), vec![q(1), q(-3), q(9)]);
        assert!(c.mul(&inv).unwrap().class_equal(&CharPoly::one(&x)).unwrap());
    }
}
