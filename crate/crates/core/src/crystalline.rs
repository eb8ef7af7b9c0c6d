//! Frobenius pullbacks, Teichmüller lifts and the mod-p de Rham obstruction
//! class of a line bundle.
//!
//! For a line bundle with transitions `f_ab` over 𝔽_p, the Frobenius
//! pullback has transitions `f_ab^p`, whose differentials vanish, so the
//! trivial connections glue. Lifting to ℤ/p², the Teichmüller transitions
//! `G_ab = f̃_ab^p` do not depend on the lift `f̃` mod p², and the defect of
//! the trivial connections, `−G^{-1}dG`, is divisible by `p`. Its quotient is
//! a closed `(1,1)` cocycle over 𝔽_p whose de Rham class is `c_1`.

use std::collections::BTreeMap;
use std::sync::Arc;


use crate::cech::{
    class_coordinates, de_rham_class_equal, CechCochain, Coefficients, CoveredScheme, FormMatrix,
    TotalCochain, VectorBundle,
};
use crate::charclass::hyperplane_class;
use crate::error::{Error, Result};
use crate::rings::{is_prime, DifferentialForm, DividedPowerSeries, LaurentPoly, Ring, Zn};

/// The prime of an 𝔽_p scheme, or `NotFp`.
pub fn prime_of(x: &CoveredScheme<Zn>) -> Result<u64> {
    let p = *x.params();
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotFp)
    }
}

/// `F^*E`: every transition entry raised to the `p`-th power coefficientwise,
/// i.e. exponents scaled by `p` (coefficients in 𝔽_p are fixed by Frobenius).
pub fn frobenius_pullback(e: &VectorBundle<Zn>) -> Result<VectorBundle<Zn>> {
    let p = prime_of(e.scheme())?;
    let p32 = i32::try_from(p).map_err(|_| Error::InvalidArgument(format!("prime {p} too large")))?;
    let trans = e
        .transitions()
        .iter()
        .map(|(k, g)| (*k, g.map(|f| f.scale_exponents(p32))))
        .collect();
    VectorBundle::new(e.scheme().clone(), e.rank(), trans)
}

/// Do the trivial connections `d` on the charts glue, i.e. is `dg_ab = 0`
/// for every transition entry?
pub fn canonical_connection_check(e: &VectorBundle<Zn>) -> Result<bool> {
    let x = e.scheme();
    prime_of(x)?;
    Ok(e.transitions().values().all(|g| {
        g.data()
            .iter()
            .all(|f| DifferentialForm::function(f.clone()).d(x.params()).is_zero())
    }))
}

/// A lift of the charts to ℤ/p²: chart `a` gets coordinates
/// `y_{a,i} = x_{a,i}·(1 + p·h_{a,i}(x_a))`. The canonical lift has `h = 0`.
#[derive(Clone, Debug)]
pub struct ChartLift {
    p: u64,
    coords: Vec<Vec<LaurentPoly<Zn>>>,
}

impl ChartLift {
    pub fn canonical(x: &CoveredScheme<Zn>) -> Result<Self> {
        let p = prime_of(x)?;
        let n = x.dim();
        let coords = (0..x.num_charts())
            .map(|_| (0..n).map(|i| LaurentPoly::var(&(p * p), n, i)).collect())
            .collect();
        Ok(ChartLift { p, coords })
    }

    /// Random `h_{a,i}`: polynomials with up to `terms` monomials of degree
    /// at most 2 in the chart's own coordinates.
    pub fn perturbed(x: &CoveredScheme<Zn>, rng: &mut impl rand::Rng, terms: usize) -> Result<Self> {
        let mut lift = Self::canonical(x)?;
        let p = lift.p;
        let n = x.dim();
        for chart in &mut lift.coords {
            for (i, y) in chart.iter_mut().enumerate() {
                let h = random_poly(rng, n, p, terms);
                let one = LaurentPoly::constant(n, Zn::new(1, p * p));
                let unit = one + h.scale(&Zn::new(p as i64, p * p));
                *y = LaurentPoly::var(&(p * p), n, i) * unit;
            }
        }
        Ok(lift)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
}

fn random_poly(rng: &mut impl rand::Rng, n: usize, p: u64, terms: usize) -> LaurentPoly<Zn> {
    let mut h = LaurentPoly::zero_in(n);
    for _ in 0..terms {
        let e: Vec<i32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        let c = rng.gen_range(0..(p * p)) as i64;
        h.add_term(e, Zn::new(c, p * p));
    }
    h
}

/// Random perturbation `p·g` of a lift, with `g` regular on the chart.
pub fn random_lift_perturbation(
    rng: &mut impl rand::Rng,
    n: usize,
    p: u64,
    terms: usize,
) -> LaurentPoly<Zn> {
    random_poly(rng, n, p, terms).scale(&Zn::new(p as i64, p * p))
}

fn lift_coeffs(f: &LaurentPoly<Zn>, p: u64) -> LaurentPoly<Zn> {
    f.map_coeffs(|c| Zn::new(c.value(), p * p))
}

/// `G_ab = (f̃ + δ)^p` over ℤ/p², where `f` is written in chart-`a`
/// coordinates, `f̃` lifts its coefficients in the chart lift, and `δ` is an
/// optional `p`-divisible perturbation. The result is in chart-`b`
/// coordinates.
pub fn teichmuller_transition(
    x: &CoveredScheme<Zn>,
    lift: &ChartLift,
    f: &LaurentPoly<Zn>,
    (a, b): (usize, usize),
    perturbation: Option<&LaurentPoly<Zn>>,
) -> Result<LaurentPoly<Zn>> {
    let p = lift.p;
    let n = x.dim();
    let mut ft = lift_coeffs(f, p);
    if let Some(d) = perturbation {
        if d.terms().any(|(_, c)| c.value() % p as i64 != 0) {
            return Err(Error::InvalidArgument("lift perturbation must be divisible by p".into()));
        }
        ft = ft + d.clone();
    }
    let in_lift = ft
        .substitute(&lift.coords[a])
        .ok_or_else(|| Error::NotUnit("lifted coordinate is not invertible".into()))?;
    let moved = in_lift.substitute_monomial(x.map_rows(a, b), n);
    Ok(moved.pow_n(p))
}

/// `(1/p)·ω` for a form over ℤ/p² whose coefficients are all divisible by `p`.
fn divide_by_p(w: &DifferentialForm<Zn>, p: u64) -> Result<DifferentialForm<Zn>> {
    let n = w.nvars();
    let mut out = DifferentialForm::zero(n, w.degree());
    for (i, e, c) in w.monomial_terms() {
        let v = c.value();
        if v % p as i64 != 0 {
            return Err(Error::InexactDivision(format!("coefficient {v} mod {}", p * p)));
        }
        let f = LaurentPoly::monomial(e.clone(), Zn::new(v / p as i64, p));
        out = out.add(&DifferentialForm::term(n, i.clone(), f));
    }
    Ok(out)
}

/// The obstruction class of a line bundle: the Hodge `(1,1)` cocycle
/// `−(1/p)·G^{-1}dG` and its image in the de Rham total complex.
#[derive(Clone, Debug)]
pub struct ObstructionClass {
    pub hodge: CechCochain<Zn>,
    pub de_rham: TotalCochain<Zn>,
}

impl ObstructionClass {
    /// Coordinate on `h` for projective space.
    pub fn coordinate_on_h(&self) -> Result<Zn> {
        let h = hyperplane_class(self.hodge.scheme())?;
        let c = class_coordinates(&self.hodge, &[h])?
            .ok_or_else(|| Error::InvalidArgument("class is not a multiple of h".into()))?;
        Ok(c[0].clone())
    }

    /// Same de Rham class as a given `(1,1)` Hodge cocycle with closed values?
    pub fn de_rham_equal(&self, c1: &CechCochain<Zn>) -> Result<bool> {
        de_rham_class_equal(&self.de_rham, &TotalCochain::from_hodge(c1)?)
    }
}

/// Obstruction line of a line bundle over 𝔽_p through the Teichmüller lift.
pub fn crystal_obstruction_line(
    l: &Arc<VectorBundle<Zn>>,
    lift: &ChartLift,
    perturbations: Option<&BTreeMap<(usize, usize), LaurentPoly<Zn>>>,
) -> Result<ObstructionClass> {
    let x = l.scheme().clone();
    let p = prime_of(&x)?;
    if lift.p != p {
        return Err(Error::InvalidArgument(format!("lift is for p = {}, bundle over F_{p}", lift.p)));
    }
    if l.rank() != 1 {
        return Err(Error::RankMismatch {
            expected: 1,
            got: l.rank(),
        });
    }
    let mut values = BTreeMap::new();
    for &(a, b) in l.transitions().keys() {
        let f = l.transition(a, b, a)[(0, 0)].clone();
        let g = teichmuller_transition(&x, lift, &f, (a, b), perturbations.and_then(|m| m.get(&(a, b))))?;
        let g_inv = g
            .inverse()
            .ok_or_else(|| Error::NotUnit("Teichmüller transition".into()))?;
        let dg = DifferentialForm::function(g).d(&(p * p));
        let defect = dg.mul_function(&g_inv).neg();
        let w = divide_by_p(&defect, p)?;
        if !w.d(&p).is_zero() {
            return Err(Error::InvalidArgument(format!(
                "obstruction form on ({a},{b}) is not closed"
            )));
        }
        values.insert(vec![a, b], FormMatrix::scalar(w));
    }
    let hodge = CechCochain::new(x, Coefficients::Scalar, 1, 1, values)?;
    if !hodge.differential().is_zero() {
        return Err(Error::InvalidArgument("obstruction cochain is not a cocycle".into()));
    }
    let de_rham = TotalCochain::from_hodge(&hodge)?;
    Ok(ObstructionClass { hodge, de_rham })
}

/// `Π_i (1 − a_i t)` in the divided-power basis: the coefficient of
/// `t^k/k!` is `(−1)^k k!·e_k(a)`. The truncation may not exceed the number
/// of classes.
pub fn dp_char_poly<C: Ring>(
    params: &C::Params,
    classes: &[C],
    truncation: usize,
) -> Result<DividedPowerSeries<C>> {
    if truncation > classes.len() {
        return Err(Error::InvalidArgument(format!(
            "truncation {truncation} exceeds the {} available classes",
            classes.len()
        )));
    }
    let mut acc = DividedPowerSeries::one(params.clone(), truncation);
    for a in classes {
        let mut coeffs = vec![C::from_i64(params, 0); truncation + 1];
        coeffs[0] = C::from_i64(params, 1);
        if truncation >= 1 {
            coeffs[1] = -a.clone();
        }
        acc = acc.dp_mul(&DividedPowerSeries::new(params.clone(), coeffs))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charclass::char_poly;
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p1(p: u64) -> Arc<CoveredScheme<Zn>> {
        Arc::new(CoveredScheme::projective(p, 1).unwrap())
    }

    #[test]
    fn frobenius_kills_the_differential() {
        let x = p1(5);
        let l = VectorBundle::line_bundle_o(x.clone(), 3).unwrap();
        assert!(!canonical_connection_check(&l).unwrap());
        let f = frobenius_pullback(&l).unwrap();
        assert!(canonical_connection_check(&f).unwrap());
        assert_eq!(f.transitions(), VectorBundle::line_bundle_o(x, 15).unwrap().transitions());
    }

    #[test]
    fn not_fp() {
        let x = Arc::new(CoveredScheme::<Zn>::projective(9, 1).unwrap());
        let l = VectorBundle::line_bundle_o(x, 1).unwrap();
        assert!(matches!(frobenius_pullback(&l), Err(Error::NotFp)));
    }

    #[test]
    fn obstruction_is_c1() {
        for p in [3u64, 5, 7] {
            let x = p1(p);
            let lift = ChartLift::canonical(&x).unwrap();
            for d in -3..=3i64 {
                let l = Arc::new(VectorBundle::line_bundle_o(x.clone(), d).unwrap());
                let ob = crystal_obstruction_line(&l, &lift, None).unwrap();
                assert_eq!(ob.coordinate_on_h().unwrap(), Zn::new(d, p));
                let c1 = char_poly(&l).unwrap().c(1);
                assert!(ob.de_rham_equal(&c1).unwrap());
            }
        }
    }

    #[test]
    fn independent_of_lifts() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = Arc::new(CoveredScheme::<Zn>::projective(5, 2).unwrap());
        let l = Arc::new(VectorBundle::line_bundle_o(x.clone(), 2).unwrap());
        let base = crystal_obstruction_line(&l, &ChartLift::canonical(&x).unwrap(), None).unwrap();
        for _ in 0..3 {
            let lift = ChartLift::perturbed(&x, &mut rng, 2).unwrap();
            let pert: BTreeMap<_, _> = l
                .transitions()
                .keys()
                .map(|&k| (k, random_lift_perturbation(&mut rng, 2, 5, 2)))
                .collect();
            let ob = crystal_obstruction_line(&l, &lift, Some(&pert)).unwrap();
            assert!(de_rham_class_equal(&ob.de_rham, &base.de_rham).unwrap());
        }
    }

    #[test]
    fn dp_coefficients() {
        let a: Vec<BigInt> = [2, -1, 3].iter().map(|&x| BigInt::from(x)).collect();
        let s = dp_char_poly(&(), &a, 3).unwrap();
        // e1 = 4, e2 = 1, e3 = -6
        let want: Vec<BigInt> = [1, -4, 2, 36].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(s.coeffs(), &want[..]);
        assert!(dp_char_poly(&(), &a, 4).is_err());
    }
}
