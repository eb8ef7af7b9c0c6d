mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use detchern::cech::{class_equal, is_coboundary, CechCochain, Coefficients, CoveredScheme, FormMatrix, VectorBundle};
use detchern::charclass::{atiyah_cocycle, hyperplane_class, power_sum};
use detchern::homcore::{homology, power_functor, PowerFunctor};
use detchern::{DifferentialForm, DividedPowerSeries, Fp, Integer, LaurentPoly, Matrix, Rational, Ring};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ring_axioms<R: Ring>(a: R, b: R, c: R) {
    assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
    assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
    assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
    assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
    assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
    assert_eq!(a.clone() - a.clone(), R::zero());
    assert_eq!(a.clone() * R::one(), a);
}

fn laurent(seed: u64, p: u64) -> LaurentPoly<Fp> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = LaurentPoly::zero_in(2);
    for _ in 0..rng.gen_range(0..4) {
        let e = vec![rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
        f.add_term(e, Fp::new(rng.gen_range(0..p as i64), p));
    }
    f
}

/// A random scalar `(q, k)` cochain on `X` with regular monomial values.
fn random_cochain(x: &Arc<CoveredScheme<Rational>>, q: usize, k: usize, rng: &mut ChaCha8Rng) -> CechCochain<Rational> {
    let n = x.dim();
    let mut values = BTreeMap::new();
    for t in x.tuples(q + 1) {
        let inv = x.tuple_inverted(&t);
        let mut w = DifferentialForm::zero(n, k);
        for _ in 0..2 {
            let e: Vec<i32> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            if !x.is_regular_exponent(&inv, &e) {
                continue;
            }
            let mut idx: Vec<usize> = (0..n).collect();
            while idx.len() > k {
                idx.remove(rng.gen_range(0..idx.len()));
            }
            let c = Rational::from_integer(rng.gen_range(-3..=3).into());
            w = w.add(&DifferentialForm::term(n, idx, LaurentPoly::monomial(e, c)));
        }
        values.insert(t, FormMatrix::scalar(w));
    }
    CechCochain::new(x.clone(), Coefficients::Scalar, q, k, values).unwrap()
}

fn p2() -> Arc<CoveredScheme<Rational>> {
    Arc::new(CoveredScheme::projective((), 2).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn zn_ring_axioms(a in any::<i64>(), b in any::<i64>(), c in any::<i64>(), pi in 0usize..4) {
        let p = [2u64, 3, 5, 9][pi];
        ring_axioms(Fp::new(a, p), Fp::new(b, p), Fp::new(c, p));
    }

    #[test]
    fn rational_ring_axioms(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20) {
        let x = Rational::new(a.into(), b.into());
        let y = Rational::new(c.into(), d.into());
        ring_axioms(x.clone(), y.clone(), x * y);
    }

    #[test]
    fn laurent_ring_axioms(s in any::<u64>()) {
        ring_axioms(laurent(s, 5), laurent(s ^ 1, 5), laurent(s ^ 2, 5));
    }

    #[test]
    fn delta_squared_is_zero(s in any::<u64>(), q in 0usize..2, k in 0usize..3) {
        let x = p2();
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let c = random_cochain(&x, q, k, &mut rng);
        prop_assert!(c.differential().differential().is_zero());
        prop_assert!(c.exterior_d().unwrap().exterior_d().unwrap().is_zero());
    }

    #[test]
    fn cup_descends_to_cohomology(s in any::<u64>()) {
        let x = p2();
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let h = hyperplane_class(&x).unwrap();
        let b = random_cochain(&x, 0, 1, &mut rng).differential();
        prop_assert!(is_coboundary(&h.cup(&b).unwrap()).unwrap());
        prop_assert!(is_coboundary(&b.cup(&h).unwrap()).unwrap());
    }

    #[test]
    fn graded_commutativity_in_cohomology(m in -3i64..=3, d in -3i64..=3) {
        let x = p2();
        let a = h_times(&x, m);
        let l = Arc::new(VectorBundle::line_bundle_o(x.clone(), d).unwrap());
        let b = power_sum(&atiyah_cocycle(&l), 1).unwrap();
        prop_assert!(class_equal(&a.cup(&b).unwrap(), &b.cup(&a).unwrap()).unwrap());
    }

    #[test]
    fn dp_mul_is_commutative_and_associative(s in any::<u64>(), pi in 0usize..3) {
        let p = [2u64, 3, 5][pi];
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut series = || {
            let c: Vec<Fp> = (0..5).map(|_| Fp::new(rng.gen_range(0..p as i64), p)).collect();
            DividedPowerSeries::new(p, c)
        };
        let (a, b, c) = (series(), series(), series());
        prop_assert_eq!(a.dp_mul(&b).unwrap(), b.dp_mul(&a).unwrap());
        prop_assert_eq!(
            a.dp_mul(&b).unwrap().dp_mul(&c).unwrap(),
            a.dp_mul(&b.dp_mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn homology_is_basis_independent(s in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let c = common::random_complex(&mut rng);
        let p: Vec<Matrix<Integer>> = (0..3).map(|k| common::unimodular(&mut rng, c.rank(k))).collect();
        let d = c.change_basis(&p).unwrap();
        let (hc, hd) = (homology(&c), homology(&d));
        for k in 0..3 {
            prop_assert_eq!((hc.rank(k), hc.torsion(k)), (hd.rank(k), hd.torsion(k)));
        }
    }

    #[test]
    fn power_functors_are_functorial(s in any::<u64>(), fi in 0usize..4, p in 0usize..4) {
        let functor = [PowerFunctor::Sym, PowerFunctor::Wedge, PowerFunctor::Gamma, PowerFunctor::Tensor][fi];
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut mat = |r: usize, c: usize| {
            let mut m = Matrix::<Integer>::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    m[(i, j)] = Integer::from(rng.gen_range(-2..=2));
                }
            }
            m
        };
        let (a, b) = (mat(2, 3), mat(3, 2));
        let lhs = power_functor(functor, p, &a.mul(&b)).1;
        let rhs = power_functor(functor, p, &a).1.mul(&power_functor(functor, p, &b).1);
        prop_assert_eq!(lhs, rhs);
    }
}

fn h_times(x: &Arc<CoveredScheme<Rational>>, m: i64) -> CechCochain<Rational> {
    hyperplane_class(x).unwrap().scale_i64(m)
}
