use std::sync::Arc;

use detchern::cech::{CoveredScheme, FnMatrix, VectorBundle};
use detchern::charclass::*;
use detchern::{Error, Fp, LaurentPoly, Matrix, RatPoly, Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn o<S: Scalar>(x: &Arc<CoveredScheme<S>>, d: i64) -> VectorBundle<S> {
    VectorBundle::line_bundle_o(x.clone(), d).unwrap()
}

#[test]
fn c1_is_d_times_h() {
    for n in [1, 2] {
        let xq = Arc::new(CoveredScheme::<Rational>::projective((), n).unwrap());
        let xf = Arc::new(CoveredScheme::<Fp>::projective(5, n).unwrap());
        for d in -3..=3 {
            let c = char_poly(&Arc::new(o(&xq, d))).unwrap().coordinates_on_h().unwrap();
            assert_eq!(c[1], q(d));
            let c = char_poly(&Arc::new(o(&xf, d))).unwrap().coordinates_on_h().unwrap();
            assert_eq!(c[1], Fp::new(d, 5));
        }
    }
}

#[test]
fn c2_of_split_rank_two_on_p2() {
    let xq = Arc::new(CoveredScheme::<Rational>::projective((), 2).unwrap());
    let xf = Arc::new(CoveredScheme::<Fp>::projective(5, 2).unwrap());
    for a in -2..=2 {
        for b in -2..=2 {
            let e = Arc::new(o(&xq, a).direct_sum(&o(&xq, b)).unwrap());
            let c = char_poly_newton(&e).unwrap().coordinates_on_h().unwrap();
            assert_eq!(c, vec![q(1), q(a + b), q(a * b)]);
            let e = Arc::new(o(&xf, a).direct_sum(&o(&xf, b)).unwrap());
            let c = char_poly_newton(&e).unwrap().coordinates_on_h().unwrap();
            assert_eq!(c, vec![Fp::new(1, 5), Fp::new(a + b, 5), Fp::new(a * b, 5)]);
        }
    }
}

#[test]
fn whitney_grid_on_p2() {
    let x = Arc::new(CoveredScheme::<Rational>::projective((), 2).unwrap());
    for a in -2..=2 {
        for b in -2..=2 {
            assert!(whitney_check(&Arc::new(o(&x, a)), &Arc::new(o(&x, b))).unwrap(), "a={a} b={b}");
        }
    }
}

#[test]
fn newton_obstruction_and_split_remedy() {
    let x = Arc::new(CoveredScheme::<Fp>::projective(2, 2).unwrap());
    // c_3 lies above the dimension, so the obstruction appears at k = 2 = p
    let e = Arc::new(
        o(&x, 1)
            .direct_sum(&o(&x, 1))
            .unwrap()
            .direct_sum(&o(&x, 2))
            .unwrap(),
    );
    assert!(matches!(char_poly_newton(&e), Err(Error::DivisionObstruction { k: 2, p: 2 })));
    let c = char_poly(&e).unwrap().coordinates_on_h().unwrap();
    assert_eq!(c, vec![Fp::new(1, 2), Fp::new(0, 2), Fp::new(1, 2)]);
}

/// A random unipotent frame change `[[1, f], [0, 1]]` or its transpose with
/// `f` a polynomial on the chart.
fn random_frame(rng: &mut ChaCha8Rng, n: usize) -> FnMatrix<Rational> {
    let mut f = RatPoly::zero_in(n);
    for _ in 0..2 {
        let e: Vec<i32> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
        f.add_term(e, q(rng.gen_range(-3..=3)));
    }
    let one = RatPoly::constant(n, q(1));
    let zero = RatPoly::zero_in(n);
    if rng.gen_bool(0.5) {
        Matrix::from_vec(2, 2, vec![one.clone(), f, zero, one])
    } else {
        Matrix::from_vec(2, 2, vec![one.clone(), zero, f, one])
    }
}

#[test]
fn trivialization_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let x = Arc::new(CoveredScheme::<Rational>::projective((), 2).unwrap());
    let e = o(&x, 1).direct_sum(&o(&x, -1)).unwrap();
    let base = char_poly_newton(&Arc::new(e.clone())).unwrap();
    for _ in 0..5 {
        let h: Vec<_> = (0..3).map(|_| random_frame(&mut rng, 2)).collect();
        let e2 = Arc::new(e.retrivialize(&h).unwrap());
        let c = char_poly_newton(&e2).unwrap();
        assert!(c.class_equal(&base).unwrap());
        assert_ne!(e2.transitions(), e.transitions());
        assert!(atiyah_cocycle(&e2).differential().is_zero());
    }
}

#[test]
fn newton_reproduces_displayed_formulas() {
    // Q[p1, p2, p3]
    let params = ((), 3);
    let p: Vec<RatPoly> = (0..3).map(|i| LaurentPoly::var(&(), 3, i)).collect();
    let e = newton_elementary(&params, &p).unwrap();
    let (p1, p2, p3) = (p[0].clone(), p[1].clone(), p[2].clone());
    let half = RatPoly::constant(3, Rational::new(1.into(), 2.into()));
    let sixth = RatPoly::constant(3, Rational::new(1.into(), 6.into()));
    let k = |n: i64| RatPoly::constant(3, q(n));
    assert_eq!(e[2], half * (p1.clone() * p1.clone() - p2.clone()));
    let display = sixth
        * (k(2) * p3 + p1.clone() * p1.clone() * p1.clone() - k(3) * p2 * p1);
    assert_eq!(e[3], display);
}

#[test]
fn minors_agree_with_newton_on_random_symbolic_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let params = ((), 4);
    for _ in 0..5 {
        // entries are random linear forms in four symbols
        let entries: Vec<RatPoly> = (0..9)
            .map(|_| {
                let mut f = RatPoly::zero_in(4);
                for i in 0..4 {
                    let mut e = vec![0; 4];
                    e[i] = 1;
                    f.add_term(e, q(rng.gen_range(-2..=2)));
                }
                f
            })
            .collect();
        let a = Matrix::from_vec(3, 3, entries);
        let mut pw = a.clone();
        let mut p = vec![pw.trace()];
        for _ in 1..3 {
            pw = pw.mul(&a);
            p.push(pw.trace());
        }
        let e = newton_elementary(&params, &p).unwrap();
        for k in 0..=3 {
            let ck = if k % 2 == 1 { -e[k].clone() } else { e[k].clone() };
            assert_eq!(ck, det_minor_oracle(&a, k));
        }
    }
}
