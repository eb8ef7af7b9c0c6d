use std::sync::Arc;

use detchern::cech::{
    cohomology_group, cohomology_report, de_rham_cohomology, is_coboundary, CechCochain, Coefficients,
    CoveredScheme, Document, SheafSpec, VectorBundle,
};
use detchern::{Fp, Integer, Rational, Scalar};

/// Number of monomials of degree `d` in `m` variables, by enumeration.
fn monomials(m: usize, d: i64) -> usize {
    if d < 0 {
        return 0;
    }
    if m == 1 {
        return 1;
    }
    (0..=d).map(|k| monomials(m - 1, d - k)).sum()
}

/// `h^q(P^n, O(d))`: sections in degree 0, Serre duality in degree n.
fn h_oracle(n: usize, q: usize, d: i64) -> usize {
    if q == 0 {
        monomials(n + 1, d)
    } else if q == n {
        monomials(n + 1, -d - n as i64 - 1)
    } else {
        0
    }
}

fn grid<S: Scalar>(params: S::Params) {
    for n in 1..=2 {
        let x = Arc::new(CoveredScheme::<S>::projective(params.clone(), n).unwrap());
        for d in -4..=4 {
            let l = Arc::new(VectorBundle::line_bundle_o(x.clone(), d).unwrap());
            let rep = cohomology_report(&x, &SheafSpec::twisted(0, l), None).unwrap();
            for q in 0..=n {
                assert_eq!(rep.rank(q as i64), h_oracle(n, q, d), "h^{q}(P{n}, O({d}))");
            }
        }
    }
}

#[test]
fn line_bundle_grid_over_q() {
    grid::<Rational>(());
}

#[test]
fn line_bundle_grid_over_f3() {
    grid::<Fp>(3);
}

#[test]
fn de_rham_betti_numbers() {
    let x = Arc::new(CoveredScheme::<Rational>::projective((), 1).unwrap());
    let r = de_rham_cohomology(&x, None).unwrap();
    assert_eq!((0..3).map(|k| r.rank(k)).collect::<Vec<_>>(), vec![1, 0, 1]);
    let x = Arc::new(CoveredScheme::<Fp>::projective(5, 2).unwrap());
    let r = de_rham_cohomology(&x, None).unwrap();
    assert_eq!((0..5).map(|k| r.rank(k)).collect::<Vec<_>>(), vec![1, 0, 1, 0, 1]);
}

#[test]
fn integral_cohomology_is_free() {
    let x = Arc::new(CoveredScheme::<Integer>::projective((), 1).unwrap());
    let l = Arc::new(VectorBundle::line_bundle_o(x.clone(), -3).unwrap());
    let g = cohomology_group(&x, &SheafSpec::twisted(0, l), 1, None).unwrap();
    assert_eq!(g.group.rank, 2);
    assert!(g.group.torsion.is_empty());
}

#[test]
fn affine_line_is_acyclic() {
    let x = Arc::new(CoveredScheme::<Rational>::affine_line(()));
    let g = cohomology_group(&x, &SheafSpec::structure_sheaf(), 1, None).unwrap();
    assert_eq!(g.group.rank, 0);
}

#[test]
fn coboundaries_are_detected() {
    let x = Arc::new(CoveredScheme::<Rational>::projective((), 1).unwrap());
    let f = CechCochain::zero(x.clone(), Coefficients::Scalar, 0, 0);
    assert!(is_coboundary(&f.differential()).unwrap());
}

#[test]
fn json_document_round_trip() {
    let src = r#"{
        "base": "F5",
        "scheme": "P1",
        "bundles": {
            "L": "O(2)",
            "E": {"rank": 1, "transitions": [{"from": 0, "to": 1, "matrix": [["z^-2"]]}]}
        }
    }"#;
    let doc = Document::from_json(src).unwrap();
    let x = doc.build_scheme::<Fp>(5).unwrap();
    let l = doc.build_bundle(&x, "L").unwrap();
    let e = doc.build_bundle(&x, "E").unwrap();
    assert_eq!(l.transitions(), e.transitions());
    assert!(Document::from_json("{\"base\": \"F4\", \"scheme\": \"P1\"}").is_err());
}

#[test]
fn base_object_form() {
    let doc = Document::from_json(r#"{"base": {"Fp": 3}, "scheme": "P2"}"#).unwrap();
    assert_eq!(doc.base, detchern::cech::Base::Fp(3));
    assert!(Document::from_json(r#"{"base": {"Fp": 9}, "scheme": "P2"}"#).is_err());
}
