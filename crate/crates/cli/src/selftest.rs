//! Seeded property suites behind `selftest`.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use detchern::cech::{de_rham_class_equal, CoveredScheme, VectorBundle};
use detchern::charclass::{char_poly, char_poly_newton, whitney_check};
use detchern::crystalline::{crystal_obstruction_line, dp_char_poly, random_lift_perturbation, ChartLift};
use detchern::derived::{verify_decalage, DecalageGuard, DecalageKind};
use detchern::{Error, Fp, Integer, LaurentPoly, Matrix, Rational, Result, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Decalage,
    Hodge,
    Crystalline,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decalage" => Ok(Suite::Decalage),
            "hodge" => Ok(Suite::Hodge),
            "crystalline" => Ok(Suite::Crystalline),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidArgument(format!(
                "unknown suite {s:?}; expected decalage, hodge, crystalline or all"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Property {
    pub suite: &'static str,
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Property {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A corrupted build: every computed quantity is nudged before comparison.
#[derive(Clone, Copy, Debug, Default)]
pub struct Fault(pub bool);

impl Fault {
    fn nudge(self, v: usize) -> usize {
        v + usize::from(self.0)
    }

    fn shift(self, d: i64) -> i64 {
        d + i64::from(self.0)
    }
}

struct Collector {
    suite: &'static str,
    out: Vec<Property>,
}

impl Collector {
    fn run(&mut self, name: impl Into<String>, cases: impl FnOnce(&mut Vec<String>) -> Result<usize>) {
        let mut failures = Vec::new();
        let count = match cases(&mut failures) {
            Ok(n) => n,
            Err(e) => {
                failures.push(format!("error: {e}"));
                0
            }
        };
        self.out.push(Property {
            suite: self.suite,
            name: name.into(),
            cases: count,
            failures,
        });
    }
}

pub fn run(suite: Suite, seed: u64, fault: Fault) -> Vec<Property> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Decalage | Suite::All) {
        out.extend(decalage(fault));
    }
    if matches!(suite, Suite::Hodge | Suite::All) {
        out.extend(hodge(seed, fault));
    }
    if matches!(suite, Suite::Crystalline | Suite::All) {
        out.extend(crystalline(seed, fault));
    }
    out
}

fn choose(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn decalage_grid<S: Scalar>(params: S::Params, fault: Fault, failures: &mut Vec<String>) -> Result<usize> {
    let mut cases = 0;
    for r in 1..=3 {
        for p in 1..=3 {
            for kind in DecalageKind::ALL {
                let rep = verify_decalage::<S>(&params, kind, r, p, DecalageGuard::default())?;
                let (deg, rank) = match kind {
                    DecalageKind::SymShift1 => (p, choose(r, p)),
                    DecalageKind::WedgeShift1 => (p, choose(r + p - 1, p)),
                    DecalageKind::SymShift2 => (2 * p, choose(r + p - 1, p)),
                };
                let got = fault.nudge(rep.homology.rank(deg as i64));
                if !rep.holds || got != rank {
                    failures.push(rep.to_string());
                }
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn decalage(fault: Fault) -> Vec<Property> {
    let mut c = Collector {
        suite: "decalage",
        out: Vec::new(),
    };
    c.run("décalage identities over Z, r ≤ 3, p ≤ 3", |f| decalage_grid::<Integer>((), fault, f));
    c.run("décalage identities over F2", |f| decalage_grid::<Fp>(2, fault, f));
    c.run("décalage identities over F3", |f| decalage_grid::<Fp>(3, fault, f));
    c.out
}

fn c1_grid<S: Scalar>(params: S::Params, int: impl Fn(i64) -> S, fault: Fault, failures: &mut Vec<String>) -> Result<usize> {
    let mut cases = 0;
    for n in [1, 2] {
        let x = Arc::new(CoveredScheme::<S>::projective(params.clone(), n)?);
        for d in -3..=3 {
            let l = Arc::new(VectorBundle::line_bundle_o(x.clone(), fault.shift(d))?);
            let c = char_poly(&l)?.coordinates_on_h()?;
            if c[1] != int(d) {
                failures.push(format!("c_1(O({d})) on P{n} is {}·h", c[1]));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn whitney_grid<S: Scalar>(params: S::Params, int: impl Fn(i64) -> S, fault: Fault, failures: &mut Vec<String>) -> Result<usize> {
    let x = Arc::new(CoveredScheme::<S>::projective(params, 2)?);
    let o = |d| VectorBundle::line_bundle_o(x.clone(), d).map(Arc::new);
    let mut cases = 0;
    for a in -2..=2 {
        for b in -2..=2 {
            let e = Arc::new(o(a)?.direct_sum(&*o(fault.shift(b))?)?);
            let c = char_poly_newton(&e)?.coordinates_on_h()?;
            if c[2] != int(a * b) {
                failures.push(format!("c_2(O({a})+O({b})) is {}·h²", c[2]));
            }
            if !whitney_check(&o(a)?, &o(b)?)? {
                failures.push(format!("Whitney fails for O({a}), O({b})"));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn random_frame(rng: &mut ChaCha8Rng, n: usize) -> Matrix<LaurentPoly<Rational>> {
    let q = |v: i64| Rational::from_integer(v.into());
    let mut f = LaurentPoly::zero_in(n);
    for _ in 0..2 {
        let e: Vec<i32> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
        f.add_term(e, q(rng.gen_range(-3..=3)));
    }
    let one = LaurentPoly::constant(n, q(1));
    let zero = LaurentPoly::zero_in(n);
    if rng.gen_bool(0.5) {
        Matrix::from_vec(2, 2, vec![one.clone(), f, zero, one])
    } else {
        Matrix::from_vec(2, 2, vec![one.clone(), zero, f, one])
    }
}

fn hodge(seed: u64, fault: Fault) -> Vec<Property> {
    let mut c = Collector {
        suite: "hodge",
        out: Vec::new(),
    };
    let q = |v: i64| Rational::from_integer(v.into());
    c.run("c_1(O(d)) = d·h on P1, P2 over Q", |f| c1_grid::<Rational>((), q, fault, f));
    c.run("c_1(O(d)) = d·h on P1, P2 over F5", |f| c1_grid::<Fp>(5, |v| Fp::new(v, 5), fault, f));
    c.run("c_2 = ab·h² and Whitney on P2 over Q", |f| whitney_grid::<Rational>((), q, fault, f));
    c.run("c_2 = ab·h² and Whitney on P2 over F5", |f| whitney_grid::<Fp>(5, |v| Fp::new(v, 5), fault, f));
    c.run("trivialization independence (100 random frames)", |f| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Arc::new(CoveredScheme::<Rational>::projective((), 2)?);
        for i in 0..100 {
            let (a, b) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            let e = VectorBundle::line_bundle_o(x.clone(), a)?
                .direct_sum(&VectorBundle::line_bundle_o(x.clone(), b)?)?;
            let h: Vec<_> = (0..3).map(|_| random_frame(&mut rng, 2)).collect();
            let moved = Arc::new(e.retrivialize(&h)?);
            let reference = if fault.0 {
                VectorBundle::line_bundle_o(x.clone(), a + 1)?.direct_sum(&VectorBundle::line_bundle_o(x.clone(), b)?)?
            } else {
                e
            };
            if !char_poly_newton(&moved)?.class_equal(&char_poly_newton(&Arc::new(reference))?)? {
                f.push(format!("frame change #{i} (seed {seed}) alters c(O({a})+O({b}))"));
            }
        }
        Ok(100)
    });
    c.out
}

fn crystalline(seed: u64, fault: Fault) -> Vec<Property> {
    let mut c = Collector {
        suite: "crystalline",
        out: Vec::new(),
    };
    c.run("obstruction class = c_1^dR for p ∈ {2,3,5}, |d| ≤ 3, P1 and P2", |f| {
        let mut cases = 0;
        for n in [1, 2] {
            for p in [2u64, 3, 5] {
                let x = Arc::new(CoveredScheme::<Fp>::projective(p, n)?);
                let lift = ChartLift::canonical(&x)?;
                for d in -3..=3 {
                    let l = Arc::new(VectorBundle::line_bundle_o(x.clone(), d)?);
                    let other = Arc::new(VectorBundle::line_bundle_o(x.clone(), fault.shift(d))?);
                    let ob = crystal_obstruction_line(&l, &lift, None)?;
                    if !ob.de_rham_equal(&char_poly(&other)?.c(1))? {
                        f.push(format!("O({d}) on P{n} over F{p}"));
                    }
                    cases += 1;
                }
            }
        }
        Ok(cases)
    });
    c.run("multiplicativity under tensor on P1, P2 over F5", |f| {
        let mut cases = 0;
        for n in [1, 2] {
            let x = Arc::new(CoveredScheme::<Fp>::projective(5, n)?);
            let lift = ChartLift::canonical(&x)?;
            let ob = |d| -> Result<_> {
                crystal_obstruction_line(&Arc::new(VectorBundle::line_bundle_o(x.clone(), d)?), &lift, None)
            };
            for a in -3..=3 {
                for b in -3..=3 {
                    let sum = ob(a)?.de_rham.add(&ob(b)?.de_rham)?;
                    if !de_rham_class_equal(&ob(fault.shift(a + b))?.de_rham, &sum)? {
                        f.push(format!("O({a}) ⊗ O({b}) on P{n}"));
                    }
                    cases += 1;
                }
            }
        }
        Ok(cases)
    });
    c.run("lift independence (10 random lifts per case)", |f| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cases = 0;
        for n in [1, 2] {
            for p in [2u64, 3, 5] {
                let x = Arc::new(CoveredScheme::<Fp>::projective(p, n)?);
                let l = Arc::new(VectorBundle::line_bundle_o(x.clone(), 1)?);
                let reference = Arc::new(VectorBundle::line_bundle_o(x.clone(), fault.shift(1))?);
                let base = crystal_obstruction_line(&reference, &ChartLift::canonical(&x)?, None)?;
                for i in 0..10 {
                    let lift = ChartLift::perturbed(&x, &mut rng, 3)?;
                    let pert: BTreeMap<_, _> = l
                        .transitions()
                        .keys()
                        .map(|&k| (k, random_lift_perturbation(&mut rng, n, p, 3)))
                        .collect();
                    let ob = crystal_obstruction_line(&l, &lift, Some(&pert))?;
                    if !de_rham_class_equal(&ob.de_rham, &base.de_rham)? {
                        f.push(format!("lift #{i} on P{n} over F{p} (seed {seed})"));
                    }
                    cases += 1;
                }
            }
        }
        Ok(cases)
    });
    c.run("dp_char_poly = (−1)^k k!·e_k, r ≤ 4, over Z and F2, F3, F5", |f| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cases = 0;
        for r in 1..=4usize {
            let ints: Vec<i64> = (0..r).map(|_| rng.gen_range(-4..=4)).collect();
            // e_k by the prefix recurrence
            let mut e = vec![Integer::from(1)];
            for &a in &ints {
                let mut next = e.clone();
                next.push(Integer::from(0));
                for k in 1..next.len() {
                    next[k] += e[k - 1].clone() * a;
                }
                e = next;
            }
            let want: Vec<Integer> = (0..=r)
                .map(|k| {
                    let fact: Integer = (1..=k as i64).map(Integer::from).product();
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    e[k].clone() * fact * sign + Integer::from(i64::from(fault.0 && k == r))
                })
                .collect();
            let zs: Vec<Integer> = ints.iter().map(|&v| Integer::from(v)).collect();
            let s = dp_char_poly(&(), &zs, r)?;
            if s.coeffs() != &want[..] {
                f.push(format!("classes {ints:?} over Z"));
            }
            cases += 1;
            for p in [2u64, 3, 5] {
                let fs: Vec<Fp> = ints.iter().map(|&v| Fp::new(v, p)).collect();
                let s = dp_char_poly(&p, &fs, r)?;
                let reduced: Vec<Fp> = want
                    .iter()
                    .map(|w| Fp::new(i64::try_from(w % Integer::from(p)).expect("small"), p))
                    .collect();
                if s.coeffs() != &reduced[..] {
                    f.push(format!("classes {ints:?} over F{p}"));
                }
                cases += 1;
            }
        }
        Ok(cases)
    });
    c.out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn crystalline_suite_passes_and_detects_faults() {
        assert!(run(Suite::Crystalline, 1, Fault(false)).iter().all(Property::passed));
        assert!(run(Suite::Crystalline, 1, Fault(true)).iter().all(|p| !p.passed()));
    }
}
