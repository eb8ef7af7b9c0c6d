mod common;

use detchern::derived::{verify_decalage, DecalageGuard, DecalageKind};
use detchern::homcore::{dold_kan_gamma, homology, normalized_chains, quasi_same};
use detchern::{Fp, Integer, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `binomial(n, k)` by Pascal's triangle.
fn choose(n: usize, k: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![1usize; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

fn decalage_grid<S: Scalar>(params: S::Params) {
    for r in 1..=3 {
        for p in 1..=3 {
            for kind in DecalageKind::ALL {
                let rep = verify_decalage::<S>(&params, kind, r, p, DecalageGuard::default()).unwrap();
                assert!(rep.holds, "{rep}");
                let (deg, rank) = match kind {
                    DecalageKind::SymShift1 => (p, choose(r, p)),
                    DecalageKind::WedgeShift1 => (p, choose(r + p - 1, p)),
                    DecalageKind::SymShift2 => (2 * p, choose(r + p - 1, p)),
                };
                assert_eq!(rep.homology.rank(deg as i64), rank, "{rep}");
            }
        }
    }
}

#[test]
fn decalage_over_z() {
    decalage_grid::<Integer>(());
}

#[test]
fn decalage_over_f2() {
    decalage_grid::<Fp>(2);
}

#[test]
fn decalage_over_f3() {
    decalage_grid::<Fp>(3);
}

#[test]
fn dold_kan_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let c = common::random_complex(&mut rng);
        let n = normalized_chains(&dold_kan_gamma(&c, 3).unwrap()).unwrap();
        assert!(quasi_same(&c, &n));
        let (hc, hn) = (homology(&c), homology(&n));
        for k in 0..=3 {
            assert_eq!(c.rank(k), n.rank(k));
            assert_eq!((hc.rank(k), hc.torsion(k)), (hn.rank(k), hn.torsion(k)));
        }
    }
}
