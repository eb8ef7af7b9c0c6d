#![allow(dead_code)]

use detchern::homcore::ChainComplex;
use detchern::{Integer, Matrix};
use rand::Rng;

/// A random complex `C_2 → C_1 → C_0` over ℤ: `C_1 = U ⊕ V`, `d_2` lands in
/// `U` and `d_1` kills `U`, then everything is scrambled by unimodular maps.
pub fn random_complex(rng: &mut impl Rng) -> ChainComplex<Integer> {
    let (r0, u, v, r2) = (rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(0..3));
    let r1 = u + v;
    let mut d1 = Matrix::<Integer>::zeros(r0, r1);
    for i in 0..r0 {
        for j in u..r1 {
            d1[(i, j)] = Integer::from(rng.gen_range(-3..=3));
        }
    }
    let mut d2 = Matrix::<Integer>::zeros(r1, r2);
    for i in 0..u {
        for j in 0..r2 {
            d2[(i, j)] = Integer::from(rng.gen_range(-3..=3));
        }
    }
    let c = ChainComplex::new((), 0, vec![r0, r1, r2], vec![d1, d2]).unwrap();
    let p: Vec<Matrix<Integer>> = [r0, r1, r2].iter().map(|&n| unimodular(rng, n)).collect();
    c.change_basis(&p).unwrap()
}

pub fn unimodular(rng: &mut impl Rng, n: usize) -> Matrix<Integer> {
    let mut m = Matrix::<Integer>::identity(&(), n);
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let k = Integer::from(rng.gen_range(-2..=2));
            for c in 0..n {
                let add = m[(j, c)].clone() * k.clone();
                m[(i, c)] += add;
            }
        }
    }
    m
}

