use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rings::{binomial, Matrix, Ring};

/// The multilinear functors applied to free modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PowerFunctor {
    Sym,
    Wedge,
    Gamma,
    Tensor,
}

impl fmt::Display for PowerFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PowerFunctor::Sym => "Sym",
            PowerFunctor::Wedge => "Wedge",
            PowerFunctor::Gamma => "Gamma",
            PowerFunctor::Tensor => "Tensor",
        })
    }
}

impl FromStr for PowerFunctor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sym" | "s" => Ok(PowerFunctor::Sym),
            "wedge" | "lambda" | "exterior" => Ok(PowerFunctor::Wedge),
            "gamma" | "divided" => Ok(PowerFunctor::Gamma),
            "tensor" | "t" => Ok(PowerFunctor::Tensor),
            _ => Err(Error::InvalidArgument(format!("unknown functor {s:?}"))),
        }
    }
}

/// A sparse vector as `(basis index, coefficient)` pairs.
pub type SparseVec<R> = Vec<(usize, R)>;

/// Rank of `F^p` of a free module of rank `r`.
pub fn power_rank(functor: PowerFunctor, r: usize, p: usize) -> usize {
    let big = match functor {
        PowerFunctor::Sym | PowerFunctor::Gamma => {
            if r == 0 {
                return usize::from(p == 0);
            }
            binomial((r + p - 1) as u64, p as u64)
        }
        PowerFunctor::Wedge => binomial(r as u64, p as u64),
        PowerFunctor::Tensor => num_bigint::BigInt::from(r).pow(p as u32),
    };
    usize::try_from(big).expect("power rank fits in usize")
}

/// Basis of `F^p(R^r)` as index tuples in the fixed order: all tuples for
/// Tensor, nondecreasing tuples for Sym (monomials) and Gamma (orbit sums),
/// strictly increasing tuples for Wedge; lexicographic in every case.
pub fn power_basis(functor: PowerFunctor, r: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn rec(
        functor: PowerFunctor,
        r: usize,
        p: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        let start = match (functor, cur.last()) {
            (PowerFunctor::Tensor, _) | (_, None) => 0,
            (PowerFunctor::Wedge, Some(&l)) => l + 1,
            (_, Some(&l)) => l,
        };
        for i in start..r {
            cur.push(i);
            rec(functor, r, p, cur, out);
            cur.pop();
        }
    }
    rec(functor, r, p, &mut cur, &mut out);
    out
}

/// Indexed basis with reverse lookup.
#[derive(Clone, Debug)]
pub struct PowerBasis {
    pub elems: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl PowerBasis {
    pub fn new(functor: PowerFunctor, r: usize, p: usize) -> Self {
        Self::from_elems(power_basis(functor, r, p))
    }

    pub fn from_elems(elems: Vec<Vec<usize>>) -> Self {
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        PowerBasis { elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn index_of(&self, key: &[usize]) -> Option<usize> {
        self.index.get(key).copied()
    }
}

/// Distinct rearrangements of a sorted tuple.
fn distinct_permutations(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation until exhausted
    loop {
        let n = cur.len();
        if n < 2 {
            break;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

fn expand<R: Ring>(
    factors: &[&SparseVec<R>],
    monotone: bool,
    emit: &mut impl FnMut(&[usize], R),
) {
    fn rec<R: Ring>(
        factors: &[&SparseVec<R>],
        monotone: bool,
        key: &mut Vec<usize>,
        coeff: Option<R>,
        emit: &mut impl FnMut(&[usize], R),
    ) {
        let k = key.len();
        if k == factors.len() {
            emit(key, coeff.unwrap_or_else(R::one));
            return;
        }
        for (j, c) in factors[k].iter() {
            if monotone && key.last().is_some_and(|&l| l > *j) {
                continue;
            }
            key.push(*j);
            let next = match &coeff {
                None => c.clone(),
                Some(a) => a.clone() * c.clone(),
            };
            rec(factors, monotone, key, Some(next), emit);
            key.pop();
        }
    }
    rec(factors, monotone, &mut Vec::new(), None, emit);
}

/// Image of the basis element `elem` of `F^p(source)` under `F^p(f)`, where
/// `images[i]` is `f(e_i)` as a sparse vector. The result is keyed by target
/// basis tuples.
///
/// Sym and Tensor expand the product; Wedge sorts with sign and drops
/// repeated indices; Gamma sums over the orbit of `elem` and keeps the
/// coefficient of each sorted representative (restriction of `f^{⊗p}` to
/// symmetric tensors).
pub fn power_image<R: Ring>(
    functor: PowerFunctor,
    elem: &[usize],
    images: &[SparseVec<R>],
) -> BTreeMap<Vec<usize>, R> {
    let mut acc: BTreeMap<Vec<usize>, R> = BTreeMap::new();
    let mut add = |key: Vec<usize>, c: R| {
        if c.is_zero() {
            return;
        }
        match acc.remove(&key) {
            None => {
                acc.insert(key, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    acc.insert(key, s);
                }
            }
        }
    };
    match functor {
        PowerFunctor::Tensor => {
            let factors: Vec<&SparseVec<R>> = elem.iter().map(|&i| &images[i]).collect();
            expand(&factors, false, &mut |k, c| add(k.to_vec(), c));
        }
        PowerFunctor::Sym => {
            let factors: Vec<&SparseVec<R>> = elem.iter().map(|&i| &images[i]).collect();
            expand(&factors, false, &mut |k, c| {
                let mut s = k.to_vec();
                s.sort_unstable();
                add(s, c)
            });
        }
        PowerFunctor::Wedge => {
            let factors: Vec<&SparseVec<R>> = elem.iter().map(|&i| &images[i]).collect();
            expand(&factors, false, &mut |k, c| {
                let mut s = k.to_vec();
                let mut odd = false;
                for i in 0..s.len() {
                    for j in 0..s.len() - 1 - i {
                        if s[j] > s[j + 1] {
                            s.swap(j, j + 1);
                            odd = !odd;
                        }
                    }
                }
                if s.windows(2).any(|w| w[0] == w[1]) {
                    return;
                }
                add(s, if odd { -c } else { c })
            });
        }
        PowerFunctor::Gamma => {
            for t in distinct_permutations(elem) {
                let factors: Vec<&SparseVec<R>> = t.iter().map(|&i| &images[i]).collect();
                expand(&factors, true, &mut |k, c| add(k.to_vec(), c));
            }
        }
    }
    acc
}

/// Sparse columns of a dense matrix.
pub(crate) fn sparse_columns<R: Ring>(f: &Matrix<R>) -> Vec<SparseVec<R>> {
    (0..f.cols())
        .map(|j| {
            (0..f.rows())
                .filter(|&i| !f[(i, j)].is_zero())
                .map(|i| (i, f[(i, j)].clone()))
                .collect()
        })
        .collect()
}

/// `F^p(f)` for a matrix `f : R^n → R^m`, in the fixed bases of
/// [`power_basis`]; returns the rank of `F^p(R^n)` and the induced matrix.
pub fn power_functor<R: Ring>(
    functor: PowerFunctor,
    p: usize,
    f: &Matrix<R>,
) -> (usize, Matrix<R>) {
    let src = PowerBasis::new(functor, f.cols(), p);
    let dst = PowerBasis::new(functor, f.rows(), p);
    let images = sparse_columns(f);
    let mut out = Matrix::zeros(dst.len(), src.len());
    for (j, elem) in src.elems.iter().enumerate() {
        for (key, c) in power_image(functor, elem, &images) {
            let i = dst.index_of(&key).expect("image lies in the target basis");
            out[(i, j)] = c;
        }
    }
    (src.len(), out)
}

/// Checked variant taking a signed exponent.
pub fn power_functor_checked<R: Ring>(
    functor: PowerFunctor,
    p: i64,
    f: &Matrix<R>,
) -> Result<(usize, Matrix<R>)> {
    let p = usize::try_from(p)
        .map_err(|_| Error::InvalidArgument(format!("negative exponent {p}")))?;
    Ok(power_functor(functor, p, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{LaurentPoly, Zn};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    type Z = BigInt;

    fn zm(rows: &[&[i64]]) -> Matrix<Z> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Z::from(x)).collect())
                .collect(),
        )
    }

    const ALL: [PowerFunctor; 4] = [
        PowerFunctor::Sym,
        PowerFunctor::Wedge,
        PowerFunctor::Gamma,
        PowerFunctor::Tensor,
    ];

    #[test]
    fn ranks_match_formulas() {
        for r in 0..5 {
            for p in 0..4 {
                for f in ALL {
                    assert_eq!(power_basis(f, r, p).len(), power_rank(f, r, p), "{f} r={r} p={p}");
                }
            }
        }
        // Γ² of rank 2: orbit sums of e00, e01+e10, e11
        assert_eq!(power_basis(PowerFunctor::Gamma, 2, 2).len(), 3);
    }

    #[test]
    fn wedge_two_is_determinant() {
        type Q = BigRational;
        let v = |i| LaurentPoly::<Q>::var(&(), 4, i);
        let m = Matrix::from_rows(vec![vec![v(0), v(1)], vec![v(2), v(3)]]);
        let (rank, w) = power_functor(PowerFunctor::Wedge, 2, &m);
        assert_eq!(rank, 1);
        assert_eq!(w[(0, 0)], v(0) * v(3) - v(1) * v(2));
    }

    #[test]
    fn sym_two_of_identity() {
        let (_, s) = power_functor(PowerFunctor::Sym, 2, &Matrix::<Z>::identity(&(), 2));
        assert_eq!(s, Matrix::identity(&(), 3));
    }

    #[test]
    fn gamma_vs_sym_on_scalar() {
        // on rank 1, f = (a): Sym^p and Γ^p both give a^p
        let (_, g) = power_functor(PowerFunctor::Gamma, 3, &zm(&[&[2]]));
        assert_eq!(g, zm(&[&[8]]));
        // Γ²([[1,1],[0,1]]): γ2(e0) ↦ γ2(e0); e0e1 ↦ 2γ2(e0) + e0e1; γ2(e1) ↦ γ2(e0)+e0e1+γ2(e1)
        let (_, g) = power_functor(PowerFunctor::Gamma, 2, &zm(&[&[1, 1], &[0, 1]]));
        assert_eq!(g, zm(&[&[1, 2, 1], &[0, 1, 1], &[0, 0, 1]]));
        let (_, s) = power_functor(PowerFunctor::Sym, 2, &zm(&[&[1, 1], &[0, 1]]));
        assert_eq!(s, zm(&[&[1, 1, 1], &[0, 1, 2], &[0, 0, 1]]));
    }

    #[test]
    fn functoriality_mod_three() {
        let p = 3u64;
        let a = Matrix::from_rows(vec![
            vec![Zn::new(1, p), Zn::new(2, p)],
            vec![Zn::new(0, p), Zn::new(1, p)],
        ]);
        let b = Matrix::from_rows(vec![
            vec![Zn::new(2, p), Zn::new(0, p)],
            vec![Zn::new(1, p), Zn::new(1, p)],
        ]);
        for f in ALL {
            for k in 0..4 {
                let lhs = power_functor(f, k, &a.mul(&b)).1;
                let rhs = power_functor(f, k, &a).1.mul(&power_functor(f, k, &b).1);
                assert_eq!(lhs, rhs, "{f}^{k}");
            }
        }
    }

    #[test]
    fn negative_exponent_rejected() {
        assert!(power_functor_checked(PowerFunctor::Sym, -1, &zm(&[&[1]])).is_err());
    }

    #[test]
    fn parse_names() {
        assert_eq!("sym".parse::<PowerFunctor>().unwrap(), PowerFunctor::Sym);
        assert!("foo".parse::<PowerFunctor>().is_err());
    }
}
