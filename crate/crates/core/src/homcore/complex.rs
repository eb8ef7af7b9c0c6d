use std::fmt;

use num_bigint::BigInt;

use super::snf::invariant_factors;
use crate::error::{Error, Result};
use crate::rings::{Matrix, Scalar};

/// A bounded chain complex of finite free modules, homologically graded.
///
/// `d_n : C_n → C_{n−1}` is stored as a `rank(n−1) × rank(n)` matrix acting
/// on column vectors.
#[derive(Clone, Debug)]
pub struct ChainComplex<S: Scalar> {
    params: S::Params,
    lo: i64,
    ranks: Vec<usize>,
    /// `diffs[k]` is `d_{lo+k+1}`.
    diffs: Vec<Matrix<S>>,
}

impl<S: Scalar> ChainComplex<S> {
    /// Build from ranks of `C_lo..=C_hi` and the differentials
    /// `d_{lo+1}, …, d_hi`; checks shapes and `d∘d = 0`.
    pub fn new(
        params: S::Params,
        lo: i64,
        ranks: Vec<usize>,
        diffs: Vec<Matrix<S>>,
    ) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::InvalidArgument("complex with no degrees".into()));
        }
        if diffs.len() + 1 != ranks.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} modules need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != ranks[k] || d.cols() != ranks[k + 1] {
                return Err(Error::ShapeMismatch(format!(
                    "d_{} is {}x{}, expected {}x{}",
                    lo + k as i64 + 1,
                    d.rows(),
                    d.cols(),
                    ranks[k],
                    ranks[k + 1]
                )));
            }
        }
        for k in 1..diffs.len() {
            if !diffs[k - 1].mul(&diffs[k]).is_zero() {
                return Err(Error::NotAComplex(format!(
                    "d_{} ∘ d_{} ≠ 0",
                    lo + k as i64,
                    lo + k as i64 + 1
                )));
            }
        }
        Ok(ChainComplex {
            params,
            lo,
            ranks,
            diffs,
        })
    }

    /// `M[n]`: a free module of rank `r` in degree `n`.
    pub fn shifted_free(params: S::Params, n: i64, r: usize) -> Self {
        ChainComplex {
            params,
            lo: n,
            ranks: vec![r],
            diffs: vec![],
        }
    }

    pub fn params(&self) -> &S::Params {
        &self.params
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn rank(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.ranks[(n - self.lo) as usize]
        }
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// `d_n`, zero outside the stored range.
    pub fn differential(&self, n: i64) -> Matrix<S> {
        if n > self.lo && n <= self.hi() {
            self.diffs[(n - self.lo - 1) as usize].clone()
        } else {
            Matrix::zeros(self.rank(n - 1), self.rank(n))
        }
    }

    /// Replace every differential by `P_{n−1} d_n P_n^{-1}` for the given
    /// invertible change-of-basis matrices (one per degree, `lo..=hi`).
    pub fn change_basis(&self, p: &[Matrix<S>]) -> Result<Self> {
        if p.len() != self.ranks.len() {
            return Err(Error::ShapeMismatch("one basis change per degree".into()));
        }
        let inv: Vec<Matrix<S>> = p
            .iter()
            .map(|m| {
                m.inverse()
                    .ok_or_else(|| Error::NotUnit("basis change is not invertible".into()))
            })
            .collect::<Result<_>>()?;
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, d)| p[k].mul(d).mul(&inv[k + 1]))
            .collect();
        Self::new(self.params.clone(), self.lo, self.ranks.clone(), diffs)
    }
}

/// Homology of one degree: free rank plus torsion orders `t_1 | t_2 | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: i64,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 {
                "R".to_string()
            } else {
                format!("R^{}", self.rank)
            });
        }
        for t in &self.torsion {
            parts.push(format!("R/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HomologyReport {
    pub groups: Vec<HomologyGroup>,
}

impl HomologyReport {
    pub fn group(&self, degree: i64) -> Option<&HomologyGroup> {
        self.groups.iter().find(|g| g.degree == degree)
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.group(degree).map_or(0, |g| g.rank)
    }

    pub fn torsion(&self, degree: i64) -> &[BigInt] {
        self.group(degree).map_or(&[], |g| &g.torsion)
    }

    /// Degrees with nonzero homology.
    pub fn support(&self) -> Vec<i64> {
        self.groups
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.degree)
            .collect()
    }
}

/// Group orders from invariant factors: the non-unit ones are torsion.
pub(crate) fn torsion_orders<S: Scalar>(factors: &[S]) -> Vec<BigInt> {
    factors
        .iter()
        .filter(|f| !f.is_unit())
        .map(|f| f.to_bigint().expect("torsion order has an integer lift"))
        .collect()
}

/// `H_n = ker d_n / im d_{n+1}` in every degree of the complex.
pub fn homology<S: Scalar>(c: &ChainComplex<S>) -> HomologyReport {
    let params = c.params();
    // factors[k] belongs to d_{lo+k}
    let factors: Vec<Vec<S>> = (c.lo()..=c.hi() + 1)
        .map(|n| invariant_factors(params, &c.differential(n)))
        .collect();
    let groups = (c.lo()..=c.hi())
        .map(|n| {
            let k = (n - c.lo()) as usize;
            let ker = c.rank(n) - factors[k].len();
            let im = &factors[k + 1];
            HomologyGroup {
                degree: n,
                rank: ker - im.len(),
                torsion: torsion_orders(im),
            }
        })
        .collect();
    HomologyReport { groups }
}

/// Equal ranks per degree and equal homology; the notion of "same complex up
/// to isomorphism" used by round-trip checks.
pub fn quasi_same<S: Scalar>(a: &ChainComplex<S>, b: &ChainComplex<S>) -> bool {
    let lo = a.lo().min(b.lo());
    let hi = a.hi().max(b.hi());
    if (lo..=hi).any(|n| a.rank(n) != b.rank(n)) {
        return false;
    }
    let (ha, hb) = (homology(a), homology(b));
    (lo..=hi).all(|n| ha.rank(n) == hb.rank(n) && ha.torsion(n) == hb.torsion(n))
}

impl<S: Scalar> ChainComplex<S> {
    /// Integer matrix helper for tests and examples.
    pub fn from_i64(
        params: S::Params,
        lo: i64,
        ranks: Vec<usize>,
        diffs: Vec<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        let mats = diffs
            .into_iter()
            .enumerate()
            .map(|(k, rows)| {
                let r = ranks.get(k).copied().unwrap_or(0);
                let c = ranks.get(k + 1).copied().unwrap_or(0);
                if rows.is_empty() {
                    return Matrix::zeros(r, c);
                }
                Matrix::from_rows(
                    rows.into_iter()
                        .map(|row| row.into_iter().map(|x| S::from_i64(&params, x)).collect())
                        .collect(),
                )
            })
            .collect();
        Self::new(params, lo, ranks, mats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Zn;

    type Z = BigInt;

    #[test]
    fn multiplication_by_two() {
        let c = ChainComplex::<Z>::from_i64((), 0, vec![1, 1], vec![vec![vec![2]]]).unwrap();
        let h = homology(&c);
        assert_eq!(h.rank(0), 0);
        assert_eq!(h.torsion(0), &[BigInt::from(2)]);
        assert!(h.group(1).unwrap().is_zero());

        let c2 = ChainComplex::<Zn>::from_i64(2, 0, vec![1, 1], vec![vec![vec![2]]]).unwrap();
        let h2 = homology(&c2);
        assert_eq!((h2.rank(0), h2.rank(1)), (1, 1));
    }

    #[test]
    fn identity_is_acyclic() {
        let c = ChainComplex::<Z>::from_i64((), 0, vec![2, 2], vec![vec![vec![1, 0], vec![0, 1]]])
            .unwrap();
        assert!(homology(&c).support().is_empty());
    }

    #[test]
    fn rejects_non_complex() {
        let bad = ChainComplex::<Z>::from_i64(
            (),
            0,
            vec![1, 1, 1],
            vec![vec![vec![1]], vec![vec![1]]],
        );
        assert!(matches!(bad, Err(Error::NotAComplex(_))));
        let shape = ChainComplex::<Z>::from_i64((), 0, vec![1, 2], vec![vec![vec![1]]]);
        assert!(matches!(shape, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn shifted_free_homology() {
        let c = ChainComplex::<Z>::shifted_free((), 2, 3);
        let h = homology(&c);
        assert_eq!(h.rank(2), 3);
        assert_eq!(h.support(), vec![2]);
    }

    #[test]
    fn display_group() {
        let g = HomologyGroup {
            degree: 0,
            rank: 2,
            torsion: vec![BigInt::from(2)],
        };
        assert_eq!(g.to_string(), "R^2 + R/2");
    }
}
