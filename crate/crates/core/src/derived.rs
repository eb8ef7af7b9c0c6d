//! Dold-Puppe derived functors of Sym, ∧ and Γ, and the décalage identities
//!
//! `LS^p(M[1]) = ∧^p M[p]`, `L∧^p(M[1]) = Γ^p M[p]`, `LS^n(M[2]) = Γ^n M[2n]`.
//!
//! The derived functor is `N(F(Γ C))`. Rather than intersecting kernels of
//! faces on the (large) levels of `F(Γ C)`, we pass to the isomorphic quotient
//! by degenerate elements. Degeneracies of `Γ C` send basis vectors to basis
//! vectors injectively, so the degenerate part of `F(Γ C)_n` is spanned by
//! basis monomials: those whose factors all lie in the image of one `s_j`.
//! The remaining monomials form a basis of the normalized complex, and a
//! monomial needs at least one "jump" per position, so `N_n = 0` for
//! `n > p·hi(C)`. Truncating at `T ≥ p·hi(C) + 1` therefore loses nothing.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::homcore::{
    diffs_from_zero, homology, power_image, power_rank, ChainComplex, DoldKanBasis,
    HomologyReport, PowerFunctor, SparseVec,
};
use crate::rings::{Matrix, Scalar};

/// Default cap on the size of any enumerated level.
pub const DEFAULT_LEVEL_CAP: usize = 20_000;

#[derive(Clone, Debug)]
pub struct DerivedPowerRequest<S: Scalar> {
    pub functor: PowerFunctor,
    pub exponent: usize,
    pub input: ChainComplex<S>,
    pub truncation: usize,
    /// Largest level of `F(Γ C)` we are willing to enumerate.
    pub level_cap: usize,
}

impl<S: Scalar> DerivedPowerRequest<S> {
    /// Request with the smallest truncation that captures all homology.
    pub fn new(functor: PowerFunctor, exponent: usize, input: ChainComplex<S>) -> Self {
        let truncation = required_truncation(exponent, &input);
        DerivedPowerRequest {
            functor,
            exponent,
            input,
            truncation,
            level_cap: DEFAULT_LEVEL_CAP,
        }
    }

    pub fn with_truncation(mut self, t: usize) -> Self {
        self.truncation = t;
        self
    }
}

/// `p·hi(C) + 1`: enough for the whole derived complex.
pub fn required_truncation<S: Scalar>(exponent: usize, input: &ChainComplex<S>) -> usize {
    exponent * input.hi().max(0) as usize + 1
}

/// Jump positions `{j : σ(j) ≠ σ(j+1)}` of each basis element, as bitmasks.
fn jump_masks(basis: &DoldKanBasis, n: usize) -> Vec<u64> {
    (0..basis.levels[n].len())
        .map(|b| {
            (0..n)
                .filter(|&j| !basis.in_image_of_degeneracy(n, j, b))
                .fold(0u64, |m, j| m | (1 << j))
        })
        .collect()
}

/// Basis monomials of `F^p` on a level whose jumps cover every position,
/// in the order of [`crate::homcore::power_basis`]. Enumerates with pruning instead of
/// filtering the full basis; stops once `cap` is exceeded.
fn nondegenerate_monomials(
    functor: PowerFunctor,
    masks: &[u64],
    n: usize,
    p: usize,
    cap: usize,
) -> std::result::Result<Vec<Vec<usize>>, usize> {
    let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let max_jumps = masks.iter().map(|m| m.count_ones()).max().unwrap_or(0);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        functor: PowerFunctor,
        masks: &[u64],
        full: u64,
        max_jumps: u32,
        p: usize,
        cap: usize,
        covered: u64,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> bool {
        let left = (p - cur.len()) as u32;
        if (full & !covered).count_ones() > left * max_jumps {
            return true;
        }
        if left == 0 {
            out.push(cur.clone());
            return out.len() <= cap;
        }
        let start = match (functor, cur.last()) {
            (PowerFunctor::Tensor, _) | (_, None) => 0,
            (PowerFunctor::Wedge, Some(&l)) => l + 1,
            (_, Some(&l)) => l,
        };
        for b in start..masks.len() {
            cur.push(b);
            let ok = rec(functor, masks, full, max_jumps, p, cap, covered | masks[b], cur, out);
            cur.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    if rec(functor, masks, full, max_jumps, p, cap, 0, &mut cur, &mut out) {
        Ok(out)
    } else {
        Err(out.len())
    }
}

/// Normalized chains of `F^p` applied levelwise to the Dold-Kan Γ of the
/// input, computed on the nondegenerate quotient. Degrees `0..=T`.
pub fn derived_power<S: Scalar>(req: &DerivedPowerRequest<S>) -> Result<ChainComplex<S>> {
    let c = &req.input;
    if c.lo() < 0 {
        return Err(Error::InvalidArgument(format!(
            "derived powers need degrees ≥ 0, input starts at {}",
            c.lo()
        )));
    }
    let p = req.exponent;
    let top = p * c.hi().max(0) as usize;
    let needed = top + 1;
    if req.truncation < needed {
        return Err(Error::TruncationTooSmall {
            degree: top,
            truncation: req.truncation,
            needed,
        });
    }
    let t = req.truncation;
    let params = c.params().clone();
    let one = S::from_i64(&params, 1);
    let basis = DoldKanBasis::new(c, t);
    let diffs = diffs_from_zero(c);

    // nondegenerate monomials per level
    let mut levels: Vec<Vec<Vec<usize>>> = Vec::with_capacity(t + 1);
    for n in 0..=t {
        let masks = jump_masks(&basis, n);
        let monomials = nondegenerate_monomials(req.functor, &masks, n, p, req.level_cap)
            .map_err(|size| Error::GuardExceeded {
                what: format!("normalized rank of {}^{p} on level {n}", req.functor),
                size,
                cap: req.level_cap,
            })?;
        levels.push(monomials);
    }
    let index: Vec<HashMap<&[usize], usize>> = levels
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect())
        .collect();

    // d_n = Σ (−1)^i F(∂_i) on the quotient; levels are independent
    let matrices: Vec<Matrix<S>> = (1..=t)
        .into_par_iter()
        .map(|n| {
            let faces: Vec<Vec<SparseVec<S>>> = (0..=n)
                .map(|i| {
                    (0..basis.levels[n].len())
                        .map(|b| basis.face(&diffs, &one, n, i, b))
                        .collect()
                })
                .collect();
            let mut d: Matrix<S> = Matrix::zeros(levels[n - 1].len(), levels[n].len());
            for (col, m) in levels[n].iter().enumerate() {
                for (i, images) in faces.iter().enumerate() {
                    for (key, coeff) in power_image(req.functor, m, images) {
                        let Some(&row) = index[n - 1].get(key.as_slice()) else {
                            continue;
                        };
                        let v = if i % 2 == 0 { coeff } else { -coeff };
                        d[(row, col)] = d[(row, col)].clone() + v;
                    }
                }
            }
            d
        })
        .collect();
    let ranks = levels.iter().map(|l| l.len()).collect();
    ChainComplex::new(params, 0, ranks, matrices)
}

/// Which décalage identity to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecalageKind {
    /// `LS^p(M[1]) = ∧^p M[p]`
    SymShift1,
    /// `L∧^p(M[1]) = Γ^p M[p]`
    WedgeShift1,
    /// `LS^n(M[2]) = Γ^n M[2n]`
    SymShift2,
}

impl DecalageKind {
    pub const ALL: [DecalageKind; 3] = [
        DecalageKind::SymShift1,
        DecalageKind::WedgeShift1,
        DecalageKind::SymShift2,
    ];

    fn shift(self) -> i64 {
        match self {
            DecalageKind::SymShift2 => 2,
            _ => 1,
        }
    }

    fn functor(self) -> PowerFunctor {
        match self {
            DecalageKind::WedgeShift1 => PowerFunctor::Wedge,
            _ => PowerFunctor::Sym,
        }
    }

    /// The functor whose value on `M` should appear.
    fn expected_functor(self) -> PowerFunctor {
        match self {
            DecalageKind::SymShift1 => PowerFunctor::Wedge,
            _ => PowerFunctor::Gamma,
        }
    }
}

impl fmt::Display for DecalageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecalageKind::SymShift1 => "sym_shift1",
            DecalageKind::WedgeShift1 => "wedge_shift1",
            DecalageKind::SymShift2 => "sym_shift2",
        })
    }
}

impl FromStr for DecalageKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym_shift1" => Ok(DecalageKind::SymShift1),
            "wedge_shift1" => Ok(DecalageKind::WedgeShift1),
            "sym_shift2" => Ok(DecalageKind::SymShift2),
            _ => Err(Error::InvalidArgument(format!("unknown décalage kind {s:?}"))),
        }
    }
}

/// Combinatorial guard for [`verify_decalage`].
#[derive(Clone, Copy, Debug)]
pub struct DecalageGuard {
    pub max_rank: usize,
    pub max_exponent: usize,
    pub level_cap: usize,
}

impl Default for DecalageGuard {
    fn default() -> Self {
        DecalageGuard {
            max_rank: 4,
            max_exponent: 3,
            level_cap: DEFAULT_LEVEL_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecalageReport {
    pub kind: DecalageKind,
    pub rank: usize,
    pub exponent: usize,
    pub expected_degree: i64,
    pub expected_rank: usize,
    pub homology: HomologyReport,
    pub holds: bool,
}

impl fmt::Display for DecalageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups: Vec<String> = self
            .homology
            .groups
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| format!("H_{} = {}", g.degree, g))
            .collect();
        write!(
            f,
            "{} r={} p={}: expect rank {} in degree {}; got {} -> {}",
            self.kind,
            self.rank,
            self.exponent,
            self.expected_rank,
            self.expected_degree,
            if groups.is_empty() {
                "0".to_string()
            } else {
                groups.join(", ")
            },
            if self.holds { "ok" } else { "FAIL" }
        )
    }
}

/// Run the derived-functor pipeline on `M[shift]`, `M` free of rank `r`,
/// and compare with the predicted homology.
pub fn verify_decalage<S: Scalar>(
    params: &S::Params,
    kind: DecalageKind,
    r: usize,
    p: usize,
    guard: DecalageGuard,
) -> Result<DecalageReport> {
    if r > guard.max_rank {
        return Err(Error::GuardExceeded {
            what: "rank".into(),
            size: r,
            cap: guard.max_rank,
        });
    }
    if p > guard.max_exponent {
        return Err(Error::GuardExceeded {
            what: "exponent".into(),
            size: p,
            cap: guard.max_exponent,
        });
    }
    let shift = kind.shift();
    let input = ChainComplex::<S>::shifted_free(params.clone(), shift, r);
    let mut req = DerivedPowerRequest::new(kind.functor(), p, input);
    req.level_cap = guard.level_cap;
    let complex = derived_power(&req)?;
    let h = homology(&complex);
    let expected_degree = shift * p as i64;
    let expected_rank = power_rank(kind.expected_functor(), r, p);
    let holds = h.groups.iter().all(|g| {
        if g.degree == expected_degree {
            g.rank == expected_rank && g.torsion.is_empty()
        } else {
            g.is_zero()
        }
    }) && (expected_rank == 0 || h.group(expected_degree).is_some());
    Ok(DecalageReport {
        kind,
        rank: r,
        exponent: p,
        expected_degree,
        expected_rank,
        homology: h,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homcore::{dold_kan_gamma, normalized_chains, quasi_same};
    use crate::rings::Zn;
    use num_bigint::BigInt;

    type Z = BigInt;

    #[test]
    fn examples() {
        let g = DecalageGuard::default();
        let r = verify_decalage::<Z>(&(), DecalageKind::SymShift1, 3, 2, g).unwrap();
        assert!(r.holds, "{r}");
        assert_eq!(r.homology.rank(2), 3);
        let r = verify_decalage::<Z>(&(), DecalageKind::SymShift2, 1, 2, g).unwrap();
        assert!(r.holds, "{r}");
        assert_eq!(r.homology.rank(4), 1);
        let r = verify_decalage::<Z>(&(), DecalageKind::WedgeShift1, 2, 2, g).unwrap();
        assert!(r.holds, "{r}");
        assert_eq!(r.homology.rank(2), 3);
    }

    #[test]
    fn sym_zero_is_unit() {
        let c = ChainComplex::<Z>::from_i64((), 0, vec![1, 2], vec![vec![vec![0, 0]]]).unwrap();
        let h = homology(&derived_power(&DerivedPowerRequest::new(PowerFunctor::Sym, 0, c)).unwrap());
        assert_eq!(h.support(), vec![0]);
        assert_eq!(h.rank(0), 1);
    }

    #[test]
    fn truncation_guard() {
        let c = ChainComplex::<Z>::shifted_free((), 1, 2);
        let req = DerivedPowerRequest::new(PowerFunctor::Sym, 2, c).with_truncation(2);
        assert!(matches!(
            derived_power(&req),
            Err(Error::TruncationTooSmall { needed: 3, .. })
        ));
        assert!(matches!(
            verify_decalage::<Z>(&(), DecalageKind::SymShift1, 5, 1, DecalageGuard::default()),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn quotient_matches_moore_normalization() {
        // small cases where the dense levelwise construction is affordable
        for (functor, p, shift, r) in [
            (PowerFunctor::Sym, 2, 1, 2),
            (PowerFunctor::Wedge, 2, 1, 2),
            (PowerFunctor::Gamma, 2, 1, 1),
            (PowerFunctor::Sym, 2, 2, 1),
        ] {
            let c = ChainComplex::<Zn>::shifted_free(3, shift, r);
            let req = DerivedPowerRequest::new(functor, p, c.clone());
            let quick = derived_power(&req).unwrap();
            let moore = normalized_chains(
                &dold_kan_gamma(&c, req.truncation)
                    .unwrap()
                    .levelwise(functor, p)
                    .unwrap(),
            )
            .unwrap();
            assert!(quasi_same(&quick, &moore), "{functor}^{p} on rank {r} [{shift}]");
        }
    }

    #[test]
    fn independent_of_truncation() {
        let c = ChainComplex::<Z>::shifted_free((), 1, 2);
        let req = DerivedPowerRequest::new(PowerFunctor::Wedge, 2, c);
        let a = homology(&derived_power(&req).unwrap());
        let t = req.truncation;
        let b = homology(&derived_power(&req.with_truncation(t + 1)).unwrap());
        assert!(b.groups.iter().all(|g| g.degree <= t as i64 || g.is_zero()));
        assert!(a.groups.iter().all(|g| b.group(g.degree) == Some(g)));
    }

    #[test]
    fn exponent_one_is_identity_on_homology() {
        let c = ChainComplex::<Z>::from_i64((), 0, vec![1, 1, 2], vec![vec![vec![3]], vec![vec![0, 0]]])
            .unwrap();
        let d = derived_power(&DerivedPowerRequest::new(PowerFunctor::Sym, 1, c.clone())).unwrap();
        let (hc, hd) = (homology(&c), homology(&d));
        for n in 0..=2 {
            assert_eq!(hc.rank(n), hd.rank(n));
            assert_eq!(hc.torsion(n), hd.torsion(n));
        }
    }

    #[test]
    fn full_grid_over_integers_and_small_fields() {
        let g = DecalageGuard::default();
        for kind in DecalageKind::ALL {
            for r in 0..=3 {
                for p in 0..=3 {
                    let z = verify_decalage::<Z>(&(), kind, r, p, g).unwrap();
                    assert!(z.holds, "{z}");
                    for q in [2u64, 3] {
                        let f = verify_decalage::<Zn>(&q, kind, r, p, g).unwrap();
                        assert!(f.holds, "F_{q}: {f}");
                    }
                }
            }
        }
    }
}
