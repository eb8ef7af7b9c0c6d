use std::collections::HashMap;

use super::complex::ChainComplex;
use super::power::{power_functor, power_rank, PowerFunctor, SparseVec};
use super::snf::{kernel, smith_normal_form, solve_with};
use crate::error::{Error, Result};
use crate::rings::{Matrix, Scalar};

/// A simplicial module truncated at level `T`: ranks of levels `0..=T`,
/// faces `∂_i : X_n → X_{n−1}` and degeneracies `s_i : X_n → X_{n+1}` as
/// matrices on column vectors.
#[derive(Clone, Debug)]
pub struct SimplicialModule<S: Scalar> {
    params: S::Params,
    ranks: Vec<usize>,
    /// `faces[n][i]` for `1 ≤ n ≤ T`, `0 ≤ i ≤ n`; `faces[0]` is empty.
    faces: Vec<Vec<Matrix<S>>>,
    /// `degens[n][i]` for `0 ≤ n < T`, `0 ≤ i ≤ n`.
    degens: Vec<Vec<Matrix<S>>>,
}

impl<S: Scalar> SimplicialModule<S> {
    /// Validates shapes and every simplicial identity.
    pub fn new(
        params: S::Params,
        ranks: Vec<usize>,
        faces: Vec<Vec<Matrix<S>>>,
        degens: Vec<Vec<Matrix<S>>>,
    ) -> Result<Self> {
        let m = SimplicialModule {
            params,
            ranks,
            faces,
            degens,
        };
        m.check()?;
        Ok(m)
    }

    /// Constant simplicial module on a free module of rank `m`.
    pub fn constant(params: S::Params, m: usize, truncation: usize) -> Self {
        let id = Matrix::identity(&params, m);
        let faces = (0..=truncation)
            .map(|n| if n == 0 { vec![] } else { vec![id.clone(); n + 1] })
            .collect();
        let degens = (0..truncation).map(|n| vec![id.clone(); n + 1]).collect();
        SimplicialModule {
            params,
            ranks: vec![m; truncation + 1],
            faces,
            degens,
        }
    }

    pub fn params(&self) -> &S::Params {
        &self.params
    }

    pub fn truncation(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks[n]
    }

    pub fn face(&self, n: usize, i: usize) -> &Matrix<S> {
        &self.faces[n][i]
    }

    pub fn degeneracy(&self, n: usize, i: usize) -> &Matrix<S> {
        &self.degens[n][i]
    }

    fn check(&self) -> Result<()> {
        let t = self.ranks.len().checked_sub(1).ok_or_else(|| {
            Error::InvalidArgument("simplicial module with no levels".into())
        })?;
        let bad = |msg: String| Err(Error::NotSimplicial(msg));
        if self.faces.len() != t + 1 || self.degens.len() != t {
            return bad("wrong number of levels of face/degeneracy maps".into());
        }
        for n in 0..=t {
            let want = if n == 0 { 0 } else { n + 1 };
            if self.faces[n].len() != want {
                return bad(format!("level {n} needs {want} faces"));
            }
            for (i, f) in self.faces[n].iter().enumerate() {
                if f.rows() != self.ranks[n - 1] || f.cols() != self.ranks[n] {
                    return bad(format!("∂_{i} on level {n} has the wrong shape"));
                }
            }
        }
        for n in 0..t {
            if self.degens[n].len() != n + 1 {
                return bad(format!("level {n} needs {} degeneracies", n + 1));
            }
            for (i, s) in self.degens[n].iter().enumerate() {
                if s.rows() != self.ranks[n + 1] || s.cols() != self.ranks[n] {
                    return bad(format!("s_{i} on level {n} has the wrong shape"));
                }
            }
        }
        // ∂_i ∂_j = ∂_{j−1} ∂_i for i < j
        for n in 2..=t {
            for j in 0..=n {
                for i in 0..j {
                    let lhs = self.faces[n - 1][i].mul(&self.faces[n][j]);
                    let rhs = self.faces[n - 1][j - 1].mul(&self.faces[n][i]);
                    if lhs != rhs {
                        return bad(format!("∂_{i}∂_{j} ≠ ∂_{}∂_{i} on level {n}", j - 1));
                    }
                }
            }
        }
        // s_i s_j = s_{j+1} s_i for i ≤ j
        for n in 0..t.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = self.degens[n + 1][i].mul(&self.degens[n][j]);
                    let rhs = self.degens[n + 1][j + 1].mul(&self.degens[n][i]);
                    if lhs != rhs {
                        return bad(format!("s_{i}s_{j} ≠ s_{}s_{i} on level {n}", j + 1));
                    }
                }
            }
        }
        // mixed relations, s_j : X_n → X_{n+1} then ∂_i : X_{n+1} → X_n
        for n in 0..t {
            let id = Matrix::identity(&self.params, self.ranks[n]);
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = self.faces[n + 1][i].mul(&self.degens[n][j]);
                    let rhs = if i == j || i == j + 1 {
                        id.clone()
                    } else if i < j {
                        self.degens[n - 1][j - 1].mul(&self.faces[n][i])
                    } else {
                        self.degens[n - 1][j].mul(&self.faces[n][i - 1])
                    };
                    if lhs != rhs {
                        return bad(format!("∂_{i}s_{j} relation fails on level {n}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Apply `F^p` level by level.
    pub fn levelwise(&self, functor: PowerFunctor, p: usize) -> Result<Self> {
        let ranks = self
            .ranks
            .iter()
            .map(|&r| power_rank(functor, r, p))
            .collect();
        let apply = |maps: &Vec<Matrix<S>>| -> Vec<Matrix<S>> {
            maps.iter().map(|m| power_functor(functor, p, m).1).collect()
        };
        Self::new(
            self.params.clone(),
            ranks,
            self.faces.iter().map(apply).collect(),
            self.degens.iter().map(apply).collect(),
        )
    }
}

/// Monotone surjections `[n] ↠ [k]` as value lists, lexicographic.
pub fn surjections(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    // choose which of the n steps go up by one
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *cur.last().unwrap();
        if cur.len() == n + 1 {
            if last == k {
                out.push(cur.clone());
            }
            return;
        }
        let remaining = n + 1 - cur.len();
        for step in 0..=1 {
            let v = last + step;
            if v > k || k - v > remaining - 1 {
                continue;
            }
            cur.push(v);
            rec(n, k, cur, out);
            cur.pop();
        }
    }
    rec(n, k, &mut vec![0], &mut out);
    out
}

/// Basis of the Dold-Kan construction: level `n` is indexed by triples
/// `(σ : [n] ↠ [k], k, e)` with `e` a basis vector of `C_k`.
#[derive(Clone, Debug)]
pub(crate) struct DoldKanBasis {
    pub levels: Vec<Vec<(Vec<usize>, usize, usize)>>,
    index: Vec<HashMap<(Vec<usize>, usize), usize>>,
}

impl DoldKanBasis {
    pub fn new<S: Scalar>(c: &ChainComplex<S>, truncation: usize) -> Self {
        let mut levels = Vec::new();
        let mut index = Vec::new();
        for n in 0..=truncation {
            let mut lvl = Vec::new();
            let mut idx = HashMap::new();
            for k in 0..=n {
                let r = c.rank(k as i64);
                if r == 0 {
                    continue;
                }
                for sigma in surjections(n, k) {
                    for e in 0..r {
                        idx.insert((sigma.clone(), e), lvl.len());
                        lvl.push((sigma.clone(), k, e));
                    }
                }
            }
            levels.push(lvl);
            index.push(idx);
        }
        DoldKanBasis { levels, index }
    }

    fn lookup(&self, n: usize, sigma: Vec<usize>, e: usize) -> usize {
        self.index[n][&(sigma, e)]
    }

    /// `∂_i` of basis element `b` on level `n`. The composite `σ∘δ^i`
    /// factors as `η∘ε`; only `η = id` and `η = δ^k` (last coface) survive,
    /// the latter through the differential of the complex.
    pub fn face<S: Scalar>(
        &self,
        diffs: &[Matrix<S>],
        one: &S,
        n: usize,
        i: usize,
        b: usize,
    ) -> SparseVec<S> {
        let (sigma, k, e) = &self.levels[n][b];
        let mut tau = sigma.clone();
        let v = tau.remove(i);
        if tau.contains(&v) {
            return vec![(self.lookup(n - 1, tau, *e), one.clone())];
        }
        if v != *k {
            return vec![];
        }
        let d = &diffs[*k];
        (0..d.rows())
            .filter(|&j| !d[(j, *e)].is_zero())
            .map(|j| (self.lookup(n - 1, tau.clone(), j), d[(j, *e)].clone()))
            .collect()
    }

    pub fn degeneracy<S: Scalar>(&self, one: &S, n: usize, j: usize, b: usize) -> SparseVec<S> {
        let (sigma, _, e) = &self.levels[n][b];
        let mut tau = sigma.clone();
        tau.insert(j, sigma[j]);
        vec![(self.lookup(n + 1, tau, *e), one.clone())]
    }

    /// True when `b` lies in the image of `s_j` (i.e. `σ(j) = σ(j+1)`).
    pub fn in_image_of_degeneracy(&self, n: usize, j: usize, b: usize) -> bool {
        let sigma = &self.levels[n][b].0;
        sigma[j] == sigma[j + 1]
    }
}

fn dense<S: Scalar>(rows: usize, cols: Vec<SparseVec<S>>) -> Matrix<S> {
    let mut m = Matrix::zeros(rows, cols.len());
    for (j, col) in cols.into_iter().enumerate() {
        for (i, c) in col {
            m[(i, j)] = c;
        }
    }
    m
}

/// Differentials `d_0..=d_hi` of a complex in degrees ≥ 0 (`d_0` is empty).
pub(crate) fn diffs_from_zero<S: Scalar>(c: &ChainComplex<S>) -> Vec<Matrix<S>> {
    (0..=c.hi().max(0)).map(|k| c.differential(k)).collect()
}

/// The Dold-Kan functor Γ: level `n` is `⊕_{[n]↠[k]} C_k`.
pub fn dold_kan_gamma<S: Scalar>(
    c: &ChainComplex<S>,
    truncation: usize,
) -> Result<SimplicialModule<S>> {
    if c.lo() < 0 {
        return Err(Error::InvalidArgument(format!(
            "Dold-Kan needs degrees ≥ 0, complex starts at {}",
            c.lo()
        )));
    }
    let params = c.params().clone();
    let one = S::from_i64(&params, 1);
    let basis = DoldKanBasis::new(c, truncation);
    let diffs = diffs_from_zero(c);
    let ranks: Vec<usize> = basis.levels.iter().map(|l| l.len()).collect();
    let faces = (0..=truncation)
        .map(|n| {
            if n == 0 {
                return vec![];
            }
            (0..=n)
                .map(|i| {
                    let cols = (0..ranks[n])
                        .map(|b| basis.face(&diffs, &one, n, i, b))
                        .collect();
                    dense(ranks[n - 1], cols)
                })
                .collect()
        })
        .collect();
    let degens = (0..truncation)
        .map(|n| {
            (0..=n)
                .map(|j| {
                    let cols = (0..ranks[n])
                        .map(|b| basis.degeneracy(&one, n, j, b))
                        .collect();
                    dense(ranks[n + 1], cols)
                })
                .collect()
        })
        .collect();
    SimplicialModule::new(params, ranks, faces, degens)
}

/// Moore normalization: `N_n = ∩_{i<n} ker ∂_i` with differential `∂_n`.
pub fn normalized_chains<S: Scalar>(s: &SimplicialModule<S>) -> Result<ChainComplex<S>> {
    let params = s.params();
    let t = s.truncation();
    let mut bases: Vec<Matrix<S>> = vec![Matrix::identity(params, s.rank(0))];
    for n in 1..=t {
        let stacked = (1..n).fold(s.face(n, 0).clone(), |acc, i| acc.vstack(s.face(n, i)));
        bases.push(kernel(params, &stacked));
    }
    let mut diffs = Vec::with_capacity(t);
    for n in 1..=t {
        let image = s.face(n, n).mul(&bases[n]);
        let below = smith_normal_form(params, &bases[n - 1]);
        let mut d = Matrix::zeros(bases[n - 1].cols(), bases[n].cols());
        for j in 0..image.cols() {
            let x = solve_with(&below, &image.column(j)).ok_or_else(|| {
                Error::NotSimplicial(format!("∂_{n} leaves the normalized subcomplex"))
            })?;
            for (i, c) in x.into_iter().enumerate() {
                d[(i, j)] = c;
            }
        }
        diffs.push(d);
    }
    let ranks = bases.iter().map(|b| b.cols()).collect();
    ChainComplex::new(params.clone(), 0, ranks, diffs)
}
