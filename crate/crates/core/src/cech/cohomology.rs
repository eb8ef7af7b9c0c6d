//! Čech and Čech–de Rham cohomology by weight.
//!
//! With monomial gluings and a monomial line-bundle twist, the basis
//! `x^e dlog x_I` (with `e` an exponent in the last chart) is permuted up to
//! sign by every transport, and the weight (the exponent moved to chart 0,
//! plus the frame offset of the twist) is preserved by `δ` and by `d`. So
//! every complex splits into finite pieces, one per weight.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;

use super::bundle::VectorBundle;
use super::cochain::{CechCochain, Coefficients, FormMatrix};
use super::scheme::CoveredScheme;
use crate::error::{Error, Result};
use crate::homcore::snf::{invariant_factors, kernel, rank, solve};
use crate::homcore::{HomologyGroup, HomologyReport};
use crate::rings::{DifferentialForm, Exponent, LaurentPoly, Matrix, Scalar};

pub type Weight = Vec<i32>;

/// The coefficient sheaf `Ω^k ⊗ L` for a monomial line bundle `L`.
#[derive(Clone, Debug)]
pub struct SheafSpec<S: Scalar> {
    pub form_degree: usize,
    pub twist: Option<Arc<VectorBundle<S>>>,
}

impl<S: Scalar> SheafSpec<S> {
    pub fn structure_sheaf() -> Self {
        SheafSpec { form_degree: 0, twist: None }
    }

    pub fn forms(k: usize) -> Self {
        SheafSpec { form_degree: k, twist: None }
    }

    pub fn twisted(k: usize, l: Arc<VectorBundle<S>>) -> Self {
        SheafSpec { form_degree: k, twist: Some(l) }
    }

    fn coefficients(&self) -> Coefficients<S> {
        match &self.twist {
            None => Coefficients::Scalar,
            Some(l) => Coefficients::Twisted(l.clone()),
        }
    }
}

/// Basis element: a chart tuple and a dlog index set.
type Cell = (Vec<usize>, Vec<usize>);

struct Basis {
    cells: Vec<Cell>,
    index: HashMap<Cell, usize>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Weight bookkeeping for one scheme and twist.
pub(crate) struct Graded<S: Scalar> {
    scheme: Arc<CoveredScheme<S>>,
    coeffs: Coefficients<S>,
    /// Frame offset of each chart, chart-0 coordinates.
    offsets: Vec<Exponent>,
}

impl<S: Scalar> Graded<S> {
    pub(crate) fn new(scheme: Arc<CoveredScheme<S>>, coeffs: Coefficients<S>) -> Result<Self> {
        let m = scheme.num_charts();
        let n = scheme.dim();
        let offsets = match &coeffs {
            Coefficients::Scalar => vec![vec![0; n]; m],
            Coefficients::Twisted(l) => {
                if l.monomial_line().is_none() {
                    return Err(Error::Unsupported(
                        "cohomology with a twist that is not a monomial line bundle".into(),
                    ));
                }
                (0..m)
                    .map(|a| {
                        let g = l.transition(a, 0, 0);
                        let (e, _) = g[(0, 0)].as_monomial().expect("monomial line bundle");
                        e.clone()
                    })
                    .collect()
            }
            Coefficients::Endo(_) => {
                return Err(Error::Unsupported("cohomology of endomorphism-valued cochains".into()))
            }
        };
        Ok(Graded { scheme, coeffs, offsets })
    }

    fn dlog_exponent(&self, chart: usize, w: &[i32]) -> Exponent {
        let shifted: Vec<i32> = w.iter().zip(&self.offsets[chart]).map(|(a, b)| a - b).collect();
        self.scheme.transport_exponent(&shifted, 0, chart)
    }

    fn weight_of(&self, chart: usize, dlog_e: &[i32]) -> Weight {
        self.scheme
            .transport_exponent(dlog_e, chart, 0)
            .iter()
            .zip(&self.offsets[chart])
            .map(|(a, b)| a + b)
            .collect()
    }

    fn basis(&self, q: usize, k: usize, w: &[i32]) -> Basis {
        let x = &self.scheme;
        let n = x.dim();
        let mut cells = Vec::new();
        if k <= n {
            for t in x.tuples(q + 1) {
                let last = *t.last().unwrap();
                let inv = x.tuple_inverted(&t);
                let e = self.dlog_exponent(last, w);
                for i in subsets(n, k) {
                    let mut f = e.clone();
                    for &j in &i {
                        f[j] -= 1;
                    }
                    if x.is_regular_exponent(&inv, &f) {
                        cells.push((t.clone(), i));
                    }
                }
            }
        }
        let index = cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        Basis { cells, index }
    }

    fn cell_form(&self, cell: &Cell, w: &[i32]) -> FormMatrix<S> {
        let x = &self.scheme;
        let last = *cell.0.last().unwrap();
        let mut e = self.dlog_exponent(last, w);
        for &j in &cell.1 {
            e[j] -= 1;
        }
        FormMatrix::scalar(DifferentialForm::term(
            x.dim(),
            cell.1.clone(),
            LaurentPoly::monomial(e, x.one()),
        ))
    }

    fn cell_cochain(&self, q: usize, k: usize, cells: &[(Cell, S)], w: &[i32]) -> CechCochain<S> {
        let mut values: BTreeMap<Vec<usize>, FormMatrix<S>> = BTreeMap::new();
        for (cell, c) in cells {
            let v = self.cell_form(cell, w).scale(c);
            let e = values.entry(cell.0.clone()).or_insert_with(|| {
                FormMatrix::zero(self.scheme.dim(), 1, 1, k)
            });
            *e = e.add(&v);
        }
        CechCochain::new(self.scheme.clone(), self.coeffs.clone(), q, k, values)
            .expect("basis cells are regular")
    }

    pub(crate) fn cochain(&self, q: usize, k: usize, w: &[i32], v: &[S]) -> CechCochain<S> {
        let b = self.basis(q, k, w);
        let cells: Vec<(Cell, S)> = b
            .cells
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(cell, c)| (cell.clone(), c.clone()))
            .collect();
        self.cell_cochain(q, k, &cells, w)
    }

    /// Coordinates of a cochain, split by weight.
    fn decompose(&self, c: &CechCochain<S>) -> Result<BTreeMap<Weight, Vec<(Cell, S)>>> {
        let mut out: BTreeMap<Weight, Vec<(Cell, S)>> = BTreeMap::new();
        for (t, v) in c.values() {
            let last = *t.last().unwrap();
            for (i, e, coef) in v.entry(0, 0).monomial_terms() {
                let mut de = e.clone();
                for &j in i {
                    de[j] += 1;
                }
                out.entry(self.weight_of(last, &de))
                    .or_default()
                    .push(((t.clone(), i.clone()), coef.clone()));
            }
        }
        Ok(out)
    }

    fn vector(&self, basis: &Basis, cells: &[(Cell, S)]) -> Result<Vec<S>> {
        let mut v = vec![S::zero(); basis.cells.len()];
        for (cell, c) in cells {
            let i = *basis.index.get(cell).ok_or_else(|| Error::NotExpressible {
                tuple: cell.0.clone(),
                detail: format!("term with dlog index {:?}", cell.1),
            })?;
            v[i] = v[i].clone() + c.clone();
        }
        Ok(v)
    }

    fn matrix_of(
        &self,
        src: &Basis,
        dst: &Basis,
        w: &[i32],
        (q, k): (usize, usize),
        (q2, k2): (usize, usize),
        f: impl Fn(&CechCochain<S>) -> CechCochain<S>,
    ) -> Matrix<S> {
        let mut m = Matrix::zeros(dst.cells.len(), src.cells.len());
        for (j, cell) in src.cells.iter().enumerate() {
            let c = self.cell_cochain(q, k, &[(cell.clone(), self.scheme.one())], w);
            let img = f(&c);
            debug_assert_eq!(img.bidegree(), (q2, k2));
            let parts = self.decompose(&img).expect("image decomposes");
            for (w2, cells) in parts {
                assert_eq!(w2, w, "weight is not preserved");
                let v = self.vector(dst, &cells).expect("image is regular");
                for (i, x) in v.into_iter().enumerate() {
                    if !x.is_zero() {
                        m[(i, j)] = x;
                    }
                }
            }
        }
        m
    }

    /// `δ : C^q(Ω^k)_w → C^{q+1}(Ω^k)_w`.
    fn delta(&self, q: usize, k: usize, w: &[i32]) -> Matrix<S> {
        let (src, dst) = (self.basis(q, k, w), self.basis(q + 1, k, w));
        self.matrix_of(&src, &dst, w, (q, k), (q + 1, k), |c| c.differential())
    }

    /// The total-complex pieces `K^n_w = ⊕_{q+k=n} C^q(Ω^k)_w`.
    fn total_blocks(&self, n: usize, w: &[i32]) -> Vec<(usize, Basis)> {
        (0..=n)
            .filter(|&q| q < self.scheme.num_charts() && n - q <= self.scheme.dim())
            .map(|q| (q, self.basis(q, n - q, w)))
            .collect()
    }

    /// `D = δ + (−1)^q d : K^n_w → K^{n+1}_w`.
    fn total_differential(&self, n: usize, w: &[i32]) -> Matrix<S> {
        let src = self.total_blocks(n, w);
        let dst = self.total_blocks(n + 1, w);
        let rows: usize = dst.iter().map(|(_, b)| b.cells.len()).sum();
        let cols: usize = src.iter().map(|(_, b)| b.cells.len()).sum();
        let mut m = Matrix::zeros(rows, cols);
        let offset = |blocks: &[(usize, Basis)], q: usize| -> Option<usize> {
            let mut o = 0;
            for (q2, b) in blocks {
                if *q2 == q {
                    return Some(o);
                }
                o += b.cells.len();
            }
            None
        };
        for (q, sb) in &src {
            let k = n - q;
            let c0 = offset(&src, *q).unwrap();
            if let Some(r0) = offset(&dst, q + 1) {
                let db = &dst.iter().find(|(q2, _)| *q2 == q + 1).unwrap().1;
                let d = self.matrix_of(sb, db, w, (*q, k), (q + 1, k), |c| c.differential());
                place(&mut m, &d, r0, c0, false);
            }
            if let Some(r0) = offset(&dst, *q) {
                let db = &dst.iter().find(|(q2, _)| q2 == q).unwrap().1;
                let d = self.matrix_of(sb, db, w, (*q, k), (*q, k + 1), |c| {
                    c.exterior_d().expect("scalar cochain")
                });
                place(&mut m, &d, r0, c0, q % 2 == 1);
            }
        }
        m
    }

    fn weight_bound(&self, extra: usize) -> i32 {
        let off = self
            .offsets
            .iter()
            .flatten()
            .map(|x| x.abs())
            .max()
            .unwrap_or(0);
        off + self.scheme.dim() as i32 + 2 + extra as i32
    }
}

fn place<S: Scalar>(m: &mut Matrix<S>, block: &Matrix<S>, r0: usize, c0: usize, negate: bool) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let x = &block[(i, j)];
            if !x.is_zero() {
                m[(r0 + i, c0 + j)] = if negate { -x.clone() } else { x.clone() };
            }
        }
    }
}

/// All weights in the box `|w_i| ≤ bound`.
fn weight_box(n: usize, bound: i32) -> Vec<Weight> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w: Weight| {
                (-bound..=bound).map(move |x| {
                    let mut w2 = w.clone();
                    w2.push(x);
                    w2
                })
            })
            .collect();
    }
    out
}

/// One cohomology group with representatives.
#[derive(Clone, Debug)]
pub struct CohomologyGroupResult<S: Scalar> {
    pub group: HomologyGroup,
    /// Cocycles whose classes form a basis (fields only; empty otherwise).
    pub basis: Vec<CechCochain<S>>,
    /// Weights contributing to the group.
    pub weights: Vec<Weight>,
}

/// Complement of `im` inside `ker` over a field: kernel columns that raise
/// the rank of the image span.
fn complement<S: Scalar>(params: &S::Params, ker: &Matrix<S>, im: &Matrix<S>) -> Vec<Vec<S>> {
    let mut span = im.clone();
    let mut r = rank(params, &span);
    let mut out = Vec::new();
    for j in 0..ker.cols() {
        let col = Matrix::from_vec(ker.rows(), 1, ker.column(j));
        let next = if span.cols() == 0 { col.clone() } else { span.hstack(&col) };
        let r2 = rank(params, &next);
        if r2 > r {
            out.push(ker.column(j));
            span = next;
            r = r2;
        }
    }
    out
}

/// `H^q(X, Ω^k ⊗ L)` summed over the weights with `|w_i| ≤ bound`
/// (default: twist offset plus `dim + 2`).
pub fn cohomology_group<S: Scalar>(
    scheme: &Arc<CoveredScheme<S>>,
    sheaf: &SheafSpec<S>,
    q: usize,
    bound: Option<i32>,
) -> Result<CohomologyGroupResult<S>> {
    let g = Graded::new(scheme.clone(), sheaf.coefficients())?;
    let k = sheaf.form_degree;
    let params = scheme.params();
    let field = S::is_field(params);
    let bound = bound.unwrap_or_else(|| g.weight_bound(k));
    let mut total = 0usize;
    let mut torsion: Vec<BigInt> = Vec::new();
    let mut basis = Vec::new();
    let mut weights = Vec::new();
    for w in weight_box(scheme.dim(), bound) {
        let here = g.basis(q, k, &w);
        if here.cells.is_empty() {
            continue;
        }
        let out = g.delta(q, k, &w);
        let inc = if q == 0 {
            Matrix::zeros(here.cells.len(), 0)
        } else {
            g.delta(q - 1, k, &w)
        };
        let r_out = rank(params, &out);
        let f_in = invariant_factors(params, &inc);
        let h = here.cells.len() - r_out - f_in.len();
        torsion.extend(crate::homcore::torsion_orders(&f_in));
        if h > 0 {
            weights.push(w.clone());
            total += h;
            if field {
                let ker = kernel(params, &out);
                for v in complement(params, &ker, &inc) {
                    basis.push(g.cochain(q, k, &w, &v));
                }
            }
        }
    }
    torsion.sort();
    Ok(CohomologyGroupResult {
        group: HomologyGroup {
            degree: q as i64,
            rank: total,
            torsion,
        },
        basis,
        weights,
    })
}

/// All `H^q(X, Ω^k ⊗ L)` for `q` up to the number of charts minus one.
pub fn cohomology_report<S: Scalar>(
    scheme: &Arc<CoveredScheme<S>>,
    sheaf: &SheafSpec<S>,
    bound: Option<i32>,
) -> Result<HomologyReport> {
    let groups = (0..scheme.num_charts())
        .map(|q| cohomology_group(scheme, sheaf, q, bound).map(|r| r.group))
        .collect::<Result<_>>()?;
    Ok(HomologyReport { groups })
}

/// Hypercohomology of the algebraic de Rham complex through the Čech–de Rham
/// total complex with `D = δ + (−1)^q d`.
pub fn de_rham_cohomology<S: Scalar>(
    scheme: &Arc<CoveredScheme<S>>,
    bound: Option<i32>,
) -> Result<HomologyReport> {
    let g = Graded::new(scheme.clone(), Coefficients::Scalar)?;
    let params = scheme.params();
    let top = scheme.num_charts() - 1 + scheme.dim();
    let bound = bound.unwrap_or_else(|| g.weight_bound(0));
    let mut ranks = vec![0usize; top + 1];
    let mut torsion: Vec<Vec<BigInt>> = vec![Vec::new(); top + 1];
    for w in weight_box(scheme.dim(), bound) {
        let dims: Vec<usize> = (0..=top)
            .map(|n| g.total_blocks(n, &w).iter().map(|(_, b)| b.cells.len()).sum())
            .collect();
        if dims.iter().all(|&d| d == 0) {
            continue;
        }
        let factors: Vec<Vec<S>> = (0..top)
            .map(|n| invariant_factors(params, &g.total_differential(n, &w)))
            .collect();
        for n in 0..=top {
            let out = if n < top { factors[n].len() } else { 0 };
            let inc = if n > 0 { &factors[n - 1][..] } else { &[][..] };
            ranks[n] += dims[n] - out - inc.len();
            torsion[n].extend(crate::homcore::torsion_orders(inc));
        }
    }
    Ok(HomologyReport {
        groups: (0..=top)
            .map(|n| {
                let mut t = torsion[n].clone();
                t.sort();
                HomologyGroup {
                    degree: n as i64,
                    rank: ranks[n],
                    torsion: t,
                }
            })
            .collect(),
    })
}

fn require_cocycle<S: Scalar>(c: &CechCochain<S>) -> Result<()> {
    if c.differential().is_zero() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "cochain of bidegree {:?} is not a cocycle",
            c.bidegree()
        )))
    }
}

/// Do two cocycles of `Ω^k ⊗ L` define the same class? Decided by solving
/// `a − b = δs` weight by weight, with `s` supported on the weights of
/// `a − b`.
pub fn class_equal<S: Scalar>(a: &CechCochain<S>, b: &CechCochain<S>) -> Result<bool> {
    require_cocycle(a)?;
    require_cocycle(b)?;
    let diff = a.sub(b)?;
    is_coboundary(&diff)
}

/// Is the cochain `δ` of something?
pub fn is_coboundary<S: Scalar>(c: &CechCochain<S>) -> Result<bool> {
    let g = Graded::new(c.scheme().clone(), c.coefficients().clone())?;
    let (q, k) = c.bidegree();
    let params = c.scheme().params();
    for (w, cells) in g.decompose(c)? {
        let v = g.vector(&g.basis(q, k, &w), &cells)?;
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        if q == 0 {
            return Ok(false);
        }
        if solve(params, &g.delta(q - 1, k, &w), &v).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Coefficients `λ` with `c = Σ λ_i·basis_i + δs`, if any.
pub fn class_coordinates<S: Scalar>(
    c: &CechCochain<S>,
    basis: &[CechCochain<S>],
) -> Result<Option<Vec<S>>> {
    require_cocycle(c)?;
    for b in basis {
        require_cocycle(b)?;
        if b.bidegree() != c.bidegree() {
            let ((p, q), (r, s)) = (b.bidegree(), c.bidegree());
            return Err(Error::BidegreeMismatch(p, q, r, s));
        }
    }
    let g = Graded::new(c.scheme().clone(), c.coefficients().clone())?;
    let (q, k) = c.bidegree();
    let params = c.scheme().params();
    let parts_c = g.decompose(c)?;
    let parts_b: Vec<_> = basis.iter().map(|b| g.decompose(b)).collect::<Result<_>>()?;
    let weights: BTreeSet<Weight> = parts_c
        .keys()
        .chain(parts_b.iter().flat_map(|p| p.keys()))
        .cloned()
        .collect();
    // unknowns: λ (one per basis element), then s_w for each weight
    let m = basis.len();
    let mut blocks = Vec::new();
    let (mut rows, mut cols) = (0usize, m);
    for w in &weights {
        let here = g.basis(q, k, w);
        let inc = if q == 0 {
            Matrix::zeros(here.cells.len(), 0)
        } else {
            g.delta(q - 1, k, w)
        };
        let rhs = g.vector(&here, parts_c.get(w).map_or(&[][..], |v| &v[..]))?;
        let lam = parts_b
            .iter()
            .map(|p| g.vector(&here, p.get(w).map_or(&[][..], |v| &v[..])))
            .collect::<Result<Vec<_>>>()?;
        rows += here.cells.len();
        cols += inc.cols();
        blocks.push((here.cells.len(), inc, rhs, lam));
    }
    let mut sys = Matrix::zeros(rows, cols);
    let mut rhs_all = Vec::with_capacity(rows);
    let (mut r0, mut c0) = (0, m);
    for (len, inc, rhs, lam) in blocks {
        for (j, col) in lam.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                sys[(r0 + i, j)] = x.clone();
            }
        }
        place(&mut sys, &inc, r0, c0, false);
        rhs_all.extend(rhs);
        r0 += len;
        c0 += inc.cols();
    }
    Ok(solve(params, &sys, &rhs_all).map(|x| x[..m].to_vec()))
}

/// A cochain of the Čech–de Rham total complex in total degree `n`: one
/// scalar cochain of bidegree `(q, n − q)` for each `q`.
#[derive(Clone, Debug)]
pub struct TotalCochain<S: Scalar> {
    degree: usize,
    parts: Vec<CechCochain<S>>,
}

impl<S: Scalar> TotalCochain<S> {
    pub fn zero(scheme: &Arc<CoveredScheme<S>>, degree: usize) -> Self {
        TotalCochain {
            degree,
            parts: (0..=degree)
                .map(|q| CechCochain::zero(scheme.clone(), Coefficients::Scalar, q, degree - q))
                .collect(),
        }
    }

    /// Regard a Hodge cochain as an element of the total complex.
    pub fn from_hodge(c: &CechCochain<S>) -> Result<Self> {
        if !c.coefficients().is_scalar() {
            return Err(Error::InvalidArgument("total complex needs function coefficients".into()));
        }
        let (q, k) = c.bidegree();
        let mut t = Self::zero(c.scheme(), q + k);
        t.parts[q] = c.clone();
        Ok(t)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn part(&self, q: usize) -> &CechCochain<S> {
        &self.parts[q]
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::ShapeMismatch(format!(
                "total degrees {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(TotalCochain {
            degree: self.degree,
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a.add(b))
                .collect::<Result<_>>()?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale_i64(-1))
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        TotalCochain {
            degree: self.degree,
            parts: self.parts.iter().map(|p| p.scale_i64(c)).collect(),
        }
    }

    /// `D = δ + (−1)^q d`.
    pub fn differential(&self) -> Self {
        let scheme = self.parts[0].scheme().clone();
        let mut out = Self::zero(&scheme, self.degree + 1);
        for (q, c) in self.parts.iter().enumerate() {
            let dc = c.differential();
            out.parts[q + 1] = out.parts[q + 1].add(&dc).expect("same bidegree");
            let ext = c.exterior_d().expect("scalar cochain");
            let ext = if q % 2 == 1 { ext.neg() } else { ext };
            out.parts[q] = out.parts[q].add(&ext).expect("same bidegree");
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.is_zero())
    }
}

/// Equality of de Rham classes of two `D`-cocycles.
pub fn de_rham_class_equal<S: Scalar>(a: &TotalCochain<S>, b: &TotalCochain<S>) -> Result<bool> {
    for c in [a, b] {
        if !c.differential().is_zero() {
            return Err(Error::InvalidArgument("not a cocycle of the total complex".into()));
        }
    }
    let diff = a.sub(b)?;
    let scheme = diff.parts[0].scheme().clone();
    let g = Graded::new(scheme.clone(), Coefficients::Scalar)?;
    let n = diff.degree;
    let params = scheme.params();
    let mut by_weight: BTreeMap<Weight, Vec<(usize, Cell, S)>> = BTreeMap::new();
    for (q, part) in diff.parts.iter().enumerate() {
        for (w, cells) in g.decompose(part)? {
            by_weight
                .entry(w)
                .or_default()
                .extend(cells.into_iter().map(|(c, s)| (q, c, s)));
        }
    }
    for (w, cells) in by_weight {
        let blocks = g.total_blocks(n, &w);
        let mut v = Vec::new();
        for (q, b) in &blocks {
            let mine: Vec<(Cell, S)> = cells
                .iter()
                .filter(|(q2, _, _)| q2 == q)
                .map(|(_, c, s)| (c.clone(), s.clone()))
                .collect();
            v.extend(g.vector(b, &mine)?);
        }
        if cells.iter().any(|(q, _, _)| !blocks.iter().any(|(q2, _)| q2 == q)) {
            return Err(Error::ShapeMismatch("component outside the total complex".into()));
        }
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        if n == 0 {
            return Ok(false);
        }
        if solve(params, &g.total_differential(n - 1, &w), &v).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
