use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::bundle::{FnMatrix, VectorBundle};
use super::scheme::CoveredScheme;
use crate::error::{Error, Result};
use crate::rings::{DifferentialForm, LaurentPoly, Scalar};

/// A matrix of differential forms of one common degree.
#[derive(Clone)]
pub struct FormMatrix<S> {
    rows: usize,
    cols: usize,
    degree: usize,
    entries: Vec<DifferentialForm<S>>,
}

impl<S: Scalar> FormMatrix<S> {
    pub fn zero(nvars: usize, rows: usize, cols: usize, degree: usize) -> Self {
        FormMatrix {
            rows,
            cols,
            degree,
            entries: vec![DifferentialForm::zero(nvars, degree); rows * cols],
        }
    }

    pub fn scalar(form: DifferentialForm<S>) -> Self {
        FormMatrix {
            rows: 1,
            cols: 1,
            degree: form.degree(),
            entries: vec![form],
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<DifferentialForm<S>>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        let degree = entries.first().map_or(0, |f| f.degree());
        assert!(entries.iter().all(|f| f.degree() == degree), "mixed form degrees");
        FormMatrix {
            rows,
            cols,
            degree,
            entries,
        }
    }

    /// Functions as 0-forms.
    pub fn from_functions(m: &FnMatrix<S>, nvars: usize) -> Self {
        Self::from_entries(
            m.rows(),
            m.cols(),
            m.data()
                .iter()
                .map(|f| DifferentialForm::function(f.clone() + LaurentPoly::zero_in(nvars)))
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn entry(&self, i: usize, j: usize) -> &DifferentialForm<S> {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[DifferentialForm<S>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|f| f.is_zero())
    }

    fn nvars(&self) -> usize {
        self.entries.first().map_or(0, |f| f.nvars())
    }

    fn zip(&self, other: &Self, f: impl Fn(&DifferentialForm<S>, &DifferentialForm<S>) -> DifferentialForm<S>) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        FormMatrix {
            rows: self.rows,
            cols: self.cols,
            degree: self.degree,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn map(&self, f: impl Fn(&DifferentialForm<S>) -> DifferentialForm<S>) -> Self {
        let entries: Vec<_> = self.entries.iter().map(f).collect();
        let degree = entries.first().map_or(self.degree, |f| f.degree());
        FormMatrix {
            rows: self.rows,
            cols: self.cols,
            degree,
            entries,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|a| a.scale(c))
    }

    /// Matrix product with wedge of entries.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let n = self.nvars().max(other.nvars());
        let degree = self.degree + other.degree;
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for k in 0..other.cols {
                let mut acc = DifferentialForm::zero(n, degree);
                for j in 0..self.cols {
                    let (a, b) = (self.entry(i, j), other.entry(j, k));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.wedge(b));
                    }
                }
                entries.push(acc);
            }
        }
        FormMatrix {
            rows: self.rows,
            cols: other.cols,
            degree,
            entries,
        }
    }

    /// `G · M` for a matrix of functions `G`.
    pub fn left_fn(&self, g: &FnMatrix<S>) -> Self {
        Self::from_functions(g, self.nvars()).mul(self)
    }

    /// `M · G` for a matrix of functions `G`.
    pub fn right_fn(&self, g: &FnMatrix<S>) -> Self {
        self.mul(&Self::from_functions(g, self.nvars()))
    }

    pub fn trace(&self) -> DifferentialForm<S> {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        (0..self.rows).fold(DifferentialForm::zero(self.nvars(), self.degree), |acc, i| {
            acc.add(self.entry(i, i))
        })
    }

    pub fn d(&self, params: &S::Params) -> Self {
        FormMatrix {
            rows: self.rows,
            cols: self.cols,
            degree: self.degree + 1,
            entries: self.entries.iter().map(|f| f.d(params)).collect(),
        }
    }

    fn pullback(&self, x: &CoveredScheme<S>, a: usize, b: usize) -> Self {
        if a == b {
            return self.clone();
        }
        self.map(|f| f.pullback_monomial(x.map_rows(a, b), x.dim(), x.params()))
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.rows == 1 && self.cols == 1 {
            return self.entries[0].fmt_with(names);
        }
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = (0..self.cols).map(|j| self.entry(i, j).fmt_with(names)).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

impl<S: Scalar> PartialEq for FormMatrix<S> {
    fn eq(&self, other: &Self) -> bool {
        (self.rows, self.cols, self.degree) == (other.rows, other.cols, other.degree)
            && self.entries == other.entries
    }
}

impl<S: Scalar> fmt::Debug for FormMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}

/// What a cochain's values are sections of (before tensoring with forms).
#[derive(Clone, Debug)]
pub enum Coefficients<S: Scalar> {
    /// Functions.
    Scalar,
    /// Sections of a line bundle, in the frame of the last chart.
    Twisted(Arc<VectorBundle<S>>),
    /// Endomorphisms of a bundle, in the frame of the last chart.
    Endo(Arc<VectorBundle<S>>),
}

impl<S: Scalar> Coefficients<S> {
    fn shape(&self) -> usize {
        match self {
            Coefficients::Endo(e) => e.rank(),
            _ => 1,
        }
    }

    fn same(&self, other: &Self) -> bool {
        match (self, other) {
            (Coefficients::Scalar, Coefficients::Scalar) => true,
            (Coefficients::Twisted(a), Coefficients::Twisted(b))
            | (Coefficients::Endo(a), Coefficients::Endo(b)) => {
                Arc::ptr_eq(a, b) || a.transitions() == b.transitions()
            }
            _ => false,
        }
    }

    pub fn is_scalar(&self) -> bool {
        matches!(self, Coefficients::Scalar)
    }
}

/// A Čech cochain of differential forms.
///
/// The value on an increasing tuple `(α_0 < … < α_q)` is written in the
/// coordinates (and frame) of the last chart `α_q`. Missing tuples are zero.
#[derive(Clone, Debug)]
pub struct CechCochain<S: Scalar> {
    scheme: Arc<CoveredScheme<S>>,
    coeffs: Coefficients<S>,
    cech_degree: usize,
    form_degree: usize,
    values: BTreeMap<Vec<usize>, FormMatrix<S>>,
}

impl<S: Scalar> CechCochain<S> {
    pub fn zero(
        scheme: Arc<CoveredScheme<S>>,
        coeffs: Coefficients<S>,
        cech_degree: usize,
        form_degree: usize,
    ) -> Self {
        CechCochain {
            scheme,
            coeffs,
            cech_degree,
            form_degree,
            values: BTreeMap::new(),
        }
    }

    /// Validating constructor: tuples must be increasing of length `q + 1`,
    /// values of the right shape and form degree, and regular on the
    /// intersection (`NotExpressible` otherwise).
    pub fn new(
        scheme: Arc<CoveredScheme<S>>,
        coeffs: Coefficients<S>,
        cech_degree: usize,
        form_degree: usize,
        values: BTreeMap<Vec<usize>, FormMatrix<S>>,
    ) -> Result<Self> {
        let r = coeffs.shape();
        let mut out = Self::zero(scheme, coeffs, cech_degree, form_degree);
        for (t, v) in values {
            if t.len() != cech_degree + 1
                || t.windows(2).any(|w| w[0] >= w[1])
                || t.iter().any(|&a| a >= out.scheme.num_charts())
            {
                return Err(Error::InvalidArgument(format!(
                    "{t:?} is not an increasing {}-tuple of charts",
                    cech_degree + 1
                )));
            }
            if v.rows() != r || v.cols() != r {
                return Err(Error::ShapeMismatch(format!(
                    "value on {t:?} is {}x{}, expected {r}x{r}",
                    v.rows(),
                    v.cols()
                )));
            }
            if v.entries().iter().any(|f| f.degree() != form_degree || f.nvars() != out.scheme.dim()) {
                return Err(Error::ShapeMismatch(format!(
                    "value on {t:?} is not a {form_degree}-form on a {}-dimensional chart",
                    out.scheme.dim()
                )));
            }
            let inv = out.scheme.tuple_inverted(&t);
            for f in v.entries() {
                for (_, e, _) in f.monomial_terms() {
                    if !out.scheme.is_regular_exponent(&inv, e) {
                        return Err(Error::NotExpressible {
                            tuple: t.clone(),
                            detail: f.fmt_with(out.scheme.chart_names(*t.last().unwrap())),
                        });
                    }
                }
            }
            out.insert(t, v);
        }
        Ok(out)
    }

    /// A scalar 0-cochain that is `f_a` on chart `a`.
    pub fn functions(scheme: Arc<CoveredScheme<S>>, fs: Vec<LaurentPoly<S>>) -> Result<Self> {
        let n = scheme.dim();
        let values = fs
            .into_iter()
            .enumerate()
            .map(|(a, f)| {
                (
                    vec![a],
                    FormMatrix::scalar(DifferentialForm::function(f + LaurentPoly::zero_in(n))),
                )
            })
            .collect();
        Self::new(scheme, Coefficients::Scalar, 0, 0, values)
    }

    /// The unit `1 ∈ C^0(O)`.
    pub fn one(scheme: Arc<CoveredScheme<S>>) -> Self {
        let m = scheme.num_charts();
        let n = scheme.dim();
        let one = LaurentPoly::constant(n, scheme.one());
        Self::functions(scheme, vec![one; m]).expect("constants are regular")
    }

    fn insert(&mut self, t: Vec<usize>, v: FormMatrix<S>) {
        if v.is_zero() {
            self.values.remove(&t);
        } else {
            self.values.insert(t, v);
        }
    }

    pub fn scheme(&self) -> &Arc<CoveredScheme<S>> {
        &self.scheme
    }

    pub fn coefficients(&self) -> &Coefficients<S> {
        &self.coeffs
    }

    pub fn cech_degree(&self) -> usize {
        self.cech_degree
    }

    pub fn form_degree(&self) -> usize {
        self.form_degree
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.cech_degree, self.form_degree)
    }

    pub fn values(&self) -> &BTreeMap<Vec<usize>, FormMatrix<S>> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, t: &[usize]) -> FormMatrix<S> {
        self.values.get(t).cloned().unwrap_or_else(|| {
            let r = self.coeffs.shape();
            FormMatrix::zero(self.scheme.dim(), r, r, self.form_degree)
        })
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.scheme, &other.scheme) {
            return Err(Error::InvalidArgument("cochains on different schemes".into()));
        }
        if self.bidegree() != other.bidegree() {
            let ((a, b), (c, d)) = (self.bidegree(), other.bidegree());
            return Err(Error::BidegreeMismatch(a, b, c, d));
        }
        if !self.coeffs.same(&other.coeffs) {
            return Err(Error::InvalidArgument("cochains with different coefficients".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (t, v) in &other.values {
            let s = out.value(t).add(v);
            out.insert(t.clone(), s);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.values.values_mut() {
            *v = v.neg();
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.scheme.clone(), self.coeffs.clone(), self.cech_degree, self.form_degree);
        for (t, v) in &self.values {
            out.insert(t.clone(), v.scale(c));
        }
        out
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        self.scale(&S::from_i64(self.scheme.params(), c))
    }

    /// Move a value from chart `a` (coordinates and frame) to chart `b`.
    pub fn transport(&self, v: &FormMatrix<S>, a: usize, b: usize) -> FormMatrix<S> {
        transport(&self.scheme, &self.coeffs, v, a, b)
    }

    /// Čech differential: `(δc)_{α_0…α_{q+1}} = Σ_i (−1)^i c_{…α̂_i…}`, the
    /// last term moved into the last chart.
    pub fn differential(&self) -> Self {
        let q = self.cech_degree;
        let mut out = Self::zero(self.scheme.clone(), self.coeffs.clone(), q + 1, self.form_degree);
        for t in self.scheme.tuples(q + 2) {
            let mut acc: Option<FormMatrix<S>> = None;
            for i in 0..t.len() {
                let mut face = t.clone();
                face.remove(i);
                let Some(v) = self.values.get(&face) else { continue };
                let mut v = if i == q + 1 {
                    self.transport(v, t[q], t[q + 1])
                } else {
                    v.clone()
                };
                if i % 2 == 1 {
                    v = v.neg();
                }
                acc = Some(match acc {
                    None => v,
                    Some(a) => a.add(&v),
                });
            }
            if let Some(v) = acc {
                out.insert(t, v);
            }
        }
        out
    }

    /// Exterior derivative on each value (function coefficients only).
    pub fn exterior_d(&self) -> Result<Self> {
        if !self.coeffs.is_scalar() {
            return Err(Error::Unsupported("d of bundle-valued cochains".into()));
        }
        let mut out = Self::zero(self.scheme.clone(), Coefficients::Scalar, self.cech_degree, self.form_degree + 1);
        for (t, v) in &self.values {
            out.insert(t.clone(), v.d(self.scheme.params()));
        }
        Ok(out)
    }

    /// Cup product `(a⌣b)_{α_0…α_{p+q}} = (−1)^{p·w_b} a_{α_0…α_p} ∧ b_{α_p…α_{p+q}}`
    /// with the front factor moved into the last chart.
    pub fn cup(&self, other: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&self.scheme, &other.scheme) {
            return Err(Error::InvalidArgument("cochains on different schemes".into()));
        }
        use Coefficients::*;
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Scalar, c) | (c, Scalar) => c.clone(),
            (Endo(a), Endo(_)) if self.coeffs.same(&other.coeffs) => Endo(a.clone()),
            (Twisted(a), Twisted(b)) => Twisted(Arc::new(a.tensor(b)?)),
            _ => {
                return Err(Error::Unsupported(
                    "cup of cochains with these coefficient bundles".into(),
                ))
            }
        };
        let (p, q) = (self.cech_degree, other.cech_degree);
        let negate = (p * other.form_degree) % 2 == 1;
        let mut out = Self::zero(self.scheme.clone(), coeffs, p + q, self.form_degree + other.form_degree);
        for t in self.scheme.tuples(p + q + 1) {
            let Some(a) = self.values.get(&t[..=p]) else { continue };
            let Some(b) = other.values.get(&t[p..]) else { continue };
            let a = self.transport(a, t[p], t[p + q]);
            let mut v = match (a.rows(), b.rows()) {
                (1, r) if r > 1 => b.map(|f| a.entry(0, 0).wedge(f)),
                (r, 1) if r > 1 => a.map(|f| f.wedge(b.entry(0, 0))),
                _ => a.mul(b),
            };
            if negate {
                v = v.neg();
            }
            out.insert(t, v);
        }
        Ok(out)
    }

    /// `tr` of an endomorphism-valued cochain.
    pub fn trace(&self) -> Result<Self> {
        if !matches!(self.coeffs, Coefficients::Endo(_)) {
            return Err(Error::InvalidArgument("trace needs an endomorphism-valued cochain".into()));
        }
        let mut out = Self::zero(self.scheme.clone(), Coefficients::Scalar, self.cech_degree, self.form_degree);
        for (t, v) in &self.values {
            out.insert(t.clone(), FormMatrix::scalar(v.trace()));
        }
        Ok(out)
    }

    /// Replace the coefficient bundle, keeping the values. Used to regard a
    /// cochain as taking values in an isomorphic bundle.
    pub fn with_coefficients(&self, coeffs: Coefficients<S>) -> Result<Self> {
        Self::new(
            self.scheme.clone(),
            coeffs,
            self.cech_degree,
            self.form_degree,
            self.values.clone(),
        )
    }
}

pub(crate) fn transport<S: Scalar>(
    x: &CoveredScheme<S>,
    coeffs: &Coefficients<S>,
    v: &FormMatrix<S>,
    a: usize,
    b: usize,
) -> FormMatrix<S> {
    if a == b {
        return v.clone();
    }
    let moved = v.pullback(x, a, b);
    match coeffs {
        Coefficients::Scalar => moved,
        Coefficients::Twisted(l) => moved.left_fn(&l.transition(a, b, b)),
        Coefficients::Endo(e) => {
            let g = e.transition(a, b, b);
            let g_inv = e.transition(b, a, b);
            moved.left_fn(&g_inv).right_fn(&g)
        }
    }
}

impl<S: Scalar> PartialEq for CechCochain<S> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.scheme, &other.scheme)
            && self.bidegree() == other.bidegree()
            && self.coeffs.same(&other.coeffs)
            && self.values == other.values
    }
}

impl<S: Scalar> fmt::Display for CechCochain<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(t, v)| {
                let names = self.scheme.chart_names(*t.last().unwrap());
                let idx: Vec<String> = t.iter().map(|a| a.to_string()).collect();
                format!("[{}] {}", idx.join(""), v.fmt_with(names))
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Zn;
    use num_rational::BigRational;

    type Q = BigRational;

    fn dlog(x: &CoveredScheme<Q>, i: usize) -> DifferentialForm<Q> {
        let n = x.dim();
        let mut e = vec![0; n];
        e[i] = -1;
        DifferentialForm::term(n, vec![i], LaurentPoly::monomial(e, x.one()))
    }

    #[test]
    fn delta_squares_to_zero_on_p2() {
        let x = Arc::new(CoveredScheme::<Q>::projective((), 2).unwrap());
        let v = |e: Vec<i32>, c: i64| LaurentPoly::monomial(e, Q::from_integer(c.into()));
        let c0 = CechCochain::functions(
            x.clone(),
            vec![v(vec![2, 1], 3) + v(vec![0, 0], 1), v(vec![1, 0], -2), v(vec![0, 3], 5)],
        )
        .unwrap();
        let d1 = c0.differential();
        assert_eq!(d1.cech_degree(), 1);
        assert!(d1.differential().is_zero());
        // a 1-cochain of 1-forms
        let mut vals = BTreeMap::new();
        vals.insert(vec![0, 1], FormMatrix::scalar(dlog(&x, 0).scale(&Q::from_integer(4.into()))));
        vals.insert(vec![1, 2], FormMatrix::scalar(dlog(&x, 1)));
        let c1 = CechCochain::new(x.clone(), Coefficients::Scalar, 1, 1, vals).unwrap();
        assert!(c1.differential().differential().is_zero());
    }

    #[test]
    fn rejects_irregular_values() {
        let x = Arc::new(CoveredScheme::<Q>::projective((), 1).unwrap());
        let bad = CechCochain::functions(x.clone(), vec![LaurentPoly::monomial(vec![-1], x.one()), LaurentPoly::zero_in(1)]);
        assert!(matches!(bad, Err(Error::NotExpressible { .. })));
        let mut vals = BTreeMap::new();
        vals.insert(vec![0, 1], FormMatrix::scalar(dlog(&x, 0)));
        assert!(CechCochain::new(x, Coefficients::Scalar, 1, 1, vals).is_ok());
    }

    #[test]
    fn twisted_global_section_is_a_cocycle() {
        // the section x0·x1 of O(2) on ℙ¹: z on chart 0, w on chart 1
        let x = Arc::new(CoveredScheme::<Zn>::projective(7, 1).unwrap());
        let o2 = Arc::new(VectorBundle::line_bundle_o(x.clone(), 2).unwrap());
        let mut vals = BTreeMap::new();
        for a in 0..2 {
            vals.insert(
                vec![a],
                FormMatrix::scalar(DifferentialForm::function(LaurentPoly::monomial(vec![1], x.one()))),
            );
        }
        let s = CechCochain::new(x, Coefficients::Twisted(o2), 0, 0, vals).unwrap();
        assert!(s.differential().is_zero());
    }

    #[test]
    fn cup_with_one_is_identity() {
        let x = Arc::new(CoveredScheme::<Q>::projective((), 1).unwrap());
        let mut vals = BTreeMap::new();
        vals.insert(vec![0, 1], FormMatrix::scalar(dlog(&x, 0)));
        let h = CechCochain::new(x.clone(), Coefficients::Scalar, 1, 1, vals).unwrap();
        let one = CechCochain::one(x.clone());
        assert_eq!(one.cup(&h).unwrap(), h);
        assert_eq!(h.cup(&one).unwrap(), h);
        assert!(h.cup(&h).unwrap().is_zero());
    }
}
