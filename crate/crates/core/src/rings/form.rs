use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::laurent::Exponent;
use super::{LaurentPoly, Scalar};
use crate::error::{Error, Result};

/// A homogeneous differential form `Σ f_I dx_I` over a Laurent ring.
///
/// Index tuples are strictly increasing; zero coefficients are never stored.
#[derive(Clone)]
pub struct DifferentialForm<S> {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, LaurentPoly<S>>,
}

/// Sign of the shuffle sorting `a ++ b`, or `None` if they share an index.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for &i in a {
        for &j in b {
            if i == j {
                return None;
            }
            if i > j {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((merged, inversions % 2 == 1))
}

impl<S: Scalar> DifferentialForm<S> {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        DifferentialForm {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(f: LaurentPoly<S>) -> Self {
        let nvars = f.nvars();
        Self::term(nvars, vec![], f)
    }

    /// `f · dx_I`; `I` is sorted and a repeated index gives zero.
    pub fn term(nvars: usize, mut index: Vec<usize>, f: LaurentPoly<S>) -> Self {
        let degree = index.len();
        let mut out = Self::zero(nvars, degree);
        let mut sign = false;
        // bubble sort to track the permutation sign
        for i in 0..index.len() {
            for j in 0..index.len() - 1 - i {
                if index[j] > index[j + 1] {
                    index.swap(j, j + 1);
                    sign = !sign;
                }
            }
        }
        if index.windows(2).any(|w| w[0] == w[1]) {
            return out;
        }
        assert!(index.iter().all(|&i| i < nvars), "form index out of range");
        let f = if f.nvars() == 0 && nvars > 0 {
            f + LaurentPoly::zero_in(nvars)
        } else {
            f
        };
        out.add_term(index, if sign { -f } else { f });
        out
    }

    /// `dx_i` with coefficient 1.
    pub fn dx(params: &S::Params, nvars: usize, i: usize) -> Self {
        Self::term(
            nvars,
            vec![i],
            LaurentPoly::constant(nvars, S::from_i64(params, 1)),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &LaurentPoly<S>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, index: &[usize]) -> LaurentPoly<S> {
        self.terms
            .get(index)
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero_in(self.nvars))
    }

    /// Iterate over single-monomial pieces `(I, e, c)` meaning `c·x^e dx_I`.
    pub fn monomial_terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Exponent, &S)> {
        self.terms
            .iter()
            .flat_map(|(i, f)| f.terms().map(move |(e, c)| (i, e, c)))
    }

    fn add_term(&mut self, index: Vec<usize>, f: LaurentPoly<S>) {
        if f.is_zero() {
            return;
        }
        match self.terms.remove(&index) {
            None => {
                self.terms.insert(index, f);
            }
            Some(old) => {
                let s = old + f;
                if !s.is_zero() {
                    self.terms.insert(index, s);
                }
            }
        }
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "chart dimension mismatch");
        assert_eq!(self.degree, other.degree, "form degree mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut out = self.clone();
        for (i, f) in &other.terms {
            out.add_term(i.clone(), f.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        DifferentialForm {
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(i, f)| (i.clone(), -f.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        for (i, f) in &self.terms {
            out.add_term(i.clone(), f.scale(c));
        }
        out
    }

    pub fn mul_function(&self, g: &LaurentPoly<S>) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        for (i, f) in &self.terms {
            out.add_term(i.clone(), f.clone() * g.clone());
        }
        out
    }

    /// Exterior product; panics on a chart-dimension mismatch (see
    /// [`form_wedge`] for the checked variant).
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "chart dimension mismatch");
        let mut out = Self::zero(self.nvars, self.degree + other.degree);
        for (i, f) in &self.terms {
            for (j, g) in &other.terms {
                if let Some((k, neg)) = merge_sign(i, j) {
                    let prod = f.clone() * g.clone();
                    out.add_term(k, if neg { -prod } else { prod });
                }
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self, params: &S::Params) -> Self {
        let mut out = Self::zero(self.nvars, self.degree + 1);
        for (i, f) in &self.terms {
            for k in 0..self.nvars {
                if i.contains(&k) {
                    continue;
                }
                let df = f.partial(k, params);
                if df.is_zero() {
                    continue;
                }
                if let Some((idx, neg)) = merge_sign(&[k], i) {
                    out.add_term(idx, if neg { -df } else { df });
                }
            }
        }
        out
    }

    /// Pull back along the monomial chart map `x_j ↦ t^{rows[j]}`.
    pub fn pullback_monomial(
        &self,
        rows: &[Exponent],
        target_nvars: usize,
        params: &S::Params,
    ) -> Self {
        // images of dx_j:  d(t^m) = Σ_k m_k t^{m - e_k} dt_k
        let dx_images: Vec<Self> = rows
            .iter()
            .map(|m| {
                let mut img = Self::zero(target_nvars, 1);
                for (k, &mk) in m.iter().enumerate() {
                    if mk == 0 {
                        continue;
                    }
                    let mut e = m.clone();
                    e[k] -= 1;
                    img.add_term(
                        vec![k],
                        LaurentPoly::monomial(e, S::from_i64(params, mk as i64)),
                    );
                }
                img
            })
            .collect();
        let mut out = Self::zero(target_nvars, self.degree);
        for (i, f) in &self.terms {
            let mut piece =
                Self::function(f.substitute_monomial(rows, target_nvars) + LaurentPoly::zero_in(target_nvars));
            for &j in i {
                piece = piece.wedge(&dx_images[j]);
            }
            out = out.add(&piece);
        }
        out
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DifferentialForm<T> {
        let mut out = DifferentialForm::zero(self.nvars, self.degree);
        for (i, g) in &self.terms {
            out.add_term(i.clone(), g.map_coeffs(&f));
        }
        out
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(i, f)| {
                let dx: Vec<String> = i
                    .iter()
                    .map(|&k| {
                        format!(
                            "d{}",
                            names.get(k).cloned().unwrap_or_else(|| format!("x{k}"))
                        )
                    })
                    .collect();
                if dx.is_empty() {
                    f.fmt_with(names)
                } else {
                    format!("({})*{}", f.fmt_with(names), dx.join("^"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<S: Scalar> PartialEq for DifferentialForm<S> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.degree == other.degree && self.terms == other.terms
    }
}

impl<S: Scalar> fmt::Debug for DifferentialForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}

/// Checked exterior product.
pub fn form_wedge<S: Scalar>(
    u: &DifferentialForm<S>,
    v: &DifferentialForm<S>,
) -> Result<DifferentialForm<S>> {
    if u.nvars() != v.nvars() {
        return Err(Error::DimensionMismatch {
            left: u.nvars(),
            right: v.nvars(),
        });
    }
    Ok(u.wedge(v))
}
