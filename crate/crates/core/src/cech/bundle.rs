use std::collections::BTreeMap;
use std::sync::Arc;

use super::scheme::CoveredScheme;
use crate::error::{Error, Result};
use crate::homcore::{power_functor, PowerFunctor};
use crate::rings::{Exponent, LaurentPoly, Matrix, Scalar};

pub type FnMatrix<S> = Matrix<LaurentPoly<S>>;

/// A vector bundle given by transition matrices on a [`CoveredScheme`].
///
/// Frames change by `e_a = g_ab · e_b`, so `g_ab · g_bc = g_ac`. The matrix
/// for `a < b` is stored in chart-`b` coordinates.
#[derive(Clone, Debug)]
pub struct VectorBundle<S: Scalar> {
    scheme: Arc<CoveredScheme<S>>,
    rank: usize,
    trans: BTreeMap<(usize, usize), FnMatrix<S>>,
}

fn lp_params<S: Scalar>(x: &CoveredScheme<S>) -> (S::Params, usize) {
    (x.params().clone(), x.dim())
}

/// Make every entry carry the chart's variable count (constants parse with
/// zero variables).
fn widen<S: Scalar>(m: &FnMatrix<S>, n: usize) -> FnMatrix<S> {
    m.map(|f| f.clone() + LaurentPoly::zero_in(n))
}

impl<S: Scalar> VectorBundle<S> {
    /// Transitions `g_ab` for `a < b`, each written in chart-`b`
    /// coordinates. Checks entries are regular on the overlap, determinants
    /// are units there and the cocycle condition on triples.
    pub fn new(
        scheme: Arc<CoveredScheme<S>>,
        rank: usize,
        trans: BTreeMap<(usize, usize), FnMatrix<S>>,
    ) -> Result<Self> {
        let m = scheme.num_charts();
        let n = scheme.dim();
        let mut clean = BTreeMap::new();
        for a in 0..m {
            for b in a + 1..m {
                let g = trans.get(&(a, b)).ok_or_else(|| {
                    Error::InvalidBundle(format!("missing transition g_{a}{b}"))
                })?;
                if g.rows() != rank || g.cols() != rank {
                    return Err(Error::InvalidBundle(format!(
                        "g_{a}{b} is {}x{}, rank is {rank}",
                        g.rows(),
                        g.cols()
                    )));
                }
                let g = widen(g, n);
                let inv = scheme.tuple_inverted(&[a, b]);
                for f in g.data() {
                    if f.terms().any(|(e, _)| !scheme.is_regular_exponent(&inv, e)) {
                        return Err(Error::NotExpressible {
                            tuple: vec![a, b],
                            detail: format!(
                                "transition entry {}",
                                f.fmt_with(scheme.chart_names(b))
                            ),
                        });
                    }
                }
                let det = g.det();
                let unit = det
                    .inverse()
                    .map(|d| d.terms().all(|(e, _)| scheme.is_regular_exponent(&inv, e)))
                    .unwrap_or(false);
                if !unit {
                    return Err(Error::InvalidBundle(format!(
                        "det g_{a}{b} = {} is not a unit on the overlap",
                        det.fmt_with(scheme.chart_names(b))
                    )));
                }
                clean.insert((a, b), g);
            }
        }
        for &(a, b) in trans.keys() {
            if a >= b || b >= m {
                return Err(Error::InvalidBundle(format!("unexpected transition g_{a}{b}")));
            }
        }
        let e = VectorBundle {
            scheme,
            rank,
            trans: clean,
        };
        e.check_cocycle()?;
        Ok(e)
    }

    /// Same as [`VectorBundle::new`] but each `g_ab` is written in the
    /// coordinates of the first chart `a`.
    pub fn from_first_chart(
        scheme: Arc<CoveredScheme<S>>,
        rank: usize,
        trans: BTreeMap<(usize, usize), FnMatrix<S>>,
    ) -> Result<Self> {
        let n = scheme.dim();
        let moved = trans
            .into_iter()
            .map(|((a, b), g)| {
                let g = widen(&g, n);
                let h = g.map(|f| scheme.transport_function(f, a, b));
                ((a, b), h)
            })
            .collect();
        Self::new(scheme, rank, moved)
    }

    fn check_cocycle(&self) -> Result<()> {
        let m = self.scheme.num_charts();
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    let lhs = self.transition(a, b, c).mul(&self.transition(b, c, c));
                    if lhs != self.transition(a, c, c) {
                        return Err(Error::InvalidBundle(format!(
                            "cocycle condition fails on ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `O(d)` on projective space: `g_ab = (x_a/x_b)^d`.
    pub fn line_bundle_o(scheme: Arc<CoveredScheme<S>>, d: i64) -> Result<Self> {
        let n = scheme.dim();
        let m = scheme.num_charts();
        if m != n + 1 || scheme.name() != format!("P{n}") {
            return Err(Error::InvalidScheme(format!(
                "O(d) needs a projective space, got {}",
                scheme.name()
            )));
        }
        let d32 = i32::try_from(d).map_err(|_| Error::InvalidArgument(format!("twist {d}")))?;
        let mut trans = BTreeMap::new();
        for a in 0..m {
            for b in a + 1..m {
                // x_a/x_b is coordinate number a of chart b
                let mut e = vec![0i32; n];
                e[a] = d32;
                trans.insert(
                    (a, b),
                    Matrix::from_rows(vec![vec![LaurentPoly::monomial(e, scheme.one())]]),
                );
            }
        }
        Self::new(scheme, 1, trans)
    }

    pub fn trivial(scheme: Arc<CoveredScheme<S>>, rank: usize) -> Result<Self> {
        let m = scheme.num_charts();
        let id = Matrix::identity(&lp_params(&scheme), rank);
        let trans = (0..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .map(|k| (k, id.clone()))
            .collect();
        Self::new(scheme, rank, trans)
    }

    pub fn scheme(&self) -> &Arc<CoveredScheme<S>> {
        &self.scheme
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Stored transitions: `g_ab` for `a < b`, chart-`b` coordinates.
    pub fn transitions(&self) -> &BTreeMap<(usize, usize), FnMatrix<S>> {
        &self.trans
    }

    /// `g_ab` for any pair of charts, written in chart-`c` coordinates.
    pub fn transition(&self, a: usize, b: usize, c: usize) -> FnMatrix<S> {
        let x = &self.scheme;
        if a == b {
            return Matrix::identity(&lp_params(x), self.rank);
        }
        let (g, home) = if a < b {
            (self.trans[&(a, b)].clone(), b)
        } else {
            let inv = self.trans[&(b, a)]
                .inverse()
                .expect("transition is invertible on the overlap");
            (inv, a)
        };
        if home == c {
            g
        } else {
            g.map(|f| x.transport_function(f, home, c))
        }
    }

    /// Exponent and coefficient of each `g_ab` when `E` is a line bundle with
    /// monomial transitions.
    pub fn monomial_line(&self) -> Option<BTreeMap<(usize, usize), (Exponent, S)>> {
        if self.rank != 1 {
            return None;
        }
        self.trans
            .iter()
            .map(|(&k, g)| {
                g[(0, 0)]
                    .as_monomial()
                    .map(|(e, c)| (k, (e.clone(), c.clone())))
            })
            .collect()
    }

    fn from_parts(&self, rank: usize, trans: BTreeMap<(usize, usize), FnMatrix<S>>) -> Result<Self> {
        Self::new(self.scheme.clone(), rank, trans)
    }

    fn map_transitions(
        &self,
        rank: usize,
        f: impl Fn(&FnMatrix<S>) -> Result<FnMatrix<S>>,
    ) -> Result<Self> {
        let trans = self
            .trans
            .iter()
            .map(|(&k, g)| Ok((k, f(g)?)))
            .collect::<Result<_>>()?;
        self.from_parts(rank, trans)
    }

    fn same_scheme(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.scheme, &other.scheme) {
            Ok(())
        } else {
            Err(Error::InvalidBundle("bundles live on different schemes".into()))
        }
    }

    pub fn dual(&self) -> Result<Self> {
        self.map_transitions(self.rank, |g| {
            Ok(g.inverse()
                .ok_or_else(|| Error::InvalidBundle("singular transition".into()))?
                .transpose())
        })
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.same_scheme(other)?;
        let trans = self
            .trans
            .iter()
            .map(|(k, g)| (*k, g.block_diag(&other.trans[k])))
            .collect();
        self.from_parts(self.rank + other.rank, trans)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.same_scheme(other)?;
        let trans = self
            .trans
            .iter()
            .map(|(k, g)| (*k, g.kronecker(&other.trans[k])))
            .collect();
        self.from_parts(self.rank * other.rank, trans)
    }

    pub fn det(&self) -> Result<Self> {
        self.map_transitions(1, |g| Ok(Matrix::from_rows(vec![vec![g.det()]])))
    }

    /// `∧^k E`, `Sym^k E`, … through the power functors on the transitions.
    pub fn power(&self, functor: PowerFunctor, k: usize) -> Result<Self> {
        let (r, _) = power_functor(functor, k, &Matrix::<LaurentPoly<S>>::zeros(self.rank, self.rank));
        self.map_transitions(r, |g| Ok(power_functor(functor, k, g).1))
    }

    pub fn wedge(&self, k: usize) -> Result<Self> {
        self.power(PowerFunctor::Wedge, k)
    }

    /// The same bundle with frames changed by `e'_a = h_a e_a`, where each
    /// `h_a` is an invertible matrix over chart `a` (in its own coordinates).
    pub fn retrivialize(&self, h: &[FnMatrix<S>]) -> Result<Self> {
        let x = &self.scheme;
        if h.len() != x.num_charts() {
            return Err(Error::InvalidArgument("one frame change per chart".into()));
        }
        let n = x.dim();
        for (a, m) in h.iter().enumerate() {
            let inv = m
                .inverse()
                .ok_or_else(|| Error::NotUnit(format!("frame change on chart {a}")))?;
            let ok = m
                .data()
                .iter()
                .chain(inv.data())
                .all(|f| f.terms().all(|(e, _)| e.iter().all(|&k| k >= 0)));
            if !ok {
                return Err(Error::NotUnit(format!(
                    "frame change on chart {a} is not invertible over the chart ring"
                )));
            }
        }
        let mut trans = BTreeMap::new();
        for (&(a, b), g) in &self.trans {
            let ha = widen(&h[a], n).map(|f| x.transport_function(f, a, b));
            let hb_inv = widen(&h[b], n).inverse().expect("checked above");
            trans.insert((a, b), ha.mul(g).mul(&hb_inv));
        }
        self.from_parts(self.rank, trans)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Zn;
    use num_rational::BigRational;

    type Q = BigRational;

    fn p1() -> Arc<CoveredScheme<Q>> {
        Arc::new(CoveredScheme::projective((), 1).unwrap())
    }

    #[test]
    fn o_d_in_either_chart() {
        let x = p1();
        let e = VectorBundle::line_bundle_o(x.clone(), 3).unwrap();
        // w^3 in chart 1 is z^-3 in chart 0
        let g01 = e.transition(0, 1, 0);
        assert_eq!(g01[(0, 0)].as_monomial().unwrap().0, &vec![-3]);
        let g10 = e.transition(1, 0, 1);
        assert_eq!(g10[(0, 0)].as_monomial().unwrap().0, &vec![-3]);
    }

    #[test]
    fn algebra_of_line_bundles() {
        let x = Arc::new(CoveredScheme::<Q>::projective((), 2).unwrap());
        let o = |d| VectorBundle::line_bundle_o(x.clone(), d).unwrap();
        let t = o(2).tensor(&o(-5)).unwrap();
        assert_eq!(t.transitions(), o(-3).transitions());
        assert_eq!(o(4).dual().unwrap().transitions(), o(-4).transitions());
        let s = o(1).direct_sum(&o(2)).unwrap();
        assert_eq!(s.det().unwrap().transitions(), o(3).transitions());
        assert_eq!(s.wedge(2).unwrap().transitions(), o(3).transitions());
        assert_eq!(s.wedge(3).unwrap().rank(), 0);
    }

    #[test]
    fn rejects_broken_cocycle() {
        let x = Arc::new(CoveredScheme::<Zn>::projective(5, 2).unwrap());
        let good = VectorBundle::line_bundle_o(x.clone(), 1).unwrap();
        let mut t = good.transitions().clone();
        let g = t.get_mut(&(0, 2)).unwrap();
        *g = g.scale(&LaurentPoly::constant(2, Zn::new(2, 5)));
        assert!(matches!(VectorBundle::new(x.clone(), 1, t), Err(Error::InvalidBundle(_))));
    }

    #[test]
    fn rejects_non_regular_entries() {
        let x = p1();
        let mut t = BTreeMap::new();
        // 1 + z is regular on the overlap but not a unit there
        let zp1 = LaurentPoly::var(&(), 1, 0) + LaurentPoly::constant(1, Q::from_integer(1.into()));
        t.insert((0, 1), Matrix::from_rows(vec![vec![zp1]]));
        assert!(matches!(
            VectorBundle::from_first_chart(x, 1, t),
            Err(Error::InvalidBundle(_))
        ));
    }

    #[test]
    fn retrivialized_bundle_is_a_bundle() {
        let x = p1();
        let s = VectorBundle::line_bundle_o(x.clone(), 1)
            .unwrap()
            .direct_sum(&VectorBundle::line_bundle_o(x.clone(), -2).unwrap())
            .unwrap();
        let one = LaurentPoly::constant(1, Q::from_integer(1.into()));
        let z = LaurentPoly::var(&(), 1, 0);
        let zero = LaurentPoly::zero_in(1);
        let h0 = Matrix::from_rows(vec![vec![one.clone(), z.clone() * z.clone()], vec![zero.clone(), one.clone()]]);
        let h1 = Matrix::from_rows(vec![vec![one.clone(), zero.clone()], vec![z, one]]);
        let t = s.retrivialize(&[h0, h1]).unwrap();
        assert_eq!(t.rank(), 2);
        assert_ne!(t.transitions(), s.transitions());
    }
}
