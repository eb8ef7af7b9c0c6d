use crate::error::{Error, Result};
use crate::rings::{Exponent, LaurentPoly, Matrix, Scalar};
use num_bigint::BigInt;

/// A scheme given by affine charts glued along monomial coordinate changes.
///
/// Every chart is an affine space of the same dimension, possibly with some
/// coordinates inverted. `maps[a][b][i]` is the exponent vector, in chart-`b`
/// coordinates, of the `i`-th coordinate of chart `a`. Because every gluing
/// is monomial, all charts are localizations of one torus and a monomial has a
/// well-defined weight: its exponent in chart-0 coordinates.
#[derive(Clone, Debug)]
pub struct CoveredScheme<S: Scalar> {
    name: String,
    params: S::Params,
    dim: usize,
    names: Vec<Vec<String>>,
    base_inverted: Vec<Vec<bool>>,
    maps: Vec<Vec<Vec<Exponent>>>,
}

/// Description of one chart for [`CoveredScheme::custom`].
#[derive(Clone, Debug)]
pub struct ChartSpec {
    pub names: Vec<String>,
    pub inverted: Vec<bool>,
}

fn identity_rows(n: usize) -> Vec<Exponent> {
    (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect()
}

/// Rows of the composite: chart-`a` coordinates in chart-`c` coordinates,
/// given `ab` (a in b) and `bc` (b in c).
fn compose(ab: &[Exponent], bc: &[Exponent], n: usize) -> Vec<Exponent> {
    ab.iter()
        .map(|row| {
            let mut out = vec![0i32; n];
            for (j, &r) in row.iter().enumerate() {
                for k in 0..n {
                    out[k] += r * bc[j][k];
                }
            }
            out
        })
        .collect()
}

/// Inverse of a unimodular exponent matrix (rows as above).
fn invert_rows(rows: &[Exponent]) -> Option<Vec<Exponent>> {
    let n = rows.len();
    let m = Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
    );
    let inv = m.inverse()?;
    Some(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| i32::try_from(&inv[(i, j)]).expect("small exponent"))
                    .collect()
            })
            .collect(),
    )
}

impl<S: Scalar> CoveredScheme<S> {
    /// Projective space with the standard cover `{x_α ≠ 0}`. Chart `α` has
    /// coordinates `x_j/x_α` for `j ≠ α`, named `x{j}`; on ℙ¹ the charts
    /// use `z = x1/x0` and `w = x0/x1` instead.
    pub fn projective(params: S::Params, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidScheme("ℙ^0 has no coordinates".into()));
        }
        let coords = |a: usize| -> Vec<usize> { (0..=n).filter(|&j| j != a).collect() };
        let names = (0..=n)
            .map(|a| {
                if n == 1 {
                    vec![if a == 0 { "z" } else { "w" }.to_string()]
                } else {
                    coords(a).iter().map(|j| format!("x{j}")).collect()
                }
            })
            .collect();
        let maps = (0..=n)
            .map(|a| {
                (0..=n)
                    .map(|b| {
                        if a == b {
                            return identity_rows(n);
                        }
                        let cb = coords(b);
                        let pos = |j: usize| cb.iter().position(|&x| x == j);
                        coords(a)
                            .iter()
                            .map(|&j| {
                                // x_j/x_a = (x_j/x_b) / (x_a/x_b)
                                let mut e = vec![0i32; n];
                                if let Some(k) = pos(j) {
                                    e[k] += 1;
                                }
                                e[pos(a).expect("a ≠ b")] -= 1;
                                e
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(CoveredScheme {
            name: format!("P{n}"),
            params,
            dim: n,
            names,
            base_inverted: vec![vec![false; n]; n + 1],
            maps,
        })
    }

    /// The affine line, one chart with coordinate `x`.
    pub fn affine_line(params: S::Params) -> Self {
        CoveredScheme {
            name: "A1".into(),
            params,
            dim: 1,
            names: vec![vec!["x".into()]],
            base_inverted: vec![vec![false]],
            maps: vec![vec![identity_rows(1)]],
        }
    }

    /// Charts plus monomial gluings for every pair `a < b`: `gluings` holds
    /// `(a, b, rows)` with `rows[i]` the chart-`b` exponent vector of the
    /// `i`-th chart-`a` coordinate. Reverse maps are inverted, and the
    /// composites are checked on every triple.
    pub fn custom(
        name: impl Into<String>,
        params: S::Params,
        charts: Vec<ChartSpec>,
        gluings: Vec<(usize, usize, Vec<Exponent>)>,
    ) -> Result<Self> {
        let m = charts.len();
        if m == 0 {
            return Err(Error::InvalidScheme("no charts".into()));
        }
        let dim = charts[0].names.len();
        for (i, c) in charts.iter().enumerate() {
            if c.names.len() != dim || c.inverted.len() != dim {
                return Err(Error::InvalidScheme(format!(
                    "chart {i} does not have {dim} coordinates"
                )));
            }
        }
        let mut maps: Vec<Vec<Option<Vec<Exponent>>>> = vec![vec![None; m]; m];
        for (a, row) in maps.iter_mut().enumerate() {
            row[a] = Some(identity_rows(dim));
        }
        for (a, b, rows) in gluings {
            if a >= b || b >= m {
                return Err(Error::InvalidScheme(format!(
                    "gluing ({a},{b}) must have a < b < {m}"
                )));
            }
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(Error::InvalidScheme(format!(
                    "gluing ({a},{b}) needs a {dim}x{dim} exponent matrix"
                )));
            }
            let inv = invert_rows(&rows).ok_or_else(|| {
                Error::InvalidScheme(format!("gluing ({a},{b}) is not invertible over ℤ"))
            })?;
            if maps[a][b].is_some() {
                return Err(Error::InvalidScheme(format!("gluing ({a},{b}) given twice")));
            }
            maps[a][b] = Some(rows);
            maps[b][a] = Some(inv);
        }
        let maps: Vec<Vec<Vec<Exponent>>> = maps
            .into_iter()
            .enumerate()
            .map(|(a, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(b, r)| {
                        r.ok_or_else(|| Error::InvalidScheme(format!("missing gluing ({a},{b})")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if compose(&maps[a][b], &maps[b][c], dim) != maps[a][c] {
                        return Err(Error::InvalidScheme(format!(
                            "gluings ({a},{b}), ({b},{c}) and ({a},{c}) are inconsistent"
                        )));
                    }
                }
            }
        }
        Ok(CoveredScheme {
            name: name.into(),
            params,
            dim,
            names: charts.iter().map(|c| c.names.clone()).collect(),
            base_inverted: charts.into_iter().map(|c| c.inverted).collect(),
            maps,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &S::Params {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_charts(&self) -> usize {
        self.names.len()
    }

    pub fn chart_names(&self, a: usize) -> &[String] {
        &self.names[a]
    }

    /// Exponent rows expressing chart-`a` coordinates in chart-`b` ones.
    pub fn map_rows(&self, a: usize, b: usize) -> &[Exponent] {
        &self.maps[a][b]
    }

    pub fn one(&self) -> S {
        S::from_i64(&self.params, 1)
    }

    /// Chart-`b` coordinate `i` as a function on the overlap, written in
    /// chart-`a` coordinates.
    pub fn coordinate_in(&self, b: usize, i: usize, a: usize) -> LaurentPoly<S> {
        LaurentPoly::monomial(self.maps[b][a][i].clone(), self.one())
    }

    /// Rewrite a function from chart `a` coordinates into chart `b` ones.
    pub fn transport_function(&self, f: &LaurentPoly<S>, a: usize, b: usize) -> LaurentPoly<S> {
        if a == b {
            return f.clone();
        }
        f.substitute_monomial(&self.maps[a][b], self.dim) + LaurentPoly::zero_in(self.dim)
    }

    /// Exponent vector of a chart-`a` monomial after moving to chart `b`.
    pub fn transport_exponent(&self, e: &[i32], a: usize, b: usize) -> Exponent {
        let mut out = vec![0i32; self.dim];
        for (i, &x) in e.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (k, &r) in self.maps[a][b][i].iter().enumerate() {
                out[k] += x * r;
            }
        }
        out
    }

    /// Which chart-`b` coordinates are units on `U_b ∩ U_a`.
    fn overlap_inverted(&self, b: usize, a: usize) -> Vec<bool> {
        let mut inv = self.base_inverted[b].clone();
        for (i, row) in self.maps[a][b].iter().enumerate() {
            let unit = self.base_inverted[a][i];
            for (k, &r) in row.iter().enumerate() {
                if r < 0 || (unit && r != 0) {
                    inv[k] = true;
                }
            }
        }
        inv
    }

    /// Units among the last chart's coordinates on the intersection of the
    /// charts in `tuple`.
    pub fn tuple_inverted(&self, tuple: &[usize]) -> Vec<bool> {
        let last = *tuple.last().expect("nonempty tuple");
        let mut inv = self.base_inverted[last].clone();
        for &a in tuple {
            for (k, u) in self.overlap_inverted(last, a).into_iter().enumerate() {
                inv[k] |= u;
            }
        }
        inv
    }

    /// Is `x^e` (last-chart coordinates) regular on the tuple's intersection?
    pub fn is_regular_exponent(&self, inverted: &[bool], e: &[i32]) -> bool {
        e.iter().zip(inverted).all(|(&x, &u)| u || x >= 0)
    }

    /// Strictly increasing chart tuples of length `len`.
    pub fn tuples(&self, len: usize) -> Vec<Vec<usize>> {
        let m = self.num_charts();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(len);
        fn rec(start: usize, m: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == len {
                out.push(cur.clone());
                return;
            }
            for a in start..m {
                cur.push(a);
                rec(a + 1, m, len, cur, out);
                cur.pop();
            }
        }
        if len > 0 {
            rec(0, m, len, &mut cur, &mut out);
        }
        out
    }

    /// Same scheme over another base.
    pub fn rebase<T: Scalar>(&self, params: T::Params) -> CoveredScheme<T> {
        CoveredScheme {
            name: self.name.clone(),
            params,
            dim: self.dim,
            names: self.names.clone(),
            base_inverted: self.base_inverted.clone(),
            maps: self.maps.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn projective_line_charts() {
        let x = CoveredScheme::<Q>::projective((), 1).unwrap();
        assert_eq!(x.map_rows(0, 1), &[vec![-1]]);
        assert_eq!(x.tuple_inverted(&[0, 1]), vec![true]);
        assert_eq!(x.tuple_inverted(&[1]), vec![false]);
        assert_eq!(x.tuples(2), vec![vec![0, 1]]);
    }

    #[test]
    fn projective_plane_maps_compose() {
        let x = CoveredScheme::<Q>::projective((), 2).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    assert_eq!(compose(x.map_rows(a, b), x.map_rows(b, c), 2), x.map_rows(a, c));
                }
            }
        }
        // chart 0 = (x1/x0, x2/x0), chart 1 = (x0/x1, x2/x1)
        assert_eq!(x.map_rows(0, 1), &[vec![-1, 0], vec![-1, 1]]);
        assert_eq!(x.tuple_inverted(&[0, 2]), vec![true, false]);
        assert_eq!(x.tuple_inverted(&[0, 1, 2]), vec![true, true]);
    }

    #[test]
    fn custom_matches_builtin() {
        let charts = vec![
            ChartSpec { names: vec!["z".into()], inverted: vec![false] },
            ChartSpec { names: vec!["w".into()], inverted: vec![false] },
        ];
        let x = CoveredScheme::<Q>::custom("line", (), charts.clone(), vec![(0, 1, vec![vec![-1]])])
            .unwrap();
        assert_eq!(x.map_rows(1, 0), &[vec![-1]]);
        let bad = CoveredScheme::<Q>::custom("bad", (), charts.clone(), vec![(0, 1, vec![vec![2]])]);
        assert!(matches!(bad, Err(Error::InvalidScheme(_))));
        let missing = CoveredScheme::<Q>::custom("bad", (), charts, vec![]);
        assert!(matches!(missing, Err(Error::InvalidScheme(_))));
    }
}
