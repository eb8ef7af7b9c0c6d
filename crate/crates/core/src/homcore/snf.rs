use crate::rings::{Matrix, Ring, Scalar};

/// Smith normal form `U·M·V = D` with `U`, `V` invertible.
#[derive(Clone, Debug)]
pub struct Smith<S: Scalar> {
    pub u: Matrix<S>,
    pub d: Matrix<S>,
    pub v: Matrix<S>,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl<S: Scalar> Smith<S> {
    /// Diagonal entries `d_1 | d_2 | … | d_rank`, canonical associates.
    pub fn invariant_factors(&self) -> Vec<S> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct Work<'a, S: Scalar> {
    a: Matrix<S>,
    u: Option<Matrix<S>>,
    v: Option<Matrix<S>>,
    params: &'a S::Params,
}

impl<S: Scalar> Work<'_, S> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        swap_rows(&mut self.a, i, j);
        if let Some(u) = &mut self.u {
            swap_rows(u, i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        swap_cols(&mut self.a, i, j);
        if let Some(v) = &mut self.v {
            swap_cols(v, i, j);
        }
    }

    /// row_i += c·row_j
    fn add_row(&mut self, i: usize, j: usize, c: &S) {
        add_row(&mut self.a, i, j, c);
        if let Some(u) = &mut self.u {
            add_row(u, i, j, c);
        }
    }

    /// col_i += c·col_j
    fn add_col(&mut self, i: usize, j: usize, c: &S) {
        add_col(&mut self.a, i, j, c);
        if let Some(v) = &mut self.v {
            add_col(v, i, j, c);
        }
    }

    fn scale_row(&mut self, i: usize, c: &S) {
        for j in 0..self.a.cols() {
            self.a[(i, j)] = self.a[(i, j)].clone() * c.clone();
        }
        if let Some(u) = &mut self.u {
            for j in 0..u.cols() {
                u[(i, j)] = u[(i, j)].clone() * c.clone();
            }
        }
    }
}

fn swap_rows<S: Ring>(m: &mut Matrix<S>, i: usize, j: usize) {
    for c in 0..m.cols() {
        let t = m[(i, c)].clone();
        m[(i, c)] = m[(j, c)].clone();
        m[(j, c)] = t;
    }
}

fn swap_cols<S: Ring>(m: &mut Matrix<S>, i: usize, j: usize) {
    for r in 0..m.rows() {
        let t = m[(r, i)].clone();
        m[(r, i)] = m[(r, j)].clone();
        m[(r, j)] = t;
    }
}

fn add_row<S: Ring>(m: &mut Matrix<S>, i: usize, j: usize, c: &S) {
    if c.is_zero() {
        return;
    }
    for k in 0..m.cols() {
        if !m[(j, k)].is_zero() {
            m[(i, k)] = m[(i, k)].clone() + c.clone() * m[(j, k)].clone();
        }
    }
}

fn add_col<S: Ring>(m: &mut Matrix<S>, i: usize, j: usize, c: &S) {
    if c.is_zero() {
        return;
    }
    for k in 0..m.rows() {
        if !m[(k, j)].is_zero() {
            m[(k, i)] = m[(k, i)].clone() + c.clone() * m[(k, j)].clone();
        }
    }
}

fn reduce<S: Scalar>(w: &mut Work<'_, S>) -> usize {
    let (rows, cols) = (w.a.rows(), w.a.cols());
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest pivot in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &w.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.euclid_norm() < w.a[(bi, bj)].euclid_norm(),
                };
                if better {
                    best = Some((i, j));
                }
            }
            // over a field any nonzero pivot will do
            if best.is_some() && S::is_field(w.params) {
                break;
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if w.a[(i, t)].is_zero() {
                    continue;
                }
                let (q, r) = w.a[(i, t)].div_rem_euclid(&w.a[(t, t)]);
                w.add_row(i, t, &-q);
                if !r.is_zero() {
                    w.swap_rows(i, t);
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if w.a[(t, j)].is_zero() {
                    continue;
                }
                let (q, r) = w.a[(t, j)].div_rem_euclid(&w.a[(t, t)]);
                w.add_col(j, t, &-q);
                if !r.is_zero() {
                    w.swap_cols(j, t);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            if S::is_field(w.params) {
                break;
            }
            // the pivot must divide everything left over
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    let x = &w.a[(i, j)];
                    if !x.is_zero() && x.divide_exact(&w.a[(t, t)]).is_none() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = S::from_i64(w.params, 1);
                    w.add_row(t, i, &one);
                }
                None => break,
            }
        }
        let unit = w.a[(t, t)].canonical_unit();
        w.scale_row(t, &unit);
        t += 1;
    }
    t
}

/// Smith normal form with transforms.
pub fn smith_normal_form<S: Scalar>(params: &S::Params, m: &Matrix<S>) -> Smith<S> {
    let mut w = Work {
        a: m.clone(),
        u: Some(Matrix::identity(params, m.rows())),
        v: Some(Matrix::identity(params, m.cols())),
        params,
    };
    let rank = reduce(&mut w);
    Smith {
        u: w.u.unwrap(),
        d: w.a,
        v: w.v.unwrap(),
        rank,
    }
}

/// Invariant factors only, skipping the transforms.
pub fn invariant_factors<S: Scalar>(params: &S::Params, m: &Matrix<S>) -> Vec<S> {
    let mut w = Work {
        a: m.clone(),
        u: None,
        v: None,
        params,
    };
    let rank = reduce(&mut w);
    (0..rank).map(|i| w.a[(i, i)].clone()).collect()
}

pub fn rank<S: Scalar>(params: &S::Params, m: &Matrix<S>) -> usize {
    invariant_factors(params, m).len()
}

/// Columns spanning `ker M`; over ℤ a basis of the (saturated) kernel lattice.
pub fn kernel<S: Scalar>(params: &S::Params, m: &Matrix<S>) -> Matrix<S> {
    let s = smith_normal_form(params, m);
    let cols: Vec<usize> = (s.rank..m.cols()).collect();
    let rows: Vec<usize> = (0..m.cols()).collect();
    s.v.submatrix(&rows, &cols)
}

/// Some `x` with `M·x = b`, or `None` when the system has no solution in the
/// base ring.
pub fn solve<S: Scalar>(params: &S::Params, m: &Matrix<S>, b: &[S]) -> Option<Vec<S>> {
    solve_with(&smith_normal_form(params, m), b)
}

/// Solve against a precomputed Smith form (useful for many right-hand sides).
pub fn solve_with<S: Scalar>(s: &Smith<S>, b: &[S]) -> Option<Vec<S>> {
    assert_eq!(b.len(), s.u.cols(), "right-hand side length");
    let ub = s.u.mul_vec(b);
    let mut y = vec![S::zero(); s.v.rows()];
    for (i, c) in ub.iter().enumerate() {
        if i < s.rank {
            y[i] = c.divide_exact(&s.d[(i, i)])?;
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Zn;
    use num_bigint::BigInt;

    fn zm(rows: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    fn check(m: &Matrix<BigInt>) -> Smith<BigInt> {
        let s = smith_normal_form(&(), m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.u.det().abs_is_one());
        assert!(s.v.det().abs_is_one());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].divide_exact(&w[0]).is_some());
        }
        s
    }

    trait AbsOne {
        fn abs_is_one(&self) -> bool;
    }
    impl AbsOne for BigInt {
        fn abs_is_one(&self) -> bool {
            *self == BigInt::from(1) || *self == BigInt::from(-1)
        }
    }

    #[test]
    fn diag_two_three() {
        let s = check(&zm(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_and_identity() {
        let s = check(&zm(&[&[0]]));
        assert_eq!(s.rank, 0);
        assert_eq!(s.d, zm(&[&[0]]));
        let id = Matrix::<BigInt>::identity(&(), 3);
        assert_eq!(check(&id).d, id);
    }

    #[test]
    fn rectangular_with_torsion() {
        let m = zm(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = check(&m);
        assert_eq!(
            s.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
    }

    #[test]
    fn kernel_and_solve() {
        let m = zm(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&(), &m);
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
        let b = vec![BigInt::from(4), BigInt::from(8)];
        let x = solve(&(), &m, &b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        assert!(solve(&(), &m, &[BigInt::from(1), BigInt::from(1)]).is_none());
        // 2x = 1 has no integer solution
        assert!(solve(&(), &zm(&[&[2]]), &[BigInt::from(1)]).is_none());
    }

    #[test]
    fn prime_field_rank() {
        let p = 3;
        let m = Matrix::from_rows(vec![
            vec![Zn::new(1, p), Zn::new(2, p)],
            vec![Zn::new(2, p), Zn::new(1, p)],
        ]);
        // det = 1 - 4 = -3 = 0 mod 3
        assert_eq!(rank(&p, &m), 1);
        let s = smith_normal_form(&p, &m);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
    }

    #[test]
    fn prime_power_torsion() {
        let n = 9;
        let m = Matrix::from_rows(vec![vec![Zn::new(3, n), Zn::new(0, n)], vec![Zn::new(0, n), Zn::new(6, n)]]);
        let s = smith_normal_form(&n, &m);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        assert_eq!(s.invariant_factors(), vec![Zn::new(3, n), Zn::new(3, n)]);
    }
}
