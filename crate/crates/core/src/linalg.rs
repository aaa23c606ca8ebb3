//! Fraction-free (Bareiss) elimination on small dense square matrices.

use crate::scalar::Scalar;

pub type Matrix<S> = Vec<Vec<S>>;

/// Chooses the pivot row for column `k`: the first nonzero entry in exact mode, the
/// largest in absolute value otherwise.
fn pivot_row<S: Scalar>(m: &Matrix<S>, k: usize) -> Option<usize> {
    if S::is_exact() {
        (k..m.len()).find(|&i| !m[i][k].is_zero())
    } else {
        (k..m.len())
            .filter(|&i| !m[i][k].is_zero())
            .max_by(|&a, &b| m[a][k].abs().partial_cmp(&m[b][k].abs()).unwrap())
    }
}

/// Runs Bareiss elimination over the first `n` columns in place. Returns the sign of the
/// row permutation, or `None` if the leading `n x n` block is singular.
fn bareiss<S: Scalar>(m: &mut Matrix<S>, n: usize) -> Option<bool> {
    let mut negate = false;
    let mut prev = S::one();
    for k in 0..n {
        let p = pivot_row(m, k)?;
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        let width = m[k].len();
        for i in k + 1..n {
            for j in k + 1..width {
                let v = (m[i][j].clone() * &m[k][k] - &(m[i][k].clone() * &m[k][j])) / &prev;
                m[i][j] = v;
            }
            m[i][k] = S::zero();
        }
        prev = m[k][k].clone();
    }
    Some(negate)
}

pub fn determinant<S: Scalar>(a: &Matrix<S>) -> S {
    let n = a.len();
    if n == 0 {
        return S::one();
    }
    let mut m = a.clone();
    match bareiss(&mut m, n) {
        None => S::zero(),
        Some(negate) => {
            let d = m[n - 1][n - 1].clone();
            if negate {
                -d
            } else {
                d
            }
        }
    }
}

/// Solves `a v = b`; `None` when `a` is singular.
pub fn solve<S: Scalar>(a: &Matrix<S>, b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    assert_eq!(b.len(), n, "right-hand side length mismatch");
    let mut m: Matrix<S> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    bareiss(&mut m, n)?;
    let mut v = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in i + 1..n {
            acc = acc - &(m[i][j].clone() * &v[j]);
        }
        v[i] = acc / &m[i][i];
    }
    Some(v)
}

/// The submatrix with `row` and `col` removed.
pub fn minor_matrix<S: Scalar>(a: &Matrix<S>, row: usize, col: usize) -> Matrix<S> {
    a.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

pub fn minor<S: Scalar>(a: &Matrix<S>, row: usize, col: usize) -> S {
    determinant(&minor_matrix(a, row, col))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn m(rows: &[&[i64]]) -> Matrix<Exact> {
        rows.iter()
            .map(|r| r.iter().map(|&v| Exact::from_int(v)).collect())
            .collect()
    }

    /// Laplace expansion along the first row.
    fn laplace(a: &Matrix<Exact>) -> Exact {
        if a.len() == 1 {
            return a[0][0].clone();
        }
        (0..a.len()).fold(Exact::from_int(0), |acc, j| {
            let term = a[0][j].clone() * laplace(&minor_matrix(a, 0, j));
            if j % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        })
    }

    #[test]
    fn determinant_matches_laplace() {
        let a = m(&[&[0, 2, -1, 3], &[4, 1, 0, 2], &[-2, 5, 7, 1], &[3, 0, 1, -4]]);
        assert_eq!(determinant(&a), laplace(&a));
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(determinant(&singular), Exact::from_int(0));
    }

    #[test]
    fn solve_round_trip() {
        let a = m(&[&[0, 2, -1], &[4, 1, 0], &[-2, 5, 7]]);
        let b: Vec<Exact> = [1, -3, 2].iter().map(|&v| Exact::from_int(v)).collect();
        let v = solve(&a, &b).unwrap();
        for (row, bi) in a.iter().zip(&b) {
            let lhs = row.iter().zip(&v).fold(Exact::from_int(0), |s, (x, y)| s + x * y);
            assert_eq!(&lhs, bi);
        }
        assert!(solve(&m(&[&[1, 2], &[2, 4]]), &b[..2]).is_none());
    }
}
