//! Dense matrices over a [`Scalar`] field: echelon forms, kernels, square
//! solves and characteristic polynomials.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::Zero;
use thiserror::Error;

use crate::arith::Scalar;
use crate::poly::{Exponent, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("duplicate label {0}")]
    DuplicateLabel(Exponent),
}

/// Row-major dense matrix with optional exponent labels on rows and columns.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
    row_labels: Option<Vec<Exponent>>,
    col_labels: Option<Vec<Exponent>>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Rref<S> {
    pub reduced: Matrix<S>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            data,
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            data,
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        let n = rows.len();
        Self::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn diagonal(entries: &[S]) -> Self {
        Self::from_fn(entries.len(), entries.len(), |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                S::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn row_labels(&self) -> Option<&[Exponent]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[Exponent]> {
        self.col_labels.as_deref()
    }

    /// Attaches labels; each list must match its dimension and be duplicate-free.
    pub fn with_labels(
        mut self,
        rows: Option<Vec<Exponent>>,
        cols: Option<Vec<Exponent>>,
    ) -> Result<Self, LinalgError> {
        for (labels, len, what) in [(&rows, self.rows, "row"), (&cols, self.cols, "column")] {
            if let Some(l) = labels {
                if l.len() != len {
                    return Err(LinalgError::Shape(format!(
                        "{} {what} labels for {len} {what}s",
                        l.len()
                    )));
                }
                let mut seen = HashSet::new();
                if let Some(dup) = l.iter().find(|e| !seen.insert(*e)) {
                    return Err(LinalgError::DuplicateLabel(dup.clone()));
                }
            }
        }
        self.row_labels = rows;
        self.col_labels = cols;
        Ok(self)
    }

    pub fn transpose(&self) -> Self {
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data: (0..self.cols)
                .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
                .map(|(i, j)| self[(i, j)].clone())
                .collect(),
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    pub fn mul(&self, rhs: &Matrix<S>) -> Result<Matrix<S>, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.clone() * rhs[(k, j)].clone();
                    let cell: &mut S = &mut out[(i, j)];
                    *cell = cell.clone() + prod;
                }
            }
        }
        out.row_labels = self.row_labels.clone();
        out.col_labels = rhs.col_labels.clone();
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Shape(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[S]) -> Result<Vec<S>, LinalgError> {
        self.transpose().mul_vec(v)
    }

    pub fn add(&self, rhs: &Matrix<S>) -> Result<Matrix<S>, LinalgError> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, rhs: &Matrix<S>) -> Result<Matrix<S>, LinalgError> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, rhs: &Matrix<S>, f: impl Fn(&S, &S) -> S) -> Result<Matrix<S>, LinalgError> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(LinalgError::Shape("operands differ in shape".into()));
        }
        let mut out = self.clone();
        out.data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Matrix<S> {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|x| *x = x.clone() * c.clone());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix<S> {
        let mut out = Matrix::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone());
        out.row_labels = self.row_labels.clone();
        out.col_labels = self
            .col_labels
            .as_ref()
            .map(|l| cols.iter().map(|&j| l[j].clone()).collect());
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix<S> {
        let mut out = Matrix::from_fn(rows.len(), self.cols, |i, j| self[(rows[i], j)].clone());
        out.col_labels = self.col_labels.clone();
        out.row_labels = self
            .row_labels
            .as_ref()
            .map(|l| rows.iter().map(|&i| l[i].clone()).collect());
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        }
    }

    /// Absolute zero threshold derived from `tol` and the largest entry.
    fn threshold(&self, tol: f64) -> f64 {
        if S::EXACT {
            0.0
        } else {
            tol * self.max_magnitude().max(f64::MIN_POSITIVE)
        }
    }

    pub fn rref(&self) -> Rref<S> {
        self.rref_with_tol(S::default_tolerance())
    }

    /// Gauss–Jordan elimination.
    ///
    /// Exact scalars take the first nonzero entry of each column as pivot.
    /// Floating scalars take the entry of largest magnitude and treat entries
    /// below `tol` relative to the largest entry of `self` as zero.
    pub fn rref_with_tol(&self, tol: f64) -> Rref<S> {
        let eps = self.threshold(tol);
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let candidates = (r..m.rows).filter(|&i| !m[(i, c)].is_negligible(eps));
            let pick = if S::EXACT {
                candidates.min()
            } else {
                candidates.max_by(|&a, &b| m[(a, c)].magnitude().total_cmp(&m[(b, c)].magnitude()))
            };
            let Some(p) = pick else {
                for i in r..m.rows {
                    m[(i, c)] = S::zero();
                }
                continue;
            };
            m.swap_rows(r, p);
            let inv = S::one() / m[(r, c)].clone();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
            m[(r, c)] = S::one();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m[(i, c)].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m[(i, j)].clone() - factor.clone() * m[(r, j)].clone();
                    m[(i, j)] = v;
                }
                m[(i, c)] = S::zero();
            }
            pivots.push(c);
            r += 1;
        }
        if !S::EXACT {
            for i in r..m.rows {
                for j in 0..m.cols {
                    m[(i, j)] = S::zero();
                }
            }
        }
        m.row_labels = None;
        let rank = pivots.len();
        Rref {
            reduced: m,
            pivots,
            rank,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn rank_with_tol(&self, tol: f64) -> usize {
        self.rref_with_tol(tol).rank
    }

    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        self.kernel_basis_with_tol(S::default_tolerance())
    }

    /// Null-space basis read off the reduced echelon form: one vector per
    /// free column, carrying 1 at that column and 0 at every other free
    /// column.
    pub fn kernel_basis_with_tol(&self, tol: f64) -> Vec<Vec<S>> {
        let Rref {
            reduced, pivots, ..
        } = self.rref_with_tol(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Unique solution of `self · x = b` for square nonsingular `self`.
    pub fn solve_square(&self, b: &[S]) -> Result<Vec<S>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if b.len() != self.rows {
            return Err(LinalgError::Shape(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let n = self.rows;
        let augmented = Matrix::from_fn(n, n + 1, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        // elimination on the augmented matrix with the threshold of the coefficient block
        let eps_tol = if S::EXACT {
            0.0
        } else {
            S::default_tolerance() * self.max_magnitude().max(f64::MIN_POSITIVE)
                / augmented.max_magnitude().max(f64::MIN_POSITIVE)
        };
        let Rref {
            reduced, pivots, ..
        } = augmented.rref_with_tol(eps_tol);
        if pivots.len() < n || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
            return Err(LinalgError::Singular);
        }
        Ok((0..n).map(|i| reduced[(i, n)].clone()).collect())
    }

    /// Monic characteristic polynomial `det(X·I − self)` by Berkowitz's
    /// division-free recurrence.
    pub fn char_poly(&self) -> Result<Poly<S>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        // coefficients, highest degree first
        let mut p = vec![S::one()];
        for r in 0..n {
            let a = self[(r, r)].clone();
            // column of the lower-triangular Toeplitz factor
            let mut col = vec![S::one(), -a];
            let mut c: Vec<S> = (0..r).map(|i| self[(i, r)].clone()).collect();
            for _ in 0..r {
                let rc = (0..r).fold(S::zero(), |acc, j| {
                    acc + self[(r, j)].clone() * c[j].clone()
                });
                col.push(-rc);
                c = (0..r)
                    .map(|i| {
                        (0..r).fold(S::zero(), |acc, j| {
                            acc + self[(i, j)].clone() * c[j].clone()
                        })
                    })
                    .collect();
            }
            p = (0..r + 2)
                .map(|i| {
                    (0..p.len())
                        .filter(|&j| j <= i && i - j < col.len())
                        .fold(S::zero(), |acc, j| acc + col[i - j].clone() * p[j].clone())
                })
                .collect();
        }
        p.reverse();
        Ok(Poly::from_coeffs(p))
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            f.write_str("[")?;
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{c:>width$}")?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[S]> = if self.cols == 0 {
            vec![&[]; self.rows]
        } else {
            self.data.chunks(self.cols).collect()
        };
        write!(f, "Matrix {}x{} {:?}", self.rows, self.cols, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn mq(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rref_examples() {
        let r = mq(&[&[1, 0, 0], &[0, 1, 0]]).rref();
        assert_eq!((r.rank, r.pivots.clone()), (2, vec![0, 1]));
        // brute-force 2x2 minor: 2*13 - 5*5 = 1 ≠ 0
        assert_eq!(2 * 13 - 5 * 5, 1);
        assert_eq!(mq(&[&[2, 5, 13], &[5, 13, 35]]).rank(), 2);
        assert_eq!(Matrix::<Rational>::zeros(3, 3).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        let m = mq(&[&[2, 5, 13], &[5, 13, 35]]);
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![q(6), q(-5), q(1)]]);
        assert_eq!(m.mul_vec(&k[0]).unwrap(), vec![q(0), q(0)]);
        let p = mq(&[&[2, 16, 344], &[16, 344, 8800]]);
        assert_eq!(p.kernel_basis(), vec![vec![q(52), q(-28), q(1)]]);
        assert!(Matrix::<Rational>::identity(3).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_normalization() {
        let m = mq(&[&[1, 2, 0, 3]]);
        assert_eq!(
            m.kernel_basis(),
            vec![
                vec![q(-2), q(1), q(0), q(0)],
                vec![q(0), q(0), q(1), q(0)],
                vec![q(-3), q(0), q(0), q(1)]
            ]
        );
    }

    #[test]
    fn solve_examples() {
        let b = vec![q(4), q(-1), Rational::new(2, 3)];
        assert_eq!(Matrix::identity(3).solve_square(&b).unwrap(), b);
        assert_eq!(
            mq(&[&[1, 1], &[2, 3]]).solve_square(&[q(2), q(5)]).unwrap(),
            vec![q(1), q(1)]
        );
        // transposed Vandermonde for supports {2,3}; samples of 2^k + 3^k at k = 0, 1
        let samples: Vec<Rational> = (0..2).map(|k| q(2i64.pow(k) + 3i64.pow(k))).collect();
        assert_eq!(
            mq(&[&[1, 1], &[2, 3]]).solve_square(&samples).unwrap(),
            vec![q(1), q(1)]
        );
        assert_eq!(
            mq(&[&[1, 2], &[2, 4]]).solve_square(&[q(1), q(1)]),
            Err(LinalgError::Singular)
        );
        assert!(matches!(
            mq(&[&[1, 2]]).solve_square(&[q(1)]),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(
            Matrix::diagonal(&[q(2), q(3)]).char_poly().unwrap(),
            Poly::from_coeffs([q(6), q(-5), q(1)])
        );
        assert_eq!(
            mq(&[&[7]]).char_poly().unwrap(),
            Poly::from_coeffs([q(-7), q(1)])
        );
        let companion = mq(&[&[0, -52], &[1, 28]]);
        assert_eq!(
            companion.char_poly().unwrap(),
            Poly::from_coeffs([q(52), q(-28), q(1)])
        );
        assert_eq!(
            Matrix::<Rational>::zeros(0, 0).char_poly().unwrap(),
            Poly::from_coeffs([q(1)])
        );
    }

    #[test]
    fn labels_are_checked() {
        let m = mq(&[&[1, 2]]);
        let dup = Some(vec![Exponent::from([0]), Exponent::from([0])]);
        assert!(matches!(
            m.clone().with_labels(None, dup),
            Err(LinalgError::DuplicateLabel(_))
        ));
        assert!(matches!(
            m.clone().with_labels(Some(vec![]), None),
            Err(LinalgError::Shape(_))
        ));
        let ok = m
            .with_labels(None, Some(vec![Exponent::from([0]), Exponent::from([1])]))
            .unwrap();
        assert_eq!(ok.transpose().row_labels().unwrap().len(), 2);
    }

    #[test]
    fn float_paths() {
        let m = Matrix::from_rows(vec![vec![2.0f64, 5.0, 13.0], vec![5.0, 13.0, 35.0]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        for (a, b) in k[0].iter().zip([6.0, -5.0, 1.0]) {
            assert!((a - b).abs() < 1e-9);
        }
        let f32m = Matrix::from_rows(vec![vec![1.0f32, 2.0], vec![2.0, 4.0 + 1e-9]]).unwrap();
        assert_eq!(f32m.rank(), 1);
    }

    fn small_matrix(max: usize) -> impl Strategy<Value = Matrix<Rational>> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            prop::collection::vec((-4i64..5, 1i64..4), r * c).prop_map(move |v| {
                Matrix::new(
                    r,
                    c,
                    v.into_iter().map(|(n, d)| Rational::new(n, d)).collect(),
                )
                .unwrap()
            })
        })
    }

    fn square_matrix(max: usize) -> impl Strategy<Value = Matrix<Rational>> {
        (1..=max).prop_flat_map(|n| {
            prop::collection::vec(-5i64..6, n * n)
                .prop_map(move |v| Matrix::new(n, n, v.into_iter().map(q).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn kernel_is_annihilated(m in small_matrix(5)) {
            let k = m.kernel_basis();
            for v in &k {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            }
            prop_assert_eq!(m.rank() + k.len(), m.cols());
        }

        #[test]
        fn rref_is_idempotent(m in small_matrix(5)) {
            let r = m.rref();
            prop_assert_eq!(r.reduced.rref().reduced, r.reduced.clone());
            prop_assert!(r.pivots.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn cayley_hamilton(m in square_matrix(5)) {
            let p = m.char_poly().unwrap();
            let n = m.rows();
            let mut acc = Matrix::<Rational>::zeros(n, n);
            let mut power = Matrix::identity(n);
            for c in p.coeffs() {
                acc = acc.add(&power.scale(&c)).unwrap();
                power = power.mul(&m).unwrap();
            }
            prop_assert!(acc.is_zero());
        }
    }
}
