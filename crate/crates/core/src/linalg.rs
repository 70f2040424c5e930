//! Dense matrices and exact linear solving.
//!
//! The container is generic over any signed scalar, so the same type serves
//! `f64` (numerical oracle) and `BigRational` (decision path). The rational
//! kernels clear denominators row-wise and eliminate fraction-free over
//! `BigInt`: every intermediate value stays integral and every division is
//! exact, which avoids a gcd reduction per arithmetic step and keeps the
//! largest ladder systems (a few hundred unknowns) comfortably fast.

use std::fmt;
use std::ops::{Index, IndexMut};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Scalars the dense kernels accept (`f64`, `BigRational`, signed integers).
pub trait Scalar: Signed + Clone + PartialOrd {}

impl<T: Signed + Clone + PartialOrd> Scalar for T {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    SingularMatrix,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::SingularMatrix => write!(f, "matrix is singular"),
        }
    }
}

impl std::error::Error for LinalgError {}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn leading_submatrix(&self, k: usize) -> Matrix<T>
    where
        T: Clone,
    {
        assert!(k <= self.rows && k <= self.cols);
        Matrix::from_fn(k, k, |i, j| self[(i, j)].clone())
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, x)| acc + a.clone() * x.clone())
            })
            .collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let entries: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", entries.join(", "))?;
        }
        Ok(())
    }
}

/// Gaussian elimination over any scalar with division, largest-pivot rule.
///
/// This is the generic route; the rational systems on the decision path go
/// through [`solve`], and the two are cross-checked against each other.
pub fn solve_field<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>, LinalgError> {
    assert!(a.is_square(), "coefficient matrix must be square");
    assert_eq!(b.len(), a.rows(), "right-hand side length mismatch");
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut m: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();

    for k in 0..n {
        let pivot = (k..n)
            .filter(|&r| !m[r][k].is_zero())
            .max_by(|&r, &s| {
                m[r][k]
                    .abs()
                    .partial_cmp(&m[s][k].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .ok_or(LinalgError::SingularMatrix)?;
        m.swap(k, pivot);
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            if row[k].is_zero() {
                continue;
            }
            let factor = row[k].clone() / pivot_row[k].clone();
            for j in k..=n {
                let delta = factor.clone() * pivot_row[j].clone();
                row[j] = row[j].clone() - delta;
            }
        }
    }

    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in i + 1..n {
            acc = acc - m[i][j].clone() * x[j].clone();
        }
        x[i] = acc / m[i][i].clone();
    }
    Ok(x)
}

/// Clears denominators of `[A | b]` row by row. Returns integer rows plus
/// the positive scale applied to each row.
fn integer_rows(a: &Matrix<BigRational>, b: Option<&[BigRational]>) -> Vec<Vec<BigInt>> {
    let n = a.rows();
    let cols = a.cols();
    (0..n)
        .map(|i| {
            let mut lcm = BigInt::one();
            for j in 0..cols {
                lcm = lcm.lcm(a[(i, j)].denom());
            }
            if let Some(rhs) = b {
                lcm = lcm.lcm(rhs[i].denom());
            }
            let mut row: Vec<BigInt> = (0..cols)
                .map(|j| {
                    let x = &a[(i, j)];
                    x.numer() * (&lcm / x.denom())
                })
                .collect();
            if let Some(rhs) = b {
                row.push(rhs[i].numer() * (&lcm / rhs[i].denom()));
            }
            row
        })
        .collect()
}

/// Exact solve of `A x = b` over the rationals.
///
/// Fraction-free (Bareiss) forward elimination over `BigInt` after row-wise
/// denominator clearing, then rational back substitution. Row swaps pick the
/// first nonzero pivot; the solution is unique so the choice cannot matter.
pub fn solve(a: &Matrix<BigRational>, b: &[BigRational]) -> Result<Vec<BigRational>, LinalgError> {
    assert!(a.is_square(), "coefficient matrix must be square");
    assert_eq!(b.len(), a.rows(), "right-hand side length mismatch");
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut m = integer_rows(a, Some(b));
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n)
            .find(|&r| !m[r][k].is_zero())
            .ok_or(LinalgError::SingularMatrix)?;
        m.swap(k, pivot);
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            for j in k + 1..=n {
                // Bareiss one-step division: exact by construction.
                row[j] = (&pivot_row[k] * &row[j] - &row[k] * &pivot_row[j]) / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }

    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= BigRational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / BigRational::from_integer(m[i][i].clone());
    }
    Ok(x)
}

/// Exact determinant via pivoted fraction-free elimination.
pub fn determinant(a: &Matrix<BigRational>) -> BigRational {
    assert!(a.is_square(), "determinant needs a square matrix");
    let n = a.rows();
    if n == 0 {
        return BigRational::one();
    }
    let mut m = integer_rows(a, None);
    // Row scaling multiplies the determinant by the product of the scales;
    // recover the original by dividing at the end.
    let mut scale = BigInt::one();
    for (i, row) in m.iter().enumerate() {
        let mut lcm = BigInt::one();
        for j in 0..n {
            lcm = lcm.lcm(a[(i, j)].denom());
        }
        debug_assert_eq!(row.len(), n);
        scale *= lcm;
    }
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = match (k..n).find(|&r| !m[r][k].is_zero()) {
            Some(p) => p,
            None => return BigRational::zero(),
        };
        if pivot != k {
            m.swap(k, pivot);
            sign = -sign;
        }
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            for j in k + 1..n {
                row[j] = (&pivot_row[k] * &row[j] - &row[k] * &pivot_row[j]) / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det_scaled = if sign < 0 { -prev } else { prev };
    BigRational::new(det_scaled, scale)
}

/// All `n` leading principal minors, exactly.
///
/// One unpivoted fraction-free pass yields the minors as the successive
/// pivots. A zero pivot means that minor is zero; the remaining ones are then
/// computed as standalone determinants of the leading submatrices.
pub fn leading_principal_minors(a: &Matrix<BigRational>) -> Vec<BigRational> {
    assert!(a.is_square(), "minors need a square matrix");
    let n = a.rows();
    let mut m = integer_rows(a, None);
    let mut row_scales = Vec::with_capacity(n);
    for i in 0..n {
        let mut lcm = BigInt::one();
        for j in 0..n {
            lcm = lcm.lcm(a[(i, j)].denom());
        }
        row_scales.push(lcm);
    }

    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    let mut scale_acc = BigInt::one();
    let mut stopped_at = None;
    for k in 0..n {
        scale_acc *= &row_scales[k];
        let pivot = m[k][k].clone();
        minors.push(BigRational::new(pivot.clone(), scale_acc.clone()));
        if pivot.is_zero() {
            stopped_at = Some(k);
            break;
        }
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            for j in k + 1..n {
                row[j] = (&pivot_row[k] * &row[j] - &row[k] * &pivot_row[j]) / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot;
    }
    if let Some(k0) = stopped_at {
        for k in k0 + 1..n {
            minors.push(determinant(&a.leading_submatrix(k + 1)));
        }
    }
    minors
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, ratio};

    fn rm(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn solve_identity() {
        let a: Matrix<BigRational> = Matrix::identity(3);
        let b = vec![int(1), int(1), int(1)];
        assert_eq!(solve(&a, &b).unwrap(), b);
    }

    #[test]
    fn solve_one_by_one() {
        // (2+r) a = 1 with r = 3
        let a = rm(&[&[5]]);
        assert_eq!(solve(&a, &[int(1)]).unwrap(), vec![ratio(1, 5)]);
    }

    #[test]
    fn solve_three_chain_sample() {
        // r = 1, t = 2; unique solution is (1/4, 1/8, 1/4).
        let a = rm(&[&[3, 2, 0], &[1, 4, 1], &[0, 2, 3]]);
        let x = solve(&a, &[int(1), int(1), int(1)]).unwrap();
        assert_eq!(x, vec![ratio(1, 4), ratio(1, 8), ratio(1, 4)]);
        assert_eq!(a.mul_vec(&x), vec![int(1), int(1), int(1)]);
    }

    #[test]
    fn solve_rejects_singular() {
        let a = rm(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve(&a, &[int(1), int(1)]), Err(LinalgError::SingularMatrix));
    }

    #[test]
    fn solve_with_rational_entries_and_pivoting() {
        let a = Matrix::from_rows(vec![
            vec![int(0), ratio(1, 2), int(1)],
            vec![ratio(2, 3), int(0), int(1)],
            vec![int(1), int(1), int(0)],
        ]);
        let b = vec![int(1), int(2), int(3)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let y = solve_field(&a, &b).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn minors_of_identity() {
        let a: Matrix<BigRational> = Matrix::identity(2);
        assert_eq!(leading_principal_minors(&a), vec![int(1), int(1)]);
    }

    #[test]
    fn minors_two_edge_path() {
        let a = rm(&[&[3, 1], &[1, 3]]);
        assert_eq!(leading_principal_minors(&a), vec![int(3), int(8)]);
    }

    #[test]
    fn minors_triangle() {
        let a = rm(&[&[3, 2, 2], &[2, 3, 2], &[2, 2, 3]]);
        assert_eq!(leading_principal_minors(&a), vec![int(3), int(5), int(7)]);
    }

    #[test]
    fn minors_with_zero_pivot_fall_back() {
        // Leading 1x1 minor is zero but the matrix is not.
        let a = rm(&[&[0, 1], &[1, 0]]);
        assert_eq!(leading_principal_minors(&a), vec![int(0), int(-1)]);
    }

    #[test]
    fn determinant_matches_cofactor_samples() {
        assert_eq!(determinant(&rm(&[&[3, 2, 2], &[2, 3, 2], &[2, 2, 3]])), int(7));
        assert_eq!(determinant(&rm(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(&rm(&[&[1, 2], &[2, 4]])), int(0));
    }

    #[test]
    fn float_solve_works() {
        let a: Matrix<f64> =
            Matrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 3.0]]);
        let x = solve_field(&a, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12);
        assert!((x[1] - 1.4).abs() < 1e-12);
    }
}
