//! Dense row-major matrices over integers and over any [`Field`].

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<i64>;

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::LengthMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Clone, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, E>>()?,
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<T: Serialize> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[T]> = if self.cols == 0 {
            (0..self.rows).map(|_| &self.data[0..0]).collect()
        } else {
            self.data.chunks(self.cols).collect()
        };
        rows.serialize(s)
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, 0)
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| i64::from(i == j))
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.checked_mul(rhs[(k, j)]).ok_or(Error::Overflow)?;
                    out[(i, j)] = out[(i, j)].checked_add(prod).ok_or(Error::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.zip_checked(rhs, i64::checked_sub)
    }

    pub fn checked_add(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.zip_checked(rhs, i64::checked_add)
    }

    fn zip_checked(&self, rhs: &IntMatrix, op: fn(i64, i64) -> Option<i64>) -> Result<IntMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::LengthMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| op(a, b).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn neg(&self) -> IntMatrix {
        self.map(|&v| -v)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Exact determinant. Fraction-free elimination in `i128`, redone with
    /// big integers if an intermediate overflows.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        match bareiss_i128(self) {
            Some(d) => BigInt::from(d),
            None => bareiss_bigint(self),
        }
    }

    /// Determinant as `i64`, or `Overflow` if it does not fit.
    pub fn det_i64(&self) -> Result<i64> {
        self.det().to_i64().ok_or(Error::Overflow)
    }

    pub fn to_field<F: Field>(&self, proto: &F) -> Matrix<F> {
        self.map(|&v| proto.from_i64_like(v))
    }
}

fn bareiss_i128(m: &IntMatrix) -> Option<i128> {
    let n = m.rows;
    if n == 0 {
        return Some(1);
    }
    let mut a: Vec<Vec<i128>> = (0..n)
        .map(|i| m.row(i).iter().map(|&v| v as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let p = (k + 1..n).find(|&i| a[i][k] != 0)?;
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j]
                    .checked_mul(a[k][k])?
                    .checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = v / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    a[n - 1][n - 1].checked_mul(sign)
}

fn bareiss_bigint(m: &IntMatrix) -> BigInt {
    let n = m.rows;
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| m.row(i).iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    &a[n - 1][n - 1] * sign
}

impl<F: Field> Matrix<F> {
    pub fn identity_like(n: usize, proto: &F) -> Self {
        let (zero, one) = (proto.zero_like(), proto.one_like());
        Matrix::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn diagonal(entries: &[F]) -> Self {
        let zero = entries
            .first()
            .map(Field::zero_like)
            .expect("diagonal of an empty slice");
        Matrix::from_fn(entries.len(), entries.len(), |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                zero.clone()
            }
        })
    }

    pub fn mul(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let proto = self
            .data
            .first()
            .or(rhs.data.first())
            .expect("product of empty matrices")
            .zero_like();
        let mut out = Matrix::filled(self.rows, rhs.cols, proto);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.clone() * b.clone();
                    let cur = std::mem::replace(&mut out[(i, j)], prod.zero_like());
                    out[(i, j)] = cur + prod;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + rhs[(i, j)].clone()
        })
    }

    pub fn sub(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - rhs[(i, j)].clone()
        })
    }

    /// Multiplies by an integer matrix on the right.
    pub fn mul_int(&self, rhs: &IntMatrix) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc: Option<F> = None;
            for k in 0..self.cols {
                let c = rhs[(k, j)];
                if c == 0 || self[(i, k)].is_zero() {
                    continue;
                }
                let term = if c == 1 {
                    self[(i, k)].clone()
                } else if c == -1 {
                    -self[(i, k)].clone()
                } else {
                    self[(i, k)].clone() * self[(i, k)].from_i64_like(c)
                };
                acc = Some(match acc {
                    None => term,
                    Some(a) => a + term,
                });
            }
            acc.unwrap_or_else(|| self.data[0].zero_like())
        })
    }

    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        F::det(self)
    }
}

/// Gaussian elimination with pivot choice by [`Field::pivot_weight`].
pub fn gaussian_det<F: Field>(m: &Matrix<F>) -> F {
    let n = m.rows;
    assert!(m.is_square());
    if n == 0 {
        panic!("determinant of a 0x0 matrix needs a prototype element");
    }
    let mut a = m.clone();
    let mut det = a.data[0].one_like();
    for k in 0..n {
        let (p, w) = (k..n)
            .map(|i| (i, a[(i, k)].pivot_weight()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if w <= 0.0 || a[(p, k)].is_zero() {
            return det.zero_like();
        }
        if p != k {
            for j in 0..n {
                let tmp = a[(k, j)].clone();
                a[(k, j)] = a[(p, j)].clone();
                a[(p, j)] = tmp;
            }
            det = -det;
        }
        let pivot = a[(k, k)].clone();
        let inv = match pivot.inv() {
            Some(v) => v,
            None => return det.zero_like(),
        };
        det = det * pivot;
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let factor = a[(i, k)].clone() * inv.clone();
            for j in k + 1..n {
                let v = a[(i, j)].clone() - factor.clone() * a[(k, j)].clone();
                a[(i, j)] = v;
            }
        }
    }
    det
}

/// Permutation matrix `P` with `P e_j = e_{sigma(j)}`, 0-based images.
pub fn permutation_matrix(images: &[usize]) -> IntMatrix {
    let n = images.len();
    let mut p = IntMatrix::zeros(n, n);
    for (j, &i) in images.iter().enumerate() {
        p[(i, j)] = 1;
    }
    p
}
