//! Dense row-major matrices over an exact ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, Ring, Scalar};
use super::ArithError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, ArithError> {
        if data.len() != rows * cols {
            return Err(ArithError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data }
    }

    /// Builds from row vectors; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, ArithError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ArithError::Shape("ragged rows".into()));
        }
        Matrix::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(n_rows: usize, columns: &[Vec<T>]) -> Result<Self, ArithError> {
        if columns.iter().any(|c| c.len() != n_rows) {
            return Err(ArithError::Shape("column length mismatch".into()));
        }
        Ok(Matrix::from_fn(n_rows, columns.len(), |i, j| columns[j][i].clone()))
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Copy with entry `(i, j)` replaced.
    pub fn with_entry(&self, i: usize, j: usize, value: T) -> Self {
        let mut out = self.clone();
        out.data[i * self.cols + j] = value;
        out
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    /// Exact product; errors on a dimension mismatch.
    pub fn matmul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>, ArithError> {
        if self.cols != rhs.rows {
            return Err(ArithError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                let a = self.get(i, k);
                if a.is_zero() {
                    acc
                } else {
                    acc + a.clone() * rhs.get(k, j).clone()
                }
            })
        }))
    }

    pub fn checked_add(&self, rhs: &Matrix<T>) -> Result<Matrix<T>, ArithError> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }

    pub fn checked_sub(&self, rhs: &Matrix<T>) -> Result<Matrix<T>, ArithError> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, rhs: &Matrix<T>, f: impl Fn(&T, &T) -> T) -> Result<Matrix<T>, ArithError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(ArithError::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, y: &[T]) -> Vec<T> {
        (0..self.cols)
            .map(|j| {
                y.iter()
                    .enumerate()
                    .fold(T::zero(), |acc, (i, yi)| acc + yi.clone() * self.get(i, j).clone())
            })
            .collect()
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| {
                v.iter()
                    .enumerate()
                    .fold(T::zero(), |acc, (j, vj)| acc + self.get(i, j).clone() * vj.clone())
            })
            .collect()
    }
}

impl<F: Field> Matrix<F> {
    /// Embeds a rational matrix into the field `F`.
    pub fn from_scalar_matrix(m: &Matrix<Scalar>) -> Self {
        m.map(F::from_scalar)
    }

    /// The matrix as rational constants, if every entry is one.
    pub fn to_scalar_matrix(&self) -> Option<Matrix<Scalar>> {
        let data = self.data.iter().map(F::as_scalar).collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

impl Matrix<Scalar> {
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }
}

impl<T: Ring> Add for &Matrix<T> {
    type Output = Matrix<T>;

    /// Panics on a shape mismatch; see [`Matrix::checked_add`].
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_add(rhs).expect("matrix shapes agree")
    }
}

impl<T: Ring> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_sub(rhs).expect("matrix shapes agree")
    }
}

impl<T: Ring> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    /// Panics on a shape mismatch; see [`Matrix::matmul`].
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.matmul(rhs).expect("matrix shapes agree")
    }
}

impl<T: Ring> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Display + Clone> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(0);
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            f.write_str("]")?;
            if i + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}
