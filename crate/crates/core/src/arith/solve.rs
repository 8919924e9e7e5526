//! Exact Gauss-Jordan elimination with a three-way classification of
//! `A·X = B`: unique, affine (consistent but singular) and inconsistent.
//!
//! Pivots are chosen deterministically: for each column, the first
//! remaining row (top to bottom) with a nonzero entry. Kernel bases are
//! returned in reduced column echelon form, so two calls on equal inputs
//! always return identical certificates.

use super::field::Field;
use super::matrix::Matrix;
use super::ArithError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveKind {
    Unique,
    Affine,
    Inconsistent,
}

impl SolveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveKind::Unique => "unique",
            SolveKind::Affine => "affine",
            SolveKind::Inconsistent => "inconsistent",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult<F> {
    pub kind: SolveKind,
    /// `A·particular = B`; free coordinates are zero.
    pub particular: Option<Matrix<F>>,
    /// Basis of `ker A` as column vectors, reduced column echelon form.
    pub kernel_basis: Vec<Vec<F>>,
    /// Non-pivot columns of `A`; the particular solution vanishes on them.
    pub free_columns: Vec<usize>,
    /// Left null vector `y` with `y·A = 0` and `y·B != 0`.
    pub certificate: Option<Vec<F>>,
}

impl<F: Field> SolveResult<F> {
    /// Re-checks the defining identities for this result against `a`, `b`.
    pub fn verify(&self, a: &Matrix<F>, b: &Matrix<F>) -> bool {
        let kernel_ok = self.kernel_basis.iter().all(|v| a.mul_vec(v).iter().all(F::is_zero));
        match self.kind {
            SolveKind::Unique | SolveKind::Affine => {
                let Some(x) = &self.particular else { return false };
                let expected_kernel = self.kind == SolveKind::Affine;
                kernel_ok && expected_kernel != self.kernel_basis.is_empty() && a.matmul(x).is_ok_and(|ax| &ax == b)
            }
            SolveKind::Inconsistent => {
                let Some(y) = &self.certificate else { return false };
                a.left_mul_vec(y).iter().all(F::is_zero) && !b.left_mul_vec(y).iter().all(F::is_zero)
            }
        }
    }

    /// Coefficients of `x` along the kernel basis, relative to the
    /// complement `{x : x vanishes on the free columns}`. Zero for the
    /// particular solution returned by [`solve_linear`].
    pub fn kernel_coefficients(&self, x: &[F]) -> Vec<F> {
        if self.kernel_basis.is_empty() {
            return Vec::new();
        }
        let k = self.kernel_basis.len();
        let restricted = Matrix::from_fn(k, k, |i, j| self.kernel_basis[j][self.free_columns[i]].clone());
        let target = Matrix::from_fn(k, 1, |i, _| x[self.free_columns[i]].clone());
        let coords = solve_linear(&restricted, &target)
            .ok()
            .and_then(|r| r.particular)
            .expect("kernel basis restricted to free columns is invertible");
        coords.column(0)
    }
}

/// Reduced row echelon form of `work` using only the first `pivot_cols`
/// columns as pivot candidates. Returns `(row, column)` of each pivot.
fn row_reduce<F: Field>(work: &mut [Vec<F>], pivot_cols: usize) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..pivot_cols {
        if next_row == work.len() {
            break;
        }
        let Some(found) = (next_row..work.len()).find(|&r| !work[r][col].is_zero()) else {
            continue;
        };
        work.swap(next_row, found);
        let inv = work[next_row][col].try_inv().expect("pivot is nonzero");
        for x in work[next_row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = work[next_row].clone();
        for (r, row) in work.iter_mut().enumerate() {
            if r == next_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.clone() - factor.clone() * p.clone();
                }
            }
        }
        pivots.push((next_row, col));
        next_row += 1;
    }
    pivots
}

/// Classifies and solves `a·X = b` exactly. `a` may be rectangular.
pub fn solve_linear<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Result<SolveResult<F>, ArithError> {
    if a.rows() != b.rows() {
        return Err(ArithError::Shape(format!(
            "left side has {} rows, right side {}",
            a.rows(),
            b.rows()
        )));
    }
    let (m, n, k) = (a.rows(), a.cols(), b.cols());

    // [A | B | I]: the identity block records the row operations so that a
    // zero row of the reduced A yields a left null vector.
    let mut work: Vec<Vec<F>> = (0..m)
        .map(|i| {
            let mut row = a.row(i);
            row.extend(b.row(i));
            row.extend((0..m).map(|j| if i == j { F::one() } else { F::zero() }));
            row
        })
        .collect();
    let pivots = row_reduce(&mut work, n);
    let rank = pivots.len();

    for row in &work[rank..] {
        if row[n..n + k].iter().any(|x| !x.is_zero()) {
            return Ok(SolveResult {
                kind: SolveKind::Inconsistent,
                particular: None,
                kernel_basis: Vec::new(),
                free_columns: Vec::new(),
                certificate: Some(row[n + k..].to_vec()),
            });
        }
    }

    let pivot_of_col: Vec<Option<usize>> = {
        let mut v = vec![None; n];
        for &(r, c) in &pivots {
            v[c] = Some(r);
        }
        v
    };
    let free_columns: Vec<usize> = (0..n).filter(|&c| pivot_of_col[c].is_none()).collect();

    let particular = Matrix::from_fn(n, k, |i, j| match pivot_of_col[i] {
        Some(r) => work[r][n + j].clone(),
        None => F::zero(),
    });

    let raw_kernel: Vec<Vec<F>> = free_columns
        .iter()
        .map(|&f| {
            (0..n)
                .map(|i| {
                    if i == f {
                        F::one()
                    } else if let Some(r) = pivot_of_col[i] {
                        -work[r][f].clone()
                    } else {
                        F::zero()
                    }
                })
                .collect()
        })
        .collect();
    let kernel_basis = column_echelon(raw_kernel, n);

    Ok(SolveResult {
        kind: if free_columns.is_empty() {
            SolveKind::Unique
        } else {
            SolveKind::Affine
        },
        particular: Some(particular),
        kernel_basis,
        free_columns,
        certificate: None,
    })
}

/// Reduced column echelon form of a set of independent column vectors.
fn column_echelon<F: Field>(mut vectors: Vec<Vec<F>>, len: usize) -> Vec<Vec<F>> {
    let pivots = row_reduce(&mut vectors, len);
    vectors.truncate(pivots.len());
    vectors
}

/// Basis of the right kernel of `a`, in reduced column echelon form.
pub fn kernel_basis<F: Field>(a: &Matrix<F>) -> Vec<Vec<F>> {
    solve_linear(a, &Matrix::zeros(a.rows(), 0))
        .expect("shapes agree")
        .kernel_basis
}

pub fn mat_inverse<F: Field>(a: &Matrix<F>) -> Result<Matrix<F>, ArithError> {
    if !a.is_square() {
        return Err(ArithError::Shape(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    let res = solve_linear(a, &Matrix::identity(a.rows()))?;
    match (res.kind, res.particular) {
        (SolveKind::Unique, Some(inv)) => Ok(inv),
        _ => Err(ArithError::Singular),
    }
}

pub fn rank<F: Field>(a: &Matrix<F>) -> usize {
    let mut work = a.to_rows();
    row_reduce(&mut work, a.cols()).len()
}

/// Determinant by forward elimination with first-nonzero pivoting.
pub fn determinant<F: Field>(a: &Matrix<F>) -> Result<F, ArithError> {
    if !a.is_square() {
        return Err(ArithError::Shape(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    let n = a.rows();
    let mut work = a.to_rows();
    let mut det = F::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !work[r][col].is_zero()) else {
            return Ok(F::zero());
        };
        if p != col {
            work.swap(p, col);
            det = -det;
        }
        let pivot = work[col][col].clone();
        let inv = pivot.try_inv().expect("nonzero pivot");
        det = det * pivot;
        for r in col + 1..n {
            if work[r][col].is_zero() {
                continue;
            }
            let factor = work[r][col].clone() * inv.clone();
            let (top, rest) = work.split_at_mut(r);
            for (x, p) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = x.clone() - factor.clone() * p.clone();
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{int, ratio, Scalar};

    fn p1() -> Matrix<Scalar> {
        Matrix::from_int_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])
    }

    fn p2() -> Matrix<Scalar> {
        Matrix::from_int_rows(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])
    }

    fn i3() -> Matrix<Scalar> {
        Matrix::identity(3)
    }

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn inverse_of_i_plus_2p1() {
        let a = &i3() + &p1().scale(&int(2));
        let inv = mat_inverse(&a).unwrap();
        let expected = Matrix::from_rows(vec![
            vec![ratio(-1, 3), ratio(2, 3), int(0)],
            vec![ratio(2, 3), ratio(-1, 3), int(0)],
            vec![int(0), int(0), ratio(1, 3)],
        ])
        .unwrap();
        assert_eq!(inv, expected);
        assert_eq!(&a * &inv, i3());
        assert_eq!(mat_inverse(&i3()).unwrap(), i3());
    }

    #[test]
    fn inverse_of_singular_is_an_error() {
        assert_eq!(mat_inverse(&(&i3() - &p1())), Err(ArithError::Singular));
        assert!(mat_inverse(&Matrix::<Scalar>::zeros(2, 3)).is_err());
    }

    #[test]
    fn unique_solution() {
        let r = solve_linear(&i3(), &p2()).unwrap();
        assert_eq!(r.kind, SolveKind::Unique);
        assert_eq!(r.particular.as_ref(), Some(&p2()));
        assert!(r.kernel_basis.is_empty());
        assert!(r.verify(&i3(), &p2()));
    }

    #[test]
    fn affine_solution_with_kernel() {
        let a = &i3() - &p1();
        let b = Matrix::from_int_rows(&[&[1, -1, 0], &[-1, 1, 0], &[0, 0, 0]]);
        let r = solve_linear(&a, &b).unwrap();
        assert_eq!(r.kind, SolveKind::Affine);
        assert_eq!(r.kernel_basis, vec![v(&[1, 1, 0]), v(&[0, 0, 1])]);
        assert!(r.verify(&a, &b));
        for j in 0..3 {
            let col = r.particular.as_ref().unwrap().column(j);
            assert!(r.kernel_coefficients(&col).iter().all(|c| *c == int(0)));
        }
    }

    #[test]
    fn inconsistent_with_certificate() {
        let a = &i3() - &p1();
        let r = solve_linear(&a, &i3()).unwrap();
        assert_eq!(r.kind, SolveKind::Inconsistent);
        assert_eq!(r.certificate, Some(v(&[1, 1, 0])));
        assert!(r.verify(&a, &i3()));
    }

    #[test]
    fn kernel_is_column_echelon() {
        // kernel of -2I - 2P1 is spanned by (1, -1, 0)
        let a = &(-&i3().scale(&int(2))) - &p1().scale(&int(2));
        assert_eq!(kernel_basis(&a), vec![v(&[1, -1, 0])]);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&p1()).unwrap(), int(-1));
        assert_eq!(determinant(&(&i3() - &p1())).unwrap(), int(0));
        assert_eq!(determinant(&(&i3() + &p1().scale(&int(2)))).unwrap(), int(-9));
        assert_eq!(rank(&(&i3() - &p1())), 1);
    }

    #[test]
    fn kernel_coefficients_detect_kernel_parts() {
        let a = &i3() - &p1();
        let r = solve_linear(&a, &Matrix::zeros(3, 1)).unwrap();
        assert_eq!(r.kernel_coefficients(&v(&[2, 2, 5])), v(&[2, 5]));
    }
}
