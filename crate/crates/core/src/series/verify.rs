//! Independent re-check of a computed series: for every level `m` the
//! coefficient of `t^{m-1}` in `W' - κ·A·W` is formed directly from the
//! stored `b_p` and the expansion, without any solver state.

use crate::arith::{Field, Matrix, Scalar};
use crate::model::{ExpansionField, LocalExpansion};

use super::SeriesSolution;

#[derive(Clone, Debug, PartialEq)]
pub struct LevelCheck<F> {
    pub level: i64,
    /// `κ · Σ_{j≥0} a_j · b_{level-1-j}`
    pub rhs: Matrix<F>,
    /// `level·b_level - κ·a_{-1}·b_level - rhs`
    pub residual: Matrix<F>,
}

impl<F: Field> LevelCheck<F> {
    pub fn is_satisfied(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecursionReport<F> {
    /// One entry per stored coefficient, starting at the leading level.
    pub levels: Vec<LevelCheck<F>>,
    /// Right side of the first level beyond the stored coefficients, when
    /// the expansion is long enough to form it.
    pub frontier: Option<(i64, Matrix<F>)>,
}

impl<F: Field> RecursionReport<F> {
    pub fn all_satisfied(&self) -> bool {
        self.levels.iter().all(LevelCheck::is_satisfied)
    }

    pub fn failing_levels(&self) -> Vec<i64> {
        self.levels
            .iter()
            .filter(|c| !c.is_satisfied())
            .map(|c| c.level)
            .collect()
    }

    pub fn rhs_at(&self, level: i64) -> Option<&Matrix<F>> {
        self.levels
            .iter()
            .find(|c| c.level == level)
            .map(|c| &c.rhs)
            .or_else(|| self.frontier.as_ref().filter(|(l, _)| *l == level).map(|(_, m)| m))
    }
}

/// `κ · Σ_{j≥0} a_j · b_{level-1-j}` using the stored coefficients, or
/// `None` if some needed `b` or `a` is missing.
pub fn right_side<F: ExpansionField>(
    series: &SeriesSolution<F>,
    exp: &LocalExpansion<F>,
    coupling: &Scalar,
    level: i64,
) -> Option<Matrix<F>> {
    let n = exp.dim();
    let rho = series.leading_exponent;
    if level - 1 > series.last_level() {
        return None;
    }
    let mut acc = Matrix::zeros(n, n);
    for j in 0..=(level - 1 - rho) {
        let b = series.coeff(level - 1 - j)?;
        let a = exp.coeff(j)?;
        acc = &acc + &a.matmul(b).ok()?;
    }
    Some(acc.scale(&F::from_scalar(coupling)))
}

pub fn verify_recursion<F: ExpansionField>(
    series: &SeriesSolution<F>,
    exp: &LocalExpansion<F>,
    coupling: &Scalar,
) -> RecursionReport<F> {
    let n = exp.dim();
    let kappa = F::from_scalar(coupling);
    let levels = series
        .levels()
        .map(|(level, b)| {
            let rhs = right_side(series, exp, coupling, level).unwrap_or_else(|| Matrix::zeros(n, n));
            let lhs = &b.scale(&F::from_int(level)) - &(&exp.a_minus1 * b).scale(&kappa);
            LevelCheck {
                level,
                residual: &lhs - &rhs,
                rhs,
            }
        })
        .collect();
    let next = series.last_level() + 1;
    RecursionReport {
        levels,
        frontier: right_side(series, exp, coupling, next).map(|m| (next, m)),
    }
}
