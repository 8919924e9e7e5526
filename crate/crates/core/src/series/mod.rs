//! Matrix Frobenius recursion at a regular singular point.
//!
//! Substituting `W = Σ_{p≥ρ} b_p t^p` (`t = z - z_c`) into
//! `dW/dz = κ·A(z)·W` and matching powers of `t` gives, for each level
//! `m = q + 1 > ρ`,
//!
//! ```text
//! (m·I - κ·a_{-1}) · b_m = κ · Σ_{j + l = m - 1, j ≥ 0, l ≥ ρ} a_j · b_l
//! ```
//!
//! The step matrix is singular exactly at integer eigenvalues of
//! `κ·a_{-1}`. At such a level the system is either consistent (the
//! particular solution with zero free components is taken and the kernel
//! recorded) or inconsistent, in which case no pure Laurent solution with
//! this leading exponent exists and a left null vector certifies it.

mod indicial;
mod verify;

use num_traits::Zero;
use thiserror::Error;

use crate::arith::{kernel_basis, solve_linear, Field, Matrix, Scalar, SolveKind};
use crate::model::{Convention, ExpansionField, LocalExpansion, Point};

pub use indicial::{characteristic_polynomial, indicial_data, rational_roots, IndicialData};
pub use verify::{right_side, verify_recursion, LevelCheck, RecursionReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("{0} is not an eigenvalue of the scaled residue; no leading coefficient")]
    NotAnEigenvalue(i64),
    #[error("leading policy not applicable: {0}")]
    PolicyNotApplicable(String),
    #[error("expansion has {available} regular coefficients, {needed} needed")]
    ExpansionTooShort { needed: usize, available: usize },
    #[error("resonance at level {level} is obstructed; left null vector {certificate:?}")]
    Obstruction { level: i64, certificate: Vec<String> },
    #[error("scaled residue has no integer eigenvalue")]
    NoIntegerExponent,
}

/// Choice of `b_ρ` in the kernel of `ρI - κ·a_{-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LeadingPolicy {
    /// `b_ρ = I - a_{-1}`; needs `a_{-1}² = I` and `ρ = -κ`.
    Projector,
    /// Kernel basis vectors as the first columns, remaining columns zero.
    KernelColumns,
}

impl LeadingPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            LeadingPolicy::Projector => "paper-projector",
            LeadingPolicy::KernelColumns => "kernel-columns",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper-projector" => Some(LeadingPolicy::Projector),
            "kernel-columns" => Some(LeadingPolicy::KernelColumns),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SeriesOptions {
    /// `None` picks [`LeadingPolicy::Projector`] when it applies and
    /// [`LeadingPolicy::KernelColumns`] otherwise.
    pub leading: Option<LeadingPolicy>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceRecord<F> {
    pub level: i64,
    pub kind: SolveKind,
    pub kernel_basis: Vec<Vec<F>>,
    /// Right side of the step equation at this level.
    pub rhs: Matrix<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSolution<F> {
    pub leading_exponent: i64,
    /// `b_ρ, b_{ρ+1}, ...`
    pub coeffs: Vec<Matrix<F>>,
    pub resonances: Vec<ResonanceRecord<F>>,
    pub convention: Convention,
    pub center_point: Point,
    pub leading_policy: LeadingPolicy,
}

impl<F: Field> SeriesSolution<F> {
    /// `b_p`, if computed.
    pub fn coeff(&self, p: i64) -> Option<&Matrix<F>> {
        let k = p.checked_sub(self.leading_exponent)?;
        usize::try_from(k).ok().and_then(|k| self.coeffs.get(k))
    }

    /// Highest computed level.
    pub fn last_level(&self) -> i64 {
        self.leading_exponent + self.coeffs.len() as i64 - 1
    }

    /// `(p, b_p)` in increasing `p`.
    pub fn levels(&self) -> impl Iterator<Item = (i64, &Matrix<F>)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, b)| (self.leading_exponent + k as i64, b))
    }

    /// Copy with one coefficient replaced, for mutation tests.
    pub fn with_coeff(&self, p: i64, value: Matrix<F>) -> Self {
        let mut out = self.clone();
        let k = (p - self.leading_exponent) as usize;
        out.coeffs[k] = value;
        out
    }
}

/// `level·I - κ·a_{-1}`.
pub(crate) fn step_matrix<F: Field>(a_minus1: &Matrix<F>, coupling: &Scalar, level: i64) -> Matrix<F> {
    let n = a_minus1.rows();
    let shift = Matrix::<F>::identity(n).scale(&F::from_int(level));
    &shift - &a_minus1.scale(&F::from_scalar(coupling))
}

fn is_involution<F: Field>(m: &Matrix<F>) -> bool {
    m.matmul(m).is_ok_and(|sq| sq == Matrix::identity(m.rows()))
}

pub fn leading_coefficient<F: ExpansionField>(
    exp: &LocalExpansion<F>,
    coupling: &Scalar,
    rho: i64,
    policy: LeadingPolicy,
) -> Result<Matrix<F>, SeriesError> {
    let n = exp.dim();
    let kernel = kernel_basis(&step_matrix(&exp.a_minus1, coupling, rho));
    if kernel.is_empty() {
        return Err(SeriesError::NotAnEigenvalue(rho));
    }
    match policy {
        LeadingPolicy::Projector => {
            if !is_involution(&exp.a_minus1) {
                return Err(SeriesError::PolicyNotApplicable("residue is not an involution".into()));
            }
            if Scalar::from_integer(rho.into()) != -coupling.clone() {
                return Err(SeriesError::PolicyNotApplicable(format!(
                    "leading exponent {rho} differs from -{coupling}"
                )));
            }
            Ok(&Matrix::identity(n) - &exp.a_minus1)
        }
        LeadingPolicy::KernelColumns => Ok(Matrix::from_fn(n, n, |i, j| {
            kernel.get(j).map_or_else(F::zero, |v| v[i].clone())
        })),
    }
}

/// Default leading exponent: the smallest integer eigenvalue of `κ·a_{-1}`.
pub fn default_leading_exponent(residue: &Matrix<Scalar>, coupling: &Scalar) -> Result<i64, SeriesError> {
    indicial_data(residue, coupling)
        .min_level()
        .ok_or(SeriesError::NoIntegerExponent)
}

fn resolve_policy<F: ExpansionField>(
    exp: &LocalExpansion<F>,
    coupling: &Scalar,
    rho: i64,
    opts: SeriesOptions,
) -> LeadingPolicy {
    opts.leading.unwrap_or_else(|| {
        let projector_fits = is_involution(&exp.a_minus1) && Scalar::from_integer(rho.into()) == -coupling.clone();
        if projector_fits {
            LeadingPolicy::Projector
        } else {
            LeadingPolicy::KernelColumns
        }
    })
}

/// `κ · Σ_{l=ρ}^{level-1} a_{level-1-l} · b_l` over the coefficients
/// computed so far.
fn recursion_rhs<F: ExpansionField>(
    coeffs: &[Matrix<F>],
    rho: i64,
    exp: &LocalExpansion<F>,
    coupling: &F,
    level: i64,
) -> Matrix<F> {
    let n = exp.dim();
    let mut acc = Matrix::zeros(n, n);
    for (k, b) in coeffs.iter().enumerate() {
        let l = rho + k as i64;
        let j = level - 1 - l;
        if j < 0 {
            break;
        }
        let a = exp.coeff(j).expect("expansion length checked");
        acc = &acc + &(a * b);
    }
    acc.scale(coupling)
}

/// Computes `b_ρ ..= b_{ρ+order}`.
pub fn compute_series<F: ExpansionField>(
    exp: &LocalExpansion<F>,
    coupling: &Scalar,
    rho: i64,
    order: usize,
    opts: SeriesOptions,
) -> Result<SeriesSolution<F>, SeriesError> {
    // level ρ + order needs a_0 ..= a_{order-1}
    if exp.regular.len() < order {
        return Err(SeriesError::ExpansionTooShort {
            needed: order,
            available: exp.regular.len(),
        });
    }
    let policy = resolve_policy(exp, coupling, rho, opts);
    let mut coeffs = vec![leading_coefficient(exp, coupling, rho, policy)?];
    let mut resonances = Vec::new();
    let kappa = F::from_scalar(coupling);

    for level in rho + 1..=rho + order as i64 {
        let rhs = recursion_rhs(&coeffs, rho, exp, &kappa, level);
        let step = step_matrix(&exp.a_minus1, coupling, level);
        let solved = solve_linear(&step, &rhs).expect("square step matrix");
        match solved.kind {
            SolveKind::Unique => {}
            SolveKind::Affine => resonances.push(ResonanceRecord {
                level,
                kind: SolveKind::Affine,
                kernel_basis: solved.kernel_basis.clone(),
                rhs: rhs.clone(),
            }),
            SolveKind::Inconsistent => {
                let certificate = solved.certificate.unwrap_or_default();
                return Err(SeriesError::Obstruction {
                    level,
                    certificate: certificate.iter().map(ToString::to_string).collect(),
                });
            }
        }
        coeffs.push(solved.particular.expect("consistent solve has a particular solution"));
    }

    Ok(SeriesSolution {
        leading_exponent: rho,
        coeffs,
        resonances,
        convention: exp.convention,
        center_point: exp.center_point.clone(),
        leading_policy: policy,
    })
}

/// Whether every nonzero entry of every `b_p` is a monomial `c·d^k` with
/// `k = offset - p`.
pub fn is_homogeneous(series: &SeriesSolution<crate::arith::RatFunc>, offset: i64) -> bool {
    series.levels().all(|(p, b)| {
        b.entries()
            .iter()
            .filter(|e| !e.is_zero())
            .all(|e| e.as_monomial().is_some_and(|(_, k)| k == offset - p))
    })
}

pub fn leading_is_nonzero<F: Field>(series: &SeriesSolution<F>) -> bool {
    series.coeffs.first().is_some_and(|b| !b.is_zero())
}
