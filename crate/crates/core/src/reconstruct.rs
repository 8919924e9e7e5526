//! Rational matrix solutions: reconstruction from a truncated Laurent
//! series with a prescribed denominator, exact ODE back-substitution and
//! evaluation.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{determinant, solve_linear, Field, Matrix, Poly, RatFunc, Scalar, SolveKind};
use crate::model::{KzSystem, Point};
use crate::series::{indicial_data, SeriesSolution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("operation requires a numeric system or series")]
    Symbolic,
    #[error("no polynomial denominator: scaled residue at point {point} has non-integer minimal exponent")]
    NoPolynomialDenominator { point: usize },
    #[error("insufficient series length: {available} coefficients, at least {needed} needed")]
    InsufficientSeries { needed: usize, available: usize },
    #[error("z = {0} is a pole")]
    Pole(Scalar),
    #[error("denominator must be nonzero")]
    ZeroDenominator,
}

/// `numerator(z) / denominator(z)` with a monic scalar denominator sharing
/// no common factor with all numerator entries.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrixFunction {
    numerator: Matrix<Poly>,
    denominator: Poly,
}

impl RationalMatrixFunction {
    pub fn new(numerator: Matrix<Poly>, denominator: Poly) -> Result<Self, ReconstructError> {
        if denominator.is_zero() {
            return Err(ReconstructError::ZeroDenominator);
        }
        let g = numerator
            .entries()
            .iter()
            .fold(denominator.clone(), |acc, e| acc.gcd(e));
        let lc = denominator.leading().expect("nonzero").recip();
        let reduce = |p: &Poly| p.exact_div(&g).expect("gcd divides").scale(&lc);
        Ok(RationalMatrixFunction {
            numerator: numerator.map(reduce),
            denominator: reduce(&denominator),
        })
    }

    pub fn numerator(&self) -> &Matrix<Poly> {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn max_numerator_degree(&self) -> Option<usize> {
        self.numerator.entries().iter().filter_map(Poly::degree).max()
    }

    pub fn evaluate(&self, z: &Scalar) -> Result<Matrix<Scalar>, ReconstructError> {
        let den = self.denominator.eval(z);
        if den.is_zero() {
            return Err(ReconstructError::Pole(z.clone()));
        }
        let inv = den.recip();
        Ok(self.numerator.map(|p| p.eval(z) * &inv))
    }

    /// Laurent coefficients at `center` for levels from the pole order up to
    /// `upto`, as `(level, coefficient)`.
    pub fn laurent_coefficients(&self, center: &Scalar, upto: i64) -> Vec<(i64, Matrix<Scalar>)> {
        let den = self.denominator.shift(center);
        let low = den.valuation().expect("nonzero denominator") as i64;
        if upto < -low {
            return Vec::new();
        }
        let len = (upto + low + 1) as usize;
        let inv = inverse_series(&den, len);
        let shifted = self.numerator.map(|p| p.shift(center));
        (0..len)
            .map(|k| {
                let coeff = shifted.map(|p| (0..=k).fold(Scalar::zero(), |acc, i| acc + p.coeff(i) * &inv[k - i]));
                (k as i64 - low, coeff)
            })
            .collect()
    }

    /// Whether the denominator divides `bound`.
    pub fn denominator_divides(&self, bound: &Poly) -> bool {
        bound.exact_div(&self.denominator).is_some()
    }

    /// Entrywise rational functions in `z`.
    pub fn to_ratfunc_matrix(&self) -> Matrix<RatFunc> {
        self.numerator
            .map(|p| RatFunc::new(p.clone(), self.denominator.clone()).expect("nonzero denominator"))
    }
}

/// First `len` coefficients of `t^v / p(t)` where `v` is the valuation of `p`.
fn inverse_series(p: &Poly, len: usize) -> Vec<Scalar> {
    let low = p.valuation().expect("nonzero");
    let e = |i: usize| p.coeff(low + i);
    let lead_inv = e(0).recip();
    let mut out: Vec<Scalar> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = if k == 0 { Scalar::one() } else { Scalar::zero() };
        for i in 1..=k {
            acc -= e(i) * &out[k - i];
        }
        out.push(acc * &lead_inv);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum Reconstruction {
    Rational(RationalMatrixFunction),
    /// No numerator within the degree bound matches the series; carries the
    /// first level at which the series cannot be matched.
    NotRepresentable {
        first_unmatched_level: i64,
    },
}

/// Smallest integer eigenvalue of `κ·P_i` at each point, as pole orders.
pub fn propose_denominator(sys: &KzSystem) -> Result<Poly, ReconstructError> {
    let points = sys.exact_points().ok_or(ReconstructError::Symbolic)?;
    let mut den = Poly::one();
    for (i, (p, r)) in points.iter().zip(sys.residues()).enumerate() {
        let data = indicial_data(r, sys.coupling());
        let min = match (data.min_eigenvalue(), &data.irrational_factor) {
            (Some(v), None) if v.is_integer() => v.to_integer(),
            _ => return Err(ReconstructError::NoPolynomialDenominator { point: i }),
        };
        let order: u32 = (-min).try_into().unwrap_or(0);
        den = &den * &Poly::linear_factor(p).pow(order);
    }
    Ok(den)
}

/// Default numerator degree bound: `deg(den)` plus the largest integer
/// exponent at infinity, the top eigenvalue of `κ·Σ P_i`.
pub fn default_numerator_degree(sys: &KzSystem, den: &Poly) -> usize {
    let base = den.degree().unwrap_or(0);
    let growth = indicial_data(&sys.residue_sum(), sys.coupling())
        .max_level()
        .map_or(2, |m| m.max(0) as usize);
    base + growth
}

/// Solves for numerator polynomials of degree `<= max_num_degree` such that
/// `numerator / den` expanded at the series center reproduces every stored
/// coefficient and vanishes below the leading level.
pub fn reconstruct(
    series: &SeriesSolution<Scalar>,
    den: &Poly,
    max_num_degree: usize,
) -> Result<Reconstruction, ReconstructError> {
    let Point::Exact(center) = &series.center_point else {
        return Err(ReconstructError::Symbolic);
    };
    if den.is_zero() {
        return Err(ReconstructError::ZeroDenominator);
    }
    let needed = max_num_degree + den.degree().unwrap_or(0) + 2;
    if series.coeffs.len() < needed {
        return Err(ReconstructError::InsufficientSeries {
            needed,
            available: series.coeffs.len(),
        });
    }

    let n = series.coeffs[0].rows();
    let shifted_den = den.shift(center);
    let low = shifted_den.valuation().expect("nonzero") as i64;
    let rho = series.leading_exponent;
    let first = rho.min(-low);
    let last = series.last_level();
    let inv = inverse_series(&shifted_den, (last + low + 1).max(0) as usize);

    // column j: Laurent coefficients of z^j / den at the center
    let basis: Vec<Poly> = (0..=max_num_degree)
        .map(|j| Poly::monomial(Scalar::one(), j).shift(center))
        .collect();
    let rows = (last - first + 1) as usize;
    let lhs = Matrix::from_fn(rows, max_num_degree + 1, |r, j| {
        let k = first + r as i64 + low;
        if k < 0 {
            return Scalar::zero();
        }
        let k = k as usize;
        (0..=k).fold(Scalar::zero(), |acc, i| acc + basis[j].coeff(i) * &inv[k - i])
    });
    let zero = Matrix::zeros(n, n);
    let rhs = Matrix::from_fn(rows, n * n, |r, e| {
        let level = first + r as i64;
        series.coeff(level).unwrap_or(&zero).entries()[e].clone()
    });

    let solved = solve_linear(&lhs, &rhs).expect("row counts agree");
    if solved.kind == SolveKind::Inconsistent {
        let first_unmatched_level = (1..=rows)
            .find(|&len| {
                let sub_l = Matrix::from_fn(len, lhs.cols(), |i, j| lhs.get(i, j).clone());
                let sub_r = Matrix::from_fn(len, rhs.cols(), |i, j| rhs.get(i, j).clone());
                solve_linear(&sub_l, &sub_r).expect("shapes").kind == SolveKind::Inconsistent
            })
            .map(|len| first + len as i64 - 1)
            .expect("full system is inconsistent");
        return Ok(Reconstruction::NotRepresentable { first_unmatched_level });
    }

    let x = solved.particular.expect("consistent");
    let numerator = Matrix::from_fn(n, n, |i, k| Poly::new(x.column(i * n + k)));
    Ok(Reconstruction::Rational(RationalMatrixFunction::new(
        numerator,
        den.clone(),
    )?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OdeVerdict {
    pub satisfied: bool,
    /// `dW/dz - κ·A(z)·W(z)`, normalized.
    pub residual: RationalMatrixFunction,
    pub determinant: RatFunc,
    pub det_identically_zero: bool,
}

/// Forms `dW/dz - κ·A(z)·W` over the common denominator `den²·Π(z - z_i)`
/// and checks that its numerator vanishes identically.
pub fn verify_ode(w: &RationalMatrixFunction, sys: &KzSystem) -> Result<OdeVerdict, ReconstructError> {
    let points = sys.exact_points().ok_or(ReconstructError::Symbolic)?;
    let n = sys.dim();
    let num = w.numerator();
    let den = w.denominator();

    let factors: Vec<Poly> = points.iter().map(Poly::linear_factor).collect();
    let q = factors.iter().fold(Poly::one(), |acc, f| &acc * f);
    // A(z)·Q(z) as a polynomial matrix
    let a_num = sys
        .residues()
        .iter()
        .enumerate()
        .fold(Matrix::<Poly>::zeros(n, n), |acc, (i, r)| {
            let cofactor = q.exact_div(&factors[i]).expect("factor of product");
            &acc + &r.map(|c| cofactor.scale(c))
        });

    let kappa = sys.coupling();
    let d_den = den.derivative();
    let quotient_rule = num.map(|p| &(&p.derivative() * den) - &(p * &d_den));
    let lhs = quotient_rule.map(|p| p * &q);
    let rhs = (&a_num * num).map(|p| (p * den).scale(kappa));
    let residual = RationalMatrixFunction::new(&lhs - &rhs, &(den * den) * &q)?;

    let det_num = determinant(&num.map(|p| RatFunc::from_poly(p.clone()))).expect("square");
    let det_den = RatFunc::from_poly(den.pow(n as u32));
    let det = &det_num * &det_den.try_inv().expect("nonzero");

    Ok(OdeVerdict {
        satisfied: residual.is_zero(),
        det_identically_zero: det.is_zero(),
        determinant: det,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};
    use crate::model::{transposition_matrix, Convention};
    use crate::series::{compute_series, SeriesOptions};

    fn p1() -> Matrix<Scalar> {
        transposition_matrix(3, 1, 2).unwrap()
    }

    fn i_minus_p1() -> Matrix<Scalar> {
        &Matrix::identity(3) - &p1()
    }

    fn single_point(kappa: i64) -> KzSystem {
        KzSystem::new(vec![Point::Exact(int(0))], vec![p1()], int(kappa)).unwrap()
    }

    fn preset_numeric() -> KzSystem {
        KzSystem::kz_s3(Point::Exact(int(0)), Point::Exact(int(1)), int(2)).unwrap()
    }

    /// `(I - P1) / z^2`
    fn closed_form() -> RationalMatrixFunction {
        RationalMatrixFunction::new(
            i_minus_p1().map(|c| Poly::constant(c.clone())),
            Poly::from_ints(&[0, 0, 1]),
        )
        .unwrap()
    }

    fn numeric_series(sys: &KzSystem, order: usize) -> SeriesSolution<Scalar> {
        let exp = sys
            .local_expansion::<Scalar>(0, Convention::DerivedTaylor, order)
            .unwrap();
        compute_series(&exp, sys.coupling(), -2, order, SeriesOptions::default()).unwrap()
    }

    #[test]
    fn proposed_denominators() {
        assert_eq!(
            propose_denominator(&preset_numeric()).unwrap(),
            Poly::from_ints(&[0, 0, 1, -2, 1])
        );
        assert_eq!(
            propose_denominator(&single_point(2)).unwrap(),
            Poly::from_ints(&[0, 0, 1])
        );
        let k1 = KzSystem::kz_s3(Point::Exact(int(0)), Point::Exact(int(1)), int(1)).unwrap();
        assert_eq!(propose_denominator(&k1).unwrap(), Poly::from_ints(&[0, -1, 1]));
        let k23 = KzSystem::kz_s3(Point::Exact(int(0)), Point::Exact(int(1)), ratio(2, 3)).unwrap();
        assert_eq!(
            propose_denominator(&k23),
            Err(ReconstructError::NoPolynomialDenominator { point: 0 })
        );
        let sym = KzSystem::kz_s3(Point::Symbolic, Point::Symbolic, int(2)).unwrap();
        assert_eq!(propose_denominator(&sym), Err(ReconstructError::Symbolic));
    }

    #[test]
    fn default_degree_uses_growth_at_infinity() {
        let sys = preset_numeric();
        let den = propose_denominator(&sys).unwrap();
        // κ·(P1 + P2) has spectrum {-2, 2, 4}
        assert_eq!(default_numerator_degree(&sys, &den), 8);
    }

    #[test]
    fn single_point_reconstruction() {
        let sys = single_point(2);
        let s = numeric_series(&sys, 5);
        let rec = reconstruct(&s, &Poly::from_ints(&[0, 0, 1]), 0).unwrap();
        assert_eq!(rec, Reconstruction::Rational(closed_form()));
    }

    #[test]
    fn insufficient_length_is_an_error() {
        let sys = preset_numeric();
        let s = numeric_series(&sys, 2);
        let den = propose_denominator(&sys).unwrap();
        assert_eq!(
            reconstruct(&s, &den, 6),
            Err(ReconstructError::InsufficientSeries {
                needed: 12,
                available: 3
            })
        );
    }

    #[test]
    fn numeric_preset_is_rational() {
        let sys = preset_numeric();
        let s = numeric_series(&sys, 14);
        let den = propose_denominator(&sys).unwrap();
        let Reconstruction::Rational(w) = reconstruct(&s, &den, 8).unwrap() else {
            panic!("expected a rational witness");
        };
        assert_eq!(w.max_numerator_degree(), Some(8));
        let verdict = verify_ode(&w, &sys).unwrap();
        assert!(verdict.satisfied);
        assert!(verdict.residual.is_zero());
        assert!(verdict.det_identically_zero);
        assert!(w.denominator_divides(&den));
        for (p, b) in w.laurent_coefficients(&int(0), s.last_level()) {
            assert_eq!(Some(&b), s.coeff(p), "level {p}");
        }
    }

    #[test]
    fn degree_six_is_too_small_for_the_zero_kernel_branch() {
        let sys = preset_numeric();
        let s = numeric_series(&sys, 14);
        let den = propose_denominator(&sys).unwrap();
        // numerator degree 8 means the first mismatch shows at level 7 - 2 = 5
        assert_eq!(
            reconstruct(&s, &den, 6).unwrap(),
            Reconstruction::NotRepresentable {
                first_unmatched_level: 5
            }
        );
    }

    #[test]
    fn ode_verdicts() {
        let v = verify_ode(&closed_form(), &single_point(2)).unwrap();
        assert!(v.satisfied && v.det_identically_zero);

        let identity = RationalMatrixFunction::new(Matrix::identity(3), Poly::one()).unwrap();
        let v = verify_ode(&identity, &single_point(0)).unwrap();
        assert!(v.satisfied);
        assert!(!v.det_identically_zero);

        // (I + P1) / z^2: sign of P1 flipped
        let i_plus_p1 = &Matrix::identity(3) + &p1();
        let flipped = RationalMatrixFunction::new(
            i_plus_p1.map(|c| Poly::constant(c.clone())),
            Poly::from_ints(&[0, 0, 1]),
        )
        .unwrap();
        let v = verify_ode(&flipped, &single_point(2)).unwrap();
        assert!(!v.satisfied);
        assert!(!v.residual.is_zero());
    }

    #[test]
    fn evaluation() {
        let w = closed_form();
        assert_eq!(w.evaluate(&int(1)).unwrap(), i_minus_p1());
        assert_eq!(w.evaluate(&int(2)).unwrap(), i_minus_p1().scale(&ratio(1, 4)));
        assert_eq!(w.evaluate(&int(0)), Err(ReconstructError::Pole(int(0))));
    }

    #[test]
    fn normalization_removes_common_factors() {
        let num = Matrix::from_fn(
            2,
            2,
            |i, j| if i == j { Poly::from_ints(&[0, 3]) } else { Poly::zero() },
        );
        let w = RationalMatrixFunction::new(num, Poly::from_ints(&[0, 0, 2])).unwrap();
        assert_eq!(w.denominator(), &Poly::x());
        assert_eq!(w.numerator().get(0, 0), &Poly::constant(ratio(3, 2)));
    }
}
