//! KZ-type Fuchsian systems `dW/dz = κ·A(z)·W` with
//! `A(z) = Σ_i P_i / (z - z_i)`, and their local expansions
//! `A(z) = a_{-1}/(z - z_c) + Σ_{r≥0} a_r (z - z_c)^r` at a singular point.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{int, Field, Matrix, RatFunc, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("transposition ({i} {j}) is out of range for n = {n}")]
    IndexOutOfRange { n: usize, i: usize, j: usize },
    #[error("singular points {0} and {1} coincide")]
    CoincidentPoints(usize, usize),
    #[error("invalid system: {0}")]
    Invalid(String),
    #[error("z = {0} is a singular point")]
    SingularPoint(Scalar),
    #[error("operation requires a numeric system")]
    SymbolicSystem,
    #[error("symbolic system requires a field with a formal parameter")]
    NoParameter,
    #[error("center {0} is not a singular point index")]
    BadCenter(usize),
    #[error("the literal convention is only defined for two symbolic points")]
    LiteralNeedsSymbolicPair,
}

/// A singular point: an exact rational, or the formal marker used when both
/// points of a two-point system are kept symbolic with `d = z2 - z1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Exact(Scalar),
    Symbolic,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Exact(s) => write!(f, "{s}"),
            Point::Symbolic => f.write_str("symbolic"),
        }
    }
}

/// How the regular coefficients `a_r` at the center are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Geometric-series expansion of each `1/(z - z_i)`:
    /// `a_r = -Σ_{i≠c} P_i / (z_i - z_c)^{r+1}`.
    DerivedTaylor,
    /// Alternating-sign table `a_r = (-1)^r · P_other / (z_other - z_c)^{r+1}`,
    /// kept for reproducing the reference coefficient tables. Equals the
    /// Taylor coefficients with `d` replaced by `-d`.
    Literal,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::DerivedTaylor => "derived-taylor",
            Convention::Literal => "literal-paper",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "derived-taylor" => Some(Convention::DerivedTaylor),
            "literal-paper" => Some(Convention::Literal),
            _ => None,
        }
    }
}

/// Fields in which expansion coefficients can be expressed. Symbolic
/// systems need the formal parameter `d`.
pub trait ExpansionField: Field + fmt::Display {
    fn parameter() -> Option<Self>;
}

impl ExpansionField for Scalar {
    fn parameter() -> Option<Self> {
        None
    }
}

impl ExpansionField for RatFunc {
    fn parameter() -> Option<Self> {
        Some(RatFunc::param())
    }
}

/// Permutation matrix of the transposition `(i j)`, 1-based indices.
pub fn transposition_matrix(n: usize, i: usize, j: usize) -> Result<Matrix<Scalar>, ModelError> {
    if !(1 <= i && i < j && j <= n) {
        return Err(ModelError::IndexOutOfRange { n, i, j });
    }
    let (i, j) = (i - 1, j - 1);
    let image = |k: usize| {
        if k == i {
            j
        } else if k == j {
            i
        } else {
            k
        }
    };
    Ok(Matrix::from_fn(n, n, |r, c| {
        if image(c) == r {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct KzSystem {
    points: Vec<Point>,
    residues: Vec<Matrix<Scalar>>,
    coupling: Scalar,
}

impl KzSystem {
    pub fn new(points: Vec<Point>, residues: Vec<Matrix<Scalar>>, coupling: Scalar) -> Result<Self, ModelError> {
        if points.is_empty() {
            return Err(ModelError::Invalid("no singular points".into()));
        }
        if points.len() != residues.len() {
            return Err(ModelError::Invalid(format!(
                "{} points but {} residues",
                points.len(),
                residues.len()
            )));
        }
        let n = residues[0].rows();
        if n == 0 || residues.iter().any(|r| !r.is_square() || r.rows() != n) {
            return Err(ModelError::Invalid("residues must be square of one common size".into()));
        }
        let symbolic = points.iter().filter(|p| **p == Point::Symbolic).count();
        if symbolic > 0 && (symbolic != points.len() || points.len() != 2) {
            return Err(ModelError::Invalid(
                "symbolic points are only allowed as a pair of two symbolic points".into(),
            ));
        }
        for a in 0..points.len() {
            for b in a + 1..points.len() {
                if let (Point::Exact(x), Point::Exact(y)) = (&points[a], &points[b]) {
                    if x == y {
                        return Err(ModelError::CoincidentPoints(a, b));
                    }
                }
            }
        }
        Ok(KzSystem {
            points,
            residues,
            coupling,
        })
    }

    /// Three-dimensional preset with residues `(1 2)` at `z1` and `(1 3)` at `z2`.
    pub fn kz_s3(z1: Point, z2: Point, coupling: Scalar) -> Result<Self, ModelError> {
        let p1 = transposition_matrix(3, 1, 2)?;
        let p2 = transposition_matrix(3, 1, 3)?;
        KzSystem::new(vec![z1, z2], vec![p1, p2], coupling)
    }

    pub fn dim(&self) -> usize {
        self.residues[0].rows()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn residues(&self) -> &[Matrix<Scalar>] {
        &self.residues
    }

    pub fn coupling(&self) -> &Scalar {
        &self.coupling
    }

    pub fn is_symbolic(&self) -> bool {
        self.points[0] == Point::Symbolic
    }

    /// Exact coordinates of all points; `None` for a symbolic system.
    pub fn exact_points(&self) -> Option<Vec<Scalar>> {
        self.points
            .iter()
            .map(|p| match p {
                Point::Exact(s) => Some(s.clone()),
                Point::Symbolic => None,
            })
            .collect()
    }

    /// Sum of all residues, the negated residue at infinity.
    pub fn residue_sum(&self) -> Matrix<Scalar> {
        self.residues
            .iter()
            .fold(Matrix::zeros(self.dim(), self.dim()), |acc, r| &acc + r)
    }

    /// `A(z)` at a regular point. The coupling is not applied.
    pub fn system_matrix_at(&self, z: &Scalar) -> Result<Matrix<Scalar>, ModelError> {
        let points = self.exact_points().ok_or(ModelError::SymbolicSystem)?;
        let n = self.dim();
        points
            .iter()
            .zip(&self.residues)
            .try_fold(Matrix::zeros(n, n), |acc, (p, r)| {
                let gap = z - p;
                if gap.is_zero() {
                    return Err(ModelError::SingularPoint(z.clone()));
                }
                Ok(&acc + &r.scale(&gap.recip()))
            })
    }

    /// `z_i - z_c` in the field `F`.
    fn separation<F: ExpansionField>(&self, i: usize, center: usize) -> Result<F, ModelError> {
        match (&self.points[i], &self.points[center]) {
            (Point::Exact(a), Point::Exact(b)) => Ok(F::from_scalar(&(a - b))),
            _ => {
                let d = F::parameter().ok_or(ModelError::NoParameter)?;
                // d = z2 - z1
                Ok(if i > center { d } else { -d })
            }
        }
    }

    /// `a_{-1}` and `a_0..=a_order` at `points[center]`.
    pub fn local_expansion<F: ExpansionField>(
        &self,
        center: usize,
        convention: Convention,
        order: usize,
    ) -> Result<LocalExpansion<F>, ModelError> {
        if center >= self.points.len() {
            return Err(ModelError::BadCenter(center));
        }
        if convention == Convention::Literal && !self.is_symbolic() {
            return Err(ModelError::LiteralNeedsSymbolicPair);
        }
        if self.is_symbolic() && F::parameter().is_none() {
            return Err(ModelError::NoParameter);
        }

        // (residue, 1 / separation) for every other point
        let others = (0..self.points.len())
            .filter(|&i| i != center)
            .map(|i| {
                let s: F = self.separation(i, center)?;
                let inv = s.try_inv().expect("distinct points");
                Ok((Matrix::<F>::from_scalar_matrix(&self.residues[i]), inv))
            })
            .collect::<Result<Vec<_>, ModelError>>()?;

        let n = self.dim();
        let mut regular = Vec::with_capacity(order + 1);
        let mut powers: Vec<F> = others.iter().map(|(_, inv)| inv.clone()).collect();
        for r in 0..=order {
            let mut a = Matrix::zeros(n, n);
            for ((res, inv), pw) in others.iter().zip(powers.iter_mut()) {
                a = &a + &res.scale(pw);
                *pw = pw.clone() * inv.clone();
            }
            let sign = match convention {
                Convention::DerivedTaylor => -F::one(),
                Convention::Literal if r % 2 == 0 => F::one(),
                Convention::Literal => -F::one(),
            };
            regular.push(a.scale(&sign));
        }

        Ok(LocalExpansion {
            center,
            center_point: self.points[center].clone(),
            a_minus1: Matrix::from_scalar_matrix(&self.residues[center]),
            regular,
            convention,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalExpansion<F> {
    pub center: usize,
    pub center_point: Point,
    pub a_minus1: Matrix<F>,
    /// `a_0, a_1, ...`
    pub regular: Vec<Matrix<F>>,
    pub convention: Convention,
}

impl<F: ExpansionField> LocalExpansion<F> {
    pub fn dim(&self) -> usize {
        self.a_minus1.rows()
    }

    /// Number of regular coefficients available minus one.
    pub fn order(&self) -> usize {
        self.regular.len().saturating_sub(1)
    }

    /// `a_r` for `r >= -1`, if computed.
    pub fn coeff(&self, r: i64) -> Option<&Matrix<F>> {
        match r {
            -1 => Some(&self.a_minus1),
            r if r >= 0 => self.regular.get(r as usize),
            _ => None,
        }
    }

    /// The residue at the center as rationals.
    pub fn residue(&self) -> Matrix<Scalar> {
        self.a_minus1.to_scalar_matrix().expect("residues are rational")
    }
}

/// `(-1)^k` in any field.
pub(crate) fn sign<F: Field>(k: i64) -> F {
    if k.rem_euclid(2) == 0 {
        F::one()
    } else {
        -F::one()
    }
}

/// Convenience for the default coupling constant.
pub fn default_coupling() -> Scalar {
    int(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ratio, Poly};

    fn p1() -> Matrix<Scalar> {
        transposition_matrix(3, 1, 2).unwrap()
    }

    fn p2() -> Matrix<Scalar> {
        transposition_matrix(3, 1, 3).unwrap()
    }

    fn exact(v: i64) -> Point {
        Point::Exact(int(v))
    }

    #[test]
    fn transpositions() {
        assert_eq!(p1(), Matrix::from_int_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]));
        assert_eq!(p2(), Matrix::from_int_rows(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
        assert_eq!(
            transposition_matrix(2, 1, 2).unwrap(),
            Matrix::from_int_rows(&[&[0, 1], &[1, 0]])
        );
        assert!(transposition_matrix(3, 2, 2).is_err());
        assert!(transposition_matrix(3, 0, 2).is_err());
        assert!(transposition_matrix(3, 2, 4).is_err());
    }

    #[test]
    fn transpositions_are_symmetric_involutions() {
        for n in 2..=8 {
            for i in 1..n {
                for j in i + 1..=n {
                    let t = transposition_matrix(n, i, j).unwrap();
                    assert_eq!(t.transpose(), t);
                    assert_eq!(&t * &t, Matrix::identity(n));
                }
            }
        }
    }

    #[test]
    fn build_preset() {
        let sys = KzSystem::kz_s3(exact(0), exact(1), int(2)).unwrap();
        assert_eq!(sys.points(), &[exact(0), exact(1)]);
        assert_eq!(sys.residues(), &[p1(), p2()]);
        assert_eq!(sys.coupling(), &int(2));
        assert!(KzSystem::kz_s3(Point::Symbolic, Point::Symbolic, int(2))
            .unwrap()
            .is_symbolic());
        assert_eq!(
            KzSystem::kz_s3(exact(0), exact(0), int(2)),
            Err(ModelError::CoincidentPoints(0, 1))
        );
        assert!(KzSystem::kz_s3(Point::Symbolic, exact(0), int(2)).is_err());
    }

    #[test]
    fn evaluation() {
        let sys = KzSystem::kz_s3(exact(0), exact(1), int(2)).unwrap();
        let at2 = Matrix::from_rows(vec![
            vec![int(0), ratio(1, 2), int(1)],
            vec![ratio(1, 2), int(1), int(0)],
            vec![int(1), int(0), ratio(1, 2)],
        ])
        .unwrap();
        assert_eq!(sys.system_matrix_at(&int(2)).unwrap(), at2);
        assert_eq!(
            sys.system_matrix_at(&ratio(1, 2)).unwrap(),
            Matrix::from_int_rows(&[&[0, 2, -2], &[2, -2, 0], &[-2, 0, 2]])
        );
        assert_eq!(sys.system_matrix_at(&int(0)), Err(ModelError::SingularPoint(int(0))));
        let sym = KzSystem::kz_s3(Point::Symbolic, Point::Symbolic, int(2)).unwrap();
        assert_eq!(sym.system_matrix_at(&int(2)), Err(ModelError::SymbolicSystem));
    }

    #[test]
    fn symbolic_expansions() {
        let sys = KzSystem::kz_s3(Point::Symbolic, Point::Symbolic, int(2)).unwrap();
        let d = RatFunc::param();
        let lit = sys.local_expansion::<RatFunc>(0, Convention::Literal, 3).unwrap();
        let p2f = Matrix::<RatFunc>::from_scalar_matrix(&p2());
        let d3 = &(&d * &d) * &d;
        assert_eq!(lit.coeff(2).unwrap(), &p2f.scale(&d3.try_inv().unwrap()));
        assert_eq!(lit.coeff(-1).unwrap(), &Matrix::from_scalar_matrix(&p1()));

        let der = sys.local_expansion::<RatFunc>(0, Convention::DerivedTaylor, 3).unwrap();
        assert_eq!(der.coeff(0).unwrap(), &p2f.scale(&-d.try_inv().unwrap()));
        assert_eq!(der.coeff(-1).unwrap(), &Matrix::from_scalar_matrix(&p1()));
        assert!(der.coeff(4).is_none());
    }

    #[test]
    fn literal_convention_restricted_to_symbolic_pairs() {
        let sys = KzSystem::kz_s3(exact(0), exact(1), int(2)).unwrap();
        assert_eq!(
            sys.local_expansion::<Scalar>(0, Convention::Literal, 2),
            Err(ModelError::LiteralNeedsSymbolicPair)
        );
        let sym = KzSystem::kz_s3(Point::Symbolic, Point::Symbolic, int(2)).unwrap();
        assert_eq!(
            sym.local_expansion::<Scalar>(0, Convention::DerivedTaylor, 2),
            Err(ModelError::NoParameter)
        );
        assert_eq!(
            sys.local_expansion::<Scalar>(2, Convention::DerivedTaylor, 2),
            Err(ModelError::BadCenter(2))
        );
    }

    /// Taylor coefficients of `1/(t - s)` at `t = 0` by power-series
    /// division of `1` by `(t - s)`, independent of the closed form.
    fn geometric_oracle(s: &Scalar, order: usize) -> Vec<Scalar> {
        let divisor = Poly::new(vec![-s.clone(), Scalar::one()]);
        let mut out = Vec::new();
        let mut rem = vec![Scalar::zero(); order + 2];
        rem[0] = Scalar::one();
        for k in 0..=order {
            let c = &rem[k] / divisor.coeff(0);
            rem[k] -= &c * divisor.coeff(0);
            rem[k + 1] -= &c * divisor.coeff(1);
            out.push(c);
        }
        out
    }

    #[test]
    fn derived_taylor_matches_series_oracle() {
        let points = [int(0), ratio(3, 2), int(-2)];
        let residues = vec![p1(), p2(), transposition_matrix(3, 2, 3).unwrap()];
        let sys = KzSystem::new(
            points.iter().cloned().map(Point::Exact).collect(),
            residues.clone(),
            int(2),
        )
        .unwrap();
        for center in 0..3 {
            let exp = sys
                .local_expansion::<Scalar>(center, Convention::DerivedTaylor, 15)
                .unwrap();
            let mut expected = vec![Matrix::<Scalar>::zeros(3, 3); 16];
            for i in (0..3).filter(|&i| i != center) {
                let coeffs = geometric_oracle(&(&points[i] - &points[center]), 15);
                for (r, c) in coeffs.iter().enumerate() {
                    expected[r] = &expected[r] + &residues[i].scale(c);
                }
            }
            assert_eq!(exp.regular, expected, "center {center}");
        }
    }

    #[test]
    fn conventions_are_dual_under_reflection() {
        let sys = KzSystem::kz_s3(Point::Symbolic, Point::Symbolic, int(2)).unwrap();
        for center in 0..2 {
            let lit = sys.local_expansion::<RatFunc>(center, Convention::Literal, 15).unwrap();
            let der = sys
                .local_expansion::<RatFunc>(center, Convention::DerivedTaylor, 15)
                .unwrap();
            for r in 0..=15 {
                let reflected = der.regular[r].map(RatFunc::reflect);
                assert_eq!(lit.regular[r], reflected);
                assert_eq!(lit.regular[r], der.regular[r].scale(&sign(r as i64 + 1)));
                for e in lit.regular[r].entries().iter().filter(|e| !e.is_zero()) {
                    assert_eq!(e.as_monomial().unwrap().1, -(r as i64 + 1));
                }
            }
        }
    }
}
