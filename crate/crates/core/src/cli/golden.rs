//! Reference tables for the S3 preset expanded at `z1` with `κ = 2`,
//! `ρ = -2`, symbolic `d = z2 - z1`, alternating-sign expansion.
//!
//! Each fixture is `matrix / (prefactor · d^power)`, transcribed verbatim
//! from the reference tables.

use num_traits::Zero;

use crate::arith::{format_scalar, int, Field, Matrix, RatFunc, Scalar};
use crate::model::{sign, Convention, KzSystem, Point};
use crate::series::{compute_series, verify_recursion, SeriesError, SeriesOptions, SeriesSolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// The series coefficient `b_level`.
    Coefficient(i64),
    /// The normalized right side `(I - P1)·b_2 = Σ_{j≥0} a_j b_{1-j}` of the
    /// resonant step.
    ResonantRhs,
}

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub target: Target,
    pub prefactor: i64,
    pub power: i64,
    pub matrix: [[i64; 3]; 3],
}

pub const FIXTURES: [Fixture; 5] = [
    Fixture {
        name: "b_-2",
        target: Target::Coefficient(-2),
        prefactor: 1,
        power: 0,
        matrix: [[1, -1, 0], [-1, 1, 0], [0, 0, 0]],
    },
    Fixture {
        name: "b_-1",
        target: Target::Coefficient(-1),
        prefactor: -9,
        power: 1,
        matrix: [[-12, 12, 0], [6, -6, 0], [6, -6, 0]],
    },
    Fixture {
        name: "b_0",
        target: Target::Coefficient(0),
        prefactor: -9,
        power: 2,
        matrix: [[3, -3, 0], [-6, 6, 0], [3, -3, 0]],
    },
    Fixture {
        name: "b_1",
        target: Target::Coefficient(1),
        prefactor: -9,
        power: 3,
        matrix: [[6, -6, 0], [6, -6, 0], [-12, 12, 0]],
    },
    Fixture {
        name: "resonant rhs",
        target: Target::ResonantRhs,
        prefactor: -9,
        power: 4,
        matrix: [[1, -1, 0], [-1, 1, 0], [0, 0, 0]],
    },
];

pub const RESONANT_LEVEL: i64 = 2;
pub const LEADING_EXPONENT: i64 = -2;

impl Fixture {
    pub fn value(&self) -> Matrix<RatFunc> {
        let pre = RatFunc::monomial(Scalar::new(1.into(), self.prefactor.into()), -self.power);
        Matrix::from_fn(3, 3, |i, j| &RatFunc::from_int(self.matrix[i][j]) * &pre)
    }

    /// Level used for the `d -> -d` twist.
    fn parity(&self) -> i64 {
        match self.target {
            Target::Coefficient(p) => p,
            Target::ResonantRhs => RESONANT_LEVEL,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoldenItem {
    pub name: String,
    pub matched: bool,
    /// Matches after the `d -> -d` substitution.
    pub dual_matched: bool,
    /// `computed = ratio × reference` when the two are proportional.
    pub ratio: Option<Scalar>,
    pub computed: Matrix<RatFunc>,
    pub reference: Matrix<RatFunc>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoldenOutcome {
    pub items: Vec<GoldenItem>,
}

impl GoldenOutcome {
    pub fn all_matched(&self) -> bool {
        self.items.iter().all(|i| i.matched)
    }

    pub fn all_dual_matched(&self) -> bool {
        self.items.iter().all(|i| i.dual_matched)
    }

    pub fn summary(&self) -> String {
        let coeffs = self.items.iter().filter(|i| i.name.starts_with("b_")).count();
        if self.all_matched() {
            return format!("golden: match ({coeffs} coefficients + resonant RHS)");
        }
        if self.all_dual_matched() {
            return "golden: match up to d→−d duality".to_string();
        }
        let failed: Vec<String> = self
            .items
            .iter()
            .filter(|i| !i.matched && !i.dual_matched)
            .map(|i| match &i.ratio {
                Some(r) => format!("{} (computed = {} × reference)", i.name, format_scalar(r)),
                None => i.name.clone(),
            })
            .collect();
        format!("golden: mismatch in {}", failed.join(", "))
    }
}

/// `Some(c)` when `computed = c · reference` with both nonzero.
fn proportionality(computed: &Matrix<RatFunc>, reference: &Matrix<RatFunc>) -> Option<Scalar> {
    let k = reference.entries().iter().position(|e| !e.is_zero())?;
    let ratio = &computed.entries()[k] / &reference.entries()[k];
    let ratio = ratio.as_scalar()?;
    (reference.scale(&RatFunc::from_scalar(&ratio)) == *computed).then_some(ratio)
}

/// Runs the preset in symbolic mode with the given convention and compares
/// against the fixtures.
pub fn compare(convention: Convention) -> Result<GoldenOutcome, SeriesError> {
    let sys = KzSystem::kz_s3(Point::Symbolic, Point::Symbolic, int(2)).expect("preset is valid");
    let order = (RESONANT_LEVEL - LEADING_EXPONENT) as usize;
    let exp = sys
        .local_expansion::<RatFunc>(0, convention, order)
        .expect("symbolic preset expands");
    let series = compute_series(&exp, &int(2), LEADING_EXPONENT, order, SeriesOptions::default())?;
    Ok(compare_series(&series, &exp))
}

pub fn compare_series(series: &SeriesSolution<RatFunc>, exp: &crate::model::LocalExpansion<RatFunc>) -> GoldenOutcome {
    let report = verify_recursion(series, exp, &int(2));
    let half = RatFunc::from_scalar(&Scalar::new(1.into(), 2.into()));
    let items = FIXTURES
        .iter()
        .map(|fx| {
            let reference = fx.value();
            let computed = match fx.target {
                Target::Coefficient(p) => series.coeff(p).cloned(),
                Target::ResonantRhs => report.rhs_at(RESONANT_LEVEL).map(|m| m.scale(&half)),
            }
            .unwrap_or_else(|| Matrix::zeros(3, 3));
            let twisted = computed.scale(&sign(fx.parity()));
            GoldenItem {
                name: fx.name.to_string(),
                matched: computed == reference,
                dual_matched: twisted == reference,
                ratio: proportionality(&computed, &reference),
                computed,
                reference,
            }
        })
        .collect();
    GoldenOutcome { items }
}
