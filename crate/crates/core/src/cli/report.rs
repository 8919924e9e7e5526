//! Machine-readable run report. Every value is an exact string (rationals
//! `"p/q"`, rational functions of `d` in the canonical text form of
//! [`crate::arith::RatFunc`], polynomials in `z`), so parsing a report and
//! serializing it again reproduces the same bytes.

use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::arith::{format_scalar, Matrix};
use crate::series::{IndicialData, ResonanceRecord};

use super::config::SystemConfig;

pub type MatrixText = Vec<Vec<String>>;

pub fn matrix_text<T: Display + Clone>(m: &Matrix<T>) -> MatrixText {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelMatrix {
    pub level: i64,
    pub matrix: MatrixText,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicialReport {
    /// Rational eigenvalues of `κ·a_{-1}` at the center.
    pub eigenvalues: Vec<Eigenvalue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irrational_factor: Option<String>,
    pub resonant_levels: Vec<i64>,
}

impl From<&IndicialData> for IndicialReport {
    fn from(data: &IndicialData) -> Self {
        IndicialReport {
            eigenvalues: data
                .eigenvalues
                .iter()
                .map(|(v, m)| Eigenvalue {
                    value: format_scalar(v),
                    multiplicity: *m,
                })
                .collect(),
            irrational_factor: data.irrational_factor.as_ref().map(|p| p.display("x")),
            resonant_levels: data.resonant_levels.iter().copied().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionReport {
    /// `a_{-1}, a_0, ...` of `A(z) = Σ a_r t^r`, `t = z - z_c`.
    pub coefficients: Vec<LevelMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub leading_exponent: i64,
    pub leading_policy: String,
    pub coefficients: Vec<LevelMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResonanceReport {
    pub level: i64,
    pub kind: String,
    pub kernel_basis: Vec<Vec<String>>,
    pub rhs: MatrixText,
}

impl<F: Display + Clone> From<&ResonanceRecord<F>> for ResonanceReport {
    fn from(r: &ResonanceRecord<F>) -> Self {
        ResonanceReport {
            level: r.level,
            kind: r.kind.as_str().to_string(),
            kernel_basis: r
                .kernel_basis
                .iter()
                .map(|v| v.iter().map(ToString::to_string).collect())
                .collect(),
            rhs: matrix_text(&r.rhs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionCheckReport {
    pub all_satisfied: bool,
    pub failing_levels: Vec<i64>,
    /// Right side of the first level past the computed coefficients.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frontier: Option<LevelMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    /// `rational`, `not-representable` or `no-polynomial-denominator`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_num_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerator: Option<MatrixText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_unmatched_level: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reexpansion_matches: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdeReport {
    pub satisfied: bool,
    pub residual_numerator: MatrixText,
    pub residual_denominator: String,
    pub determinant: String,
    pub det_identically_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenItemReport {
    pub name: String,
    pub matched: bool,
    pub dual_matched: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<String>,
    pub computed: MatrixText,
    pub reference: MatrixText,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenReport {
    pub dual_accepted: bool,
    pub passed: bool,
    pub summary: String,
    pub items: Vec<GoldenItemReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimum_order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<SystemConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    /// 1-based.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indicial: Option<IndicialReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion: Option<ExpansionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub resonances: Vec<ResonanceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recursion_check: Option<RecursionCheckReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reconstruction: Option<ReconstructionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ode: Option<OdeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golden: Option<GoldenReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            exit_code: 0,
            config: None,
            mode: None,
            convention: None,
            center: None,
            coupling: None,
            indicial: None,
            expansion: None,
            series: None,
            resonances: Vec::new(),
            recursion_check: None,
            reconstruction: None,
            ode: None,
            golden: None,
            error: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<RunReport, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{RatFunc, Scalar};

    #[test]
    fn round_trip_is_byte_identical() {
        let mut r = RunReport::new("series");
        r.series = Some(SeriesReport {
            leading_exponent: -2,
            leading_policy: "paper-projector".into(),
            coefficients: vec![LevelMatrix {
                level: -1,
                matrix: matrix_text(&Matrix::from_fn(2, 2, |i, j| {
                    RatFunc::monomial(Scalar::new((i as i64 - 3).into(), (j as i64 + 2).into()), -1)
                })),
            }],
        });
        r.error = Some(ErrorReport {
            kind: "obstruction".into(),
            message: "x".into(),
            level: Some(1),
            certificate: Some(vec!["0".into(), "1".into()]),
            minimum_order: None,
        });
        let first = r.to_json();
        let parsed = RunReport::from_json(&first).unwrap();
        assert_eq!(parsed, r);
        assert_eq!(parsed.to_json(), first);
        let entry = &parsed.series.unwrap().coefficients[0].matrix[0][1];
        assert_eq!(
            RatFunc::parse(entry, "d").unwrap(),
            RatFunc::monomial(Scalar::new((-1).into(), 1.into()), -1)
        );
    }
}
