//! JSON system description.
//!
//! ```json
//! {
//!   "points": ["0", "1"],
//!   "residues": "kz-s3",
//!   "coupling": "2",
//!   "convention": "derived-taylor",
//!   "order": 14,
//!   "center": 1
//! }
//! ```
//!
//! Rationals are strings `"p"` or `"p/q"`; decimals are rejected.
//! `points` may be `["symbolic", "symbolic"]`. Explicit residues are a list
//! of row-major matrices of rational strings or integers. `center` is
//! 1-based. Optional: `mode`, `leading_exponent`, `leading_policy`,
//! `denominator` (polynomial in `z`, e.g. `"z^2 - 2*z + 1"`),
//! `max_num_degree`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{parse_scalar, Matrix, Poly, Scalar};
use crate::model::{default_coupling, Convention, KzSystem, ModelError, Point};
use crate::series::LeadingPolicy;

pub const PRESET_KZ_S3: &str = "kz-s3";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("config field `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

fn field_error(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResidueSpec {
    Preset(String),
    Explicit(Vec<Vec<Vec<Entry>>>),
}

/// The config document as written; also echoed into reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    pub points: Vec<String>,
    pub residues: ResidueSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leading_exponent: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leading_policy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_num_degree: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Numeric,
    Symbolic,
}

/// A validated config.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub raw: SystemConfig,
    pub mode: Mode,
    pub system: KzSystem,
    pub preset: Option<String>,
    pub convention: Convention,
    pub order: usize,
    /// 0-based.
    pub center: usize,
    pub leading_exponent: Option<i64>,
    pub leading_policy: Option<LeadingPolicy>,
    pub denominator: Option<Poly>,
    pub max_num_degree: Option<usize>,
}

pub const DEFAULT_ORDER: usize = 6;

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: SystemConfig = serde_json::from_str(text).map_err(|e| field_error("<document>", e.to_string()))?;
    validate(raw)
}

pub fn validate(raw: SystemConfig) -> Result<RunConfig, ConfigError> {
    let points = raw
        .points
        .iter()
        .map(|p| match p.trim() {
            "symbolic" => Ok(Point::Symbolic),
            s => parse_scalar(s)
                .map(Point::Exact)
                .map_err(|e| field_error("points", e.to_string())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let symbolic = points.contains(&Point::Symbolic);
    let mode = match raw.mode.as_deref() {
        None => {
            if symbolic {
                Mode::Symbolic
            } else {
                Mode::Numeric
            }
        }
        Some("symbolic") if symbolic => Mode::Symbolic,
        Some("numeric") if !symbolic => Mode::Numeric,
        Some(m @ ("symbolic" | "numeric")) => {
            return Err(field_error("mode", format!("{m} does not match the given points")))
        }
        Some(other) => return Err(field_error("mode", format!("unknown mode {other:?}"))),
    };

    let coupling = match &raw.coupling {
        Some(c) => parse_scalar(c).map_err(|e| field_error("coupling", e.to_string()))?,
        None => default_coupling(),
    };

    let (residues, preset) = match &raw.residues {
        ResidueSpec::Preset(name) if name == PRESET_KZ_S3 => {
            if points.len() != 2 {
                return Err(field_error("points", "preset kz-s3 needs exactly two points"));
            }
            let sys = KzSystem::kz_s3(points[0].clone(), points[1].clone(), coupling.clone()).map_err(model_error)?;
            (sys.residues().to_vec(), Some(name.clone()))
        }
        ResidueSpec::Preset(name) => return Err(field_error("residues", format!("unknown preset {name:?}"))),
        ResidueSpec::Explicit(mats) => (
            mats.iter()
                .map(|rows| parse_matrix(rows))
                .collect::<Result<Vec<_>, _>>()?,
            None,
        ),
    };
    let system = KzSystem::new(points, residues, coupling).map_err(model_error)?;

    let convention = match raw.convention.as_deref() {
        None => Convention::DerivedTaylor,
        Some(c) => Convention::parse(c).ok_or_else(|| {
            field_error(
                "convention",
                format!("expected derived-taylor or literal-paper, got {c:?}"),
            )
        })?,
    };
    if convention == Convention::Literal && mode != Mode::Symbolic {
        return Err(field_error("convention", "literal-paper requires two symbolic points"));
    }

    let center = match raw.center {
        None => 0,
        Some(c) if c >= 1 && c <= system.points().len() => c - 1,
        Some(c) => {
            return Err(field_error(
                "center",
                format!("{c} is not in 1..={}", system.points().len()),
            ))
        }
    };

    let leading_policy = raw
        .leading_policy
        .as_deref()
        .map(|p| {
            LeadingPolicy::parse(p).ok_or_else(|| {
                field_error(
                    "leading_policy",
                    format!("expected paper-projector or kernel-columns, got {p:?}"),
                )
            })
        })
        .transpose()?;

    let denominator = raw
        .denominator
        .as_deref()
        .map(|d| {
            let p = Poly::parse(d, "z").map_err(|e| field_error("denominator", e.to_string()))?;
            if p.is_zero() {
                Err(field_error("denominator", "must be nonzero"))
            } else {
                Ok(p)
            }
        })
        .transpose()?;

    Ok(RunConfig {
        mode,
        preset,
        convention,
        order: raw.order.unwrap_or(DEFAULT_ORDER),
        center,
        leading_exponent: raw.leading_exponent,
        leading_policy,
        denominator,
        max_num_degree: raw.max_num_degree,
        system,
        raw,
    })
}

fn parse_matrix(rows: &[Vec<Entry>]) -> Result<Matrix<Scalar>, ConfigError> {
    let parsed = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    Entry::Int(v) => Ok(Scalar::from_integer((*v).into())),
                    Entry::Text(s) => parse_scalar(s).map_err(|e| field_error("residues", e.to_string())),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(parsed).map_err(|e| field_error("residues", e.to_string()))
}

fn model_error(e: ModelError) -> ConfigError {
    match e {
        ModelError::CoincidentPoints(..) => field_error("points", format!("coincident points: {e}")),
        other => field_error("residues", other.to_string()),
    }
}

impl RunConfig {
    /// Applies command-line overrides; `center` is 1-based.
    pub fn with_overrides(
        mut self,
        order: Option<usize>,
        center: Option<usize>,
        convention: Option<&str>,
    ) -> Result<RunConfig, ConfigError> {
        if order.is_none() && center.is_none() && convention.is_none() {
            return Ok(self);
        }
        if let Some(o) = order {
            self.raw.order = Some(o);
        }
        if let Some(c) = center {
            self.raw.center = Some(c);
        }
        if let Some(c) = convention {
            self.raw.convention = Some(c.to_string());
        }
        validate(self.raw)
    }

    pub fn is_kz_s3(&self) -> bool {
        self.preset.as_deref() == Some(PRESET_KZ_S3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_config() {
        let cfg = parse_config(r#"{"points": ["0", "1"], "residues": "kz-s3", "coupling": "2"}"#).unwrap();
        assert_eq!(cfg.mode, Mode::Numeric);
        assert!(cfg.is_kz_s3());
        assert_eq!(cfg.system.dim(), 3);
        assert_eq!(cfg.convention, Convention::DerivedTaylor);
        assert_eq!(cfg.center, 0);
    }

    #[test]
    fn symbolic_config() {
        let cfg = parse_config(
            r#"{"points": ["symbolic", "symbolic"], "residues": "kz-s3", "convention": "literal-paper", "order": 3}"#,
        )
        .unwrap();
        assert_eq!(cfg.mode, Mode::Symbolic);
        assert_eq!(cfg.order, 3);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let err = parse_config(r#"{"points": ["0", "0"], "residues": "kz-s3"}"#).unwrap_err();
        assert_eq!(err.field, "points");
        assert!(err.message.contains("coincident"));

        let err = parse_config(r#"{"points": ["0", "1"], "residues": "kz-s3", "coupling": "0.5"}"#).unwrap_err();
        assert_eq!(err.field, "coupling");
        assert!(err.message.contains("1/2"));

        let err = parse_config(r#"{"points": ["0", "1"], "residues": "kz-s4"}"#).unwrap_err();
        assert_eq!(err.field, "residues");

        let err =
            parse_config(r#"{"points": ["0", "1"], "residues": "kz-s3", "convention": "literal-paper"}"#).unwrap_err();
        assert_eq!(err.field, "convention");

        let err = parse_config(r#"{"points": ["0", "1"], "residues": "kz-s3", "center": 3}"#).unwrap_err();
        assert_eq!(err.field, "center");

        let err = parse_config(r#"{"points": ["0"], "residues": "kz-s3"}"#).unwrap_err();
        assert_eq!(err.field, "points");

        let err = parse_config(r#"{"points": ["0", "1"], "residues": "kz-s3", "bogus": 1}"#).unwrap_err();
        assert_eq!(err.field, "<document>");
    }

    #[test]
    fn explicit_residues() {
        let cfg = parse_config(
            r#"{"points": ["0"], "residues": [[[0, 1, 0], ["1", "0", "0"], [0, 0, "1"]]], "order": 5, "denominator": "z^2", "max_num_degree": 0}"#,
        )
        .unwrap();
        assert_eq!(
            cfg.system.residues()[0],
            crate::model::transposition_matrix(3, 1, 2).unwrap()
        );
        assert_eq!(cfg.denominator, Some(Poly::from_ints(&[0, 0, 1])));
        assert_eq!(cfg.max_num_degree, Some(0));
        let err = parse_config(r#"{"points": ["0"], "residues": [[[0, 1], [1]]]}"#).unwrap_err();
        assert_eq!(err.field, "residues");
    }

    #[test]
    fn overrides_revalidate() {
        let cfg = parse_config(r#"{"points": ["0", "1"], "residues": "kz-s3"}"#).unwrap();
        let cfg = cfg.with_overrides(Some(14), Some(2), None).unwrap();
        assert_eq!(cfg.order, 14);
        assert_eq!(cfg.center, 1);
        let cfg = parse_config(r#"{"points": ["0", "1"], "residues": "kz-s3"}"#).unwrap();
        assert!(cfg.with_overrides(None, None, Some("literal-paper")).is_err());
    }
}
