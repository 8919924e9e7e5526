//! Command dispatch for the `kzrat` binary: `expand`, `series` and
//! `verify`, each producing human-readable text and a [`RunReport`].

pub mod config;
pub mod format;
pub mod golden;
pub mod report;

use std::fmt::Write as _;

use crate::arith::{format_scalar, int, Matrix, RatFunc, Scalar};
use crate::model::{LocalExpansion, ModelError, Point};
use crate::reconstruct::{
    default_numerator_degree, propose_denominator, reconstruct, verify_ode, ReconstructError, Reconstruction,
};
use crate::series::{
    compute_series, default_leading_exponent, indicial_data, verify_recursion, SeriesError, SeriesOptions,
    SeriesSolution,
};

use config::{parse_config, Mode, RunConfig};
use format::Pretty;
use golden::GoldenOutcome;
use report::{
    matrix_text, ErrorReport, ExpansionReport, GoldenItemReport, GoldenReport, IndicialReport, LevelMatrix, OdeReport,
    ReconstructionReport, RecursionCheckReport, ResonanceReport, RunReport, SeriesReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_OBSTRUCTION: i32 = 3;

const PRESET_PREFACTOR: i64 = -9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Series,
    Verify,
    Expand,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Series => "series",
            Command::Verify => "verify",
            Command::Expand => "expand",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Request {
    pub command: Command,
    pub config_text: String,
    pub golden: bool,
    /// Accept a golden match under `d -> -d`; implies `golden`.
    pub golden_dual: bool,
    pub order: Option<usize>,
    /// 1-based.
    pub center: Option<usize>,
    pub convention: Option<String>,
}

impl Request {
    pub fn new(command: Command, config_text: impl Into<String>) -> Self {
        Request {
            command,
            config_text: config_text.into(),
            golden: false,
            golden_dual: false,
            order: None,
            center: None,
            convention: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: RunReport,
    /// Text for standard output.
    pub text: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code
    }
}

struct Failure {
    code: i32,
    error: ErrorReport,
}

impl Failure {
    fn new(code: i32, kind: &str, message: impl Into<String>) -> Self {
        Failure {
            code,
            error: ErrorReport {
                kind: kind.to_string(),
                message: message.into(),
                level: None,
                certificate: None,
                minimum_order: None,
            },
        }
    }

    fn usage(kind: &str, message: impl Into<String>) -> Self {
        Failure::new(EXIT_USAGE, kind, message)
    }
}

fn series_failure(e: SeriesError) -> Failure {
    let message = e.to_string();
    match e {
        SeriesError::Obstruction { level, certificate } => {
            let mut f = Failure::new(EXIT_OBSTRUCTION, "resonance-obstruction", message);
            f.error.level = Some(level);
            f.error.certificate = Some(certificate);
            f
        }
        SeriesError::NoIntegerExponent => Failure::new(EXIT_FAILED, "no-integer-exponent", message),
        SeriesError::NotAnEigenvalue(_) => Failure::usage("leading-exponent", message),
        SeriesError::PolicyNotApplicable(_) => Failure::usage("leading-policy", message),
        SeriesError::ExpansionTooShort { .. } => Failure::usage("expansion", message),
    }
}

fn model_failure(e: ModelError) -> Failure {
    Failure::usage("model", e.to_string())
}

/// Runs one command on an in-memory config.
pub fn execute(req: &Request) -> Outcome {
    let mut report = RunReport::new(req.command.as_str());
    let mut text = String::new();
    match dispatch(req, &mut report, &mut text) {
        Ok(code) => report.exit_code = code,
        Err(f) => {
            let _ = writeln!(text, "error: {}", f.error.message);
            if let Some(cert) = &f.error.certificate {
                let _ = writeln!(text, "certificate (left null vector): [{}]", cert.join(", "));
            }
            report.exit_code = f.code;
            report.error = Some(f.error);
        }
    }
    Outcome { report, text }
}

fn dispatch(req: &Request, report: &mut RunReport, text: &mut String) -> Result<i32, Failure> {
    let cfg = parse_config(&req.config_text)
        .and_then(|c| c.with_overrides(req.order, req.center, req.convention.as_deref()))
        .map_err(|e| Failure::usage("config", e.to_string()))?;
    report.config = Some(cfg.raw.clone());
    report.mode = Some(match cfg.mode {
        Mode::Numeric => "numeric".into(),
        Mode::Symbolic => "symbolic".into(),
    });
    report.convention = Some(cfg.convention.as_str().into());
    report.center = Some(cfg.center + 1);
    report.coupling = Some(format_scalar(cfg.system.coupling()));
    let point = match &cfg.system.points()[cfg.center] {
        Point::Exact(p) => format_scalar(p),
        Point::Symbolic => "symbolic".into(),
    };
    let _ = writeln!(
        text,
        "kzrat {}: center z{} = {}, κ = {}, convention {}, order {}",
        req.command.as_str(),
        cfg.center + 1,
        point,
        format_scalar(cfg.system.coupling()),
        cfg.convention.as_str(),
        cfg.order
    );

    let golden = req.golden || req.golden_dual;
    if golden && req.command != Command::Series {
        return Err(Failure::usage("golden", "--golden applies to the series command"));
    }
    match (req.command, cfg.mode) {
        (Command::Expand, Mode::Numeric) => expand::<Scalar>(&cfg, report, text),
        (Command::Expand, Mode::Symbolic) => expand::<RatFunc>(&cfg, report, text),
        (Command::Series, Mode::Numeric) => {
            if golden {
                return Err(golden_precondition());
            }
            run_series::<Scalar>(&cfg, report, text).map(|_| EXIT_OK)
        }
        (Command::Series, Mode::Symbolic) => {
            let (exp, series) = run_series::<RatFunc>(&cfg, report, text)?;
            if golden {
                run_golden(&cfg, &exp, &series, req.golden_dual, report, text)
            } else {
                Ok(EXIT_OK)
            }
        }
        (Command::Verify, Mode::Numeric) => verify(&cfg, report, text),
        (Command::Verify, Mode::Symbolic) => Err(Failure::usage(
            "mode",
            "verify needs numeric points; symbolic series cannot be reconstructed in z",
        )),
    }
}

fn preferred_prefactor(cfg: &RunConfig) -> Option<i64> {
    cfg.is_kz_s3().then_some(PRESET_PREFACTOR)
}

fn expand<F: Pretty>(cfg: &RunConfig, report: &mut RunReport, text: &mut String) -> Result<i32, Failure> {
    let exp = cfg
        .system
        .local_expansion::<F>(cfg.center, cfg.convention, cfg.order)
        .map_err(model_failure)?;
    let mut coefficients = Vec::new();
    for r in -1..=cfg.order as i64 {
        let a = exp.coeff(r).expect("computed up to order");
        let _ = writeln!(text, "a_{r} =\n{}", F::pretty(a, preferred_prefactor(cfg)));
        coefficients.push(LevelMatrix {
            level: r,
            matrix: matrix_text(a),
        });
    }
    report.expansion = Some(ExpansionReport { coefficients });
    Ok(EXIT_OK)
}

fn run_series<F: Pretty>(
    cfg: &RunConfig,
    report: &mut RunReport,
    text: &mut String,
) -> Result<(LocalExpansion<F>, SeriesSolution<F>), Failure> {
    let coupling = cfg.system.coupling();
    let data = indicial_data(&cfg.system.residues()[cfg.center], coupling);
    let indicial = IndicialReport::from(&data);
    let eigen: Vec<String> = indicial
        .eigenvalues
        .iter()
        .map(|e| format!("{} (×{})", e.value, e.multiplicity))
        .collect();
    let _ = write!(text, "eigenvalues of κ·a_-1: {}", eigen.join(", "));
    if let Some(f) = &indicial.irrational_factor {
        let _ = write!(text, "; irrational factor {f}");
    }
    let _ = writeln!(text);
    report.indicial = Some(indicial);

    let rho = match cfg.leading_exponent {
        Some(r) => r,
        None => default_leading_exponent(&cfg.system.residues()[cfg.center], coupling).map_err(series_failure)?,
    };
    let exp = cfg
        .system
        .local_expansion::<F>(cfg.center, cfg.convention, cfg.order)
        .map_err(model_failure)?;
    let opts = SeriesOptions {
        leading: cfg.leading_policy,
    };
    let series = compute_series(&exp, coupling, rho, cfg.order, opts).map_err(series_failure)?;
    let _ = writeln!(text, "leading exponent ρ = {rho} ({})", series.leading_policy.as_str());

    let mut coefficients = Vec::new();
    for (p, b) in series.levels() {
        let _ = writeln!(text, "b_{p} =\n{}", F::pretty(b, preferred_prefactor(cfg)));
        coefficients.push(LevelMatrix {
            level: p,
            matrix: matrix_text(b),
        });
    }
    report.series = Some(SeriesReport {
        leading_exponent: rho,
        leading_policy: series.leading_policy.as_str().into(),
        coefficients,
    });
    for r in &series.resonances {
        let _ = writeln!(
            text,
            "resonance at level {}: {}, kernel dimension {}",
            r.level,
            r.kind.as_str(),
            r.kernel_basis.len()
        );
    }
    report.resonances = series.resonances.iter().map(ResonanceReport::from).collect();

    let check = verify_recursion(&series, &exp, coupling);
    let failing = check.failing_levels();
    if failing.is_empty() {
        let _ = writeln!(text, "recursion check: all {} levels satisfied", check.levels.len());
    } else {
        let _ = writeln!(text, "recursion check: FAILED at levels {failing:?}");
    }
    if let Some((level, rhs)) = &check.frontier {
        let _ = writeln!(
            text,
            "right side at the next level {level}:\n{}",
            F::pretty(rhs, preferred_prefactor(cfg))
        );
    }
    report.recursion_check = Some(RecursionCheckReport {
        all_satisfied: failing.is_empty(),
        failing_levels: failing,
        frontier: check.frontier.as_ref().map(|(level, m)| LevelMatrix {
            level: *level,
            matrix: matrix_text(m),
        }),
    });
    Ok((exp, series))
}

fn golden_precondition() -> Failure {
    Failure::usage(
        "golden",
        "--golden needs the kz-s3 preset with two symbolic points, center 1, coupling 2 and leading exponent -2",
    )
}

fn run_golden(
    cfg: &RunConfig,
    exp: &LocalExpansion<RatFunc>,
    series: &SeriesSolution<RatFunc>,
    dual: bool,
    report: &mut RunReport,
    text: &mut String,
) -> Result<i32, Failure> {
    let applicable = cfg.is_kz_s3()
        && cfg.center == 0
        && *cfg.system.coupling() == int(2)
        && series.leading_exponent == golden::LEADING_EXPONENT;
    if !applicable {
        return Err(golden_precondition());
    }
    let outcome = if series.last_level() >= golden::RESONANT_LEVEL - 1 {
        golden::compare_series(series, exp)
    } else {
        golden::compare(cfg.convention).map_err(series_failure)?
    };
    let passed = outcome.all_matched() || (dual && outcome.all_dual_matched());
    let summary = outcome.summary();
    let _ = writeln!(text, "{summary}");
    if !passed {
        write_golden_detail(&outcome, text);
        if outcome.all_dual_matched() {
            let _ = writeln!(text, "pass --golden-dual to accept the d→−d twin");
        }
    }
    report.golden = Some(GoldenReport {
        dual_accepted: dual,
        passed,
        summary,
        items: outcome
            .items
            .iter()
            .map(|i| GoldenItemReport {
                name: i.name.clone(),
                matched: i.matched,
                dual_matched: i.dual_matched,
                ratio: i.ratio.as_ref().map(format_scalar),
                computed: matrix_text(&i.computed),
                reference: matrix_text(&i.reference),
            })
            .collect(),
    });
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

fn write_golden_detail(outcome: &GoldenOutcome, text: &mut String) {
    for item in outcome.items.iter().filter(|i| !i.matched && !i.dual_matched) {
        let _ = writeln!(
            text,
            "  {} computed:\n{}\n  {} reference:\n{}",
            item.name,
            RatFunc::pretty(&item.computed, Some(PRESET_PREFACTOR)),
            item.name,
            RatFunc::pretty(&item.reference, Some(PRESET_PREFACTOR))
        );
    }
}

fn verify(cfg: &RunConfig, report: &mut RunReport, text: &mut String) -> Result<i32, Failure> {
    let (exp, series) = run_series::<Scalar>(cfg, report, text)?;
    let Point::Exact(center) = &exp.center_point else {
        unreachable!("numeric mode has exact points");
    };

    let den = match &cfg.denominator {
        Some(d) => d.clone(),
        None => match propose_denominator(&cfg.system) {
            Ok(d) => d,
            Err(e @ ReconstructError::NoPolynomialDenominator { .. }) => {
                let _ = writeln!(text, "reconstruction: {e}");
                report.reconstruction = Some(ReconstructionReport {
                    status: "no-polynomial-denominator".into(),
                    denominator: None,
                    max_num_degree: None,
                    numerator: None,
                    first_unmatched_level: None,
                    reexpansion_matches: None,
                });
                return Ok(EXIT_FAILED);
            }
            Err(e) => return Err(Failure::usage("reconstruction", e.to_string())),
        },
    };
    let degree = cfg
        .max_num_degree
        .unwrap_or_else(|| default_numerator_degree(&cfg.system, &den));
    let _ = writeln!(text, "denominator {}, numerator degree <= {degree}", den.display("z"));

    let result = match reconstruct(&series, &den, degree) {
        Ok(r) => r,
        Err(ReconstructError::InsufficientSeries { needed, available }) => {
            let minimum = needed - 1;
            let mut f = Failure::usage(
                "insufficient-series",
                format!(
                    "insufficient series length: order {} gives {available} coefficients, \
                     reconstruction needs {needed}; rerun with --order {minimum} or higher",
                    cfg.order
                ),
            );
            f.error.minimum_order = Some(minimum);
            return Err(f);
        }
        Err(e) => return Err(Failure::usage("reconstruction", e.to_string())),
    };

    let mut rec = ReconstructionReport {
        status: String::new(),
        denominator: Some(den.display("z")),
        max_num_degree: Some(degree),
        numerator: None,
        first_unmatched_level: None,
        reexpansion_matches: None,
    };
    let w = match result {
        Reconstruction::NotRepresentable { first_unmatched_level } => {
            let _ = writeln!(
                text,
                "reconstruction: not representable within degree {degree}; first unmatched level {first_unmatched_level}"
            );
            rec.status = "not-representable".into();
            rec.first_unmatched_level = Some(first_unmatched_level);
            report.reconstruction = Some(rec);
            return Ok(EXIT_FAILED);
        }
        Reconstruction::Rational(w) => w,
    };

    let expanded = w.laurent_coefficients(center, series.last_level());
    let zero = Matrix::zeros(series.coeffs[0].rows(), series.coeffs[0].cols());
    let expanded_at = |p: i64| expanded.iter().find(|(l, _)| *l == p).map_or(&zero, |(_, m)| m);
    let matches = series.levels().all(|(p, b)| expanded_at(p) == b)
        && expanded
            .iter()
            .all(|(l, m)| *l >= series.leading_exponent || m.is_zero());
    let numerator = w.numerator().map(|p| p.display("z"));
    let _ = writeln!(
        text,
        "W(z) = N(z) / ({}), N =\n{}",
        w.denominator().display("z"),
        numerator
    );
    let _ = writeln!(
        text,
        "re-expansion matches all {} coefficients: {matches}",
        series.coeffs.len()
    );
    rec.status = "rational".into();
    rec.numerator = Some(numerator.to_rows());
    rec.reexpansion_matches = Some(matches);
    report.reconstruction = Some(rec);

    let verdict = verify_ode(&w, &cfg.system).map_err(|e| Failure::usage("ode", e.to_string()))?;
    let _ = writeln!(
        text,
        "ODE dW/dz = κ·A(z)·W: {}; det W {}",
        if verdict.satisfied {
            "satisfied, residual exactly zero"
        } else {
            "NOT satisfied"
        },
        if verdict.det_identically_zero {
            "≡ 0".to_string()
        } else {
            format!("= {}", verdict.determinant.display("z"))
        }
    );
    report.ode = Some(OdeReport {
        satisfied: verdict.satisfied,
        residual_numerator: matrix_text(&verdict.residual.numerator().map(|p| p.display("z"))),
        residual_denominator: verdict.residual.denominator().display("z"),
        determinant: verdict.determinant.display("z"),
        det_identically_zero: verdict.det_identically_zero,
    });
    Ok(if verdict.satisfied && matches {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}
