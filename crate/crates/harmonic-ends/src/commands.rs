//! Subcommand pipelines. Each returns the JSON (or OBJ/CSV) text for standard
//! output together with warnings for standard error.

use std::path::Path;

use harmonic_ends_core::curvature::{
    blowup_check, circle_integral, gauss_bonnet_annulus, BlowupReport, CircleIntegral,
    CurvatureReport, GaussBonnetReport,
};
use harmonic_ends_core::endspec::{
    end_type, generic_normal_form, reduce, simple_pole_normal_form, validate, EndCase,
    EndDefinition, EndType, ReductionStep, ValidationIssue, ValidationReport,
};
use harmonic_ends_core::linalg::Matrix;
use harmonic_ends_core::normalize::{normalize_end, Normalization};
use harmonic_ends_core::series::PowerSeries;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::file::EndDefinitionFile;
use crate::sample::{eta_profile, sample, SampleKind};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Output {
    /// Newline-terminated.
    pub stdout: String,
    pub warnings: Vec<String>,
}

impl Output {
    fn json<T: Serialize>(value: &T, warnings: Vec<String>) -> Result<Self, CliError> {
        Ok(Self {
            stdout: to_json(value)?,
            warnings,
        })
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

/// Full validation report; `Invalid` when any issue was found.
pub fn cmd_validate(end: &EndDefinition, cfg: &RunConfig) -> Result<Output, CliError> {
    let report = validate(end, cfg.validation_samples);
    if report.valid {
        Output::json(&report, Vec::new())
    } else {
        Err(CliError::Invalid(Box::new(report)))
    }
}

/// Gate for the numerical commands. Non-real residues are fatal; sampled
/// degeneracies are fatal only when `strict`, otherwise they become warnings.
pub fn precheck(end: &EndDefinition, cfg: &RunConfig, strict: bool) -> Result<Vec<String>, CliError> {
    let report = validate(end, cfg.validation_samples);
    if report.valid {
        return Ok(Vec::new());
    }
    let residue_issue = report
        .issues
        .iter()
        .any(|i| matches!(i, ValidationIssue::ResidueNotReal { .. }));
    if residue_issue || strict {
        return Err(CliError::Invalid(Box::new(report)));
    }
    Ok(degeneracy_warnings(&report))
}

fn degeneracy_warnings(report: &ValidationReport) -> Vec<String> {
    report
        .issues
        .iter()
        .filter_map(|i| match *i {
            ValidationIssue::DegenerateAtPoint { r, t, wedge } => Some(format!(
                "{}: differential nearly degenerate at r = {r:e}, t = {t} (normalized wedge {wedge:e}); results may not describe an immersion",
                report.label
            )),
            ValidationIssue::ResidueNotReal { .. } => None,
        })
        .collect()
}

fn residues_only(end: &EndDefinition) -> Result<(), CliError> {
    end.check_residues().map_err(|e| match e {
        harmonic_ends_core::Error::ResidueNotReal { index, imag } => CliError::Invalid(Box::new(ValidationReport {
            label: end.label().into(),
            valid: false,
            issues: vec![ValidationIssue::ResidueNotReal { index, imag }],
            samples: 0,
            min_wedge: None,
            min_wedge_at: None,
        })),
        other => CliError::Module(other),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyOutput {
    pub label: String,
    #[serde(flatten)]
    pub end_type: EndType,
    pub max_pole_order: i32,
    pub predicted_curvature: f64,
    pub singular_angles: Vec<f64>,
}

pub fn cmd_classify(end: &EndDefinition) -> Result<Output, CliError> {
    residues_only(end)?;
    let ty = end_type(end)?;
    let singular_angles = if ty.case == EndCase::Generic {
        reduce(end)?.reduced.singular_angles()
    } else {
        Vec::new()
    };
    let out = ClassifyOutput {
        label: end.label().into(),
        max_pole_order: ty.max_pole_order(),
        predicted_curvature: ty.predicted_curvature(),
        end_type: ty,
        singular_angles,
    };
    Output::json(&out, Vec::new())
}

#[derive(Debug, Clone, Serialize)]
pub struct ReduceOutput {
    pub label: String,
    pub pole_orders: Vec<Option<i32>>,
    pub case: EndCase,
    pub matrix: Matrix,
    pub certificate: Vec<ReductionStep>,
    pub reconstruction_error: f64,
    /// The reduced end in the input file format.
    pub reduced: EndDefinitionFile,
}

pub fn cmd_reduce(end: &EndDefinition) -> Result<Output, CliError> {
    residues_only(end)?;
    let red = reduce(end)?;
    let ty = end_type(end)?;
    let out = ReduceOutput {
        label: end.label().into(),
        pole_orders: ty.pole_orders,
        case: ty.case,
        matrix: red.matrix,
        certificate: red.certificate,
        reconstruction_error: red.reconstruction_error,
        reduced: EndDefinitionFile::from_end(&red.reduced),
    };
    Output::json(&out, Vec::new())
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalizeOutput {
    pub label: String,
    pub case: EndCase,
    pub matrix: Matrix,
    /// Coefficients of the composite coordinate change `φ` as `[re, im]`.
    pub phi: PowerSeries,
    pub top: Normalization,
    pub steps: Vec<String>,
    /// The normalized end in the input file format.
    pub normalized: EndDefinitionFile,
}

pub fn cmd_normalize(end: &EndDefinition, cfg: &RunConfig) -> Result<Output, CliError> {
    residues_only(end)?;
    let ty = end_type(end)?;
    let n = normalize_end(end, cfg.order)?;
    let out = NormalizeOutput {
        label: end.label().into(),
        case: ty.case,
        matrix: n.matrix,
        phi: n.phi,
        top: n.top,
        steps: n.steps,
        normalized: EndDefinitionFile::from_end(&n.end),
    };
    Output::json(&out, Vec::new())
}

/// Ladder integrals computed in parallel over radii; the report does not
/// depend on the worker count.
pub fn curvature_report(end: &EndDefinition, cfg: &RunConfig) -> Result<CurvatureReport, CliError> {
    let curvature = cfg.curvature();
    let radii = curvature.ladder.radii()?;
    let circles = radii
        .par_iter()
        .map(|&r| circle_integral(end, r, &curvature.quadrature))
        .collect::<Result<Vec<CircleIntegral>, _>>()?;
    Ok(CurvatureReport::from_circles(end, &circles, curvature.limit_tol)?)
}

pub fn cmd_curvature(end: &EndDefinition, cfg: &RunConfig, strict: bool) -> Result<Output, CliError> {
    let warnings = precheck(end, cfg, strict)?;
    let report = curvature_report(end, cfg)?;
    if let Some(path) = &cfg.csv {
        let profile = eta_profile(end, &report.radii, cfg.grid.nt)?;
        write_file(path, &profile.text)?;
    }
    Output::json(&report, warnings)
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowupOutput {
    /// Whether the input was brought to normal form first.
    pub normalized_input: bool,
    pub normalization_steps: Vec<String>,
    #[serde(flatten)]
    pub report: BlowupReport,
}

/// Runs the blow-up check, normalizing first when the end is not already in
/// generic or simple-pole normal form.
pub fn blowup_output(end: &EndDefinition, cfg: &RunConfig) -> Result<BlowupOutput, CliError> {
    let in_normal_form = generic_normal_form(end).is_some() || simple_pole_normal_form(end);
    let (work, steps) = if in_normal_form {
        (end.clone(), Vec::new())
    } else {
        let n = normalize_end(end, cfg.order)?;
        (n.end, n.steps)
    };
    let report = blowup_check(&work, &cfg.blowup())?;
    Ok(BlowupOutput {
        normalized_input: !in_normal_form,
        normalization_steps: steps,
        report,
    })
}

pub fn cmd_blowup(end: &EndDefinition, cfg: &RunConfig, strict: bool) -> Result<Output, CliError> {
    let warnings = precheck(end, cfg, strict)?;
    Output::json(&blowup_output(end, cfg)?, warnings)
}

pub fn cmd_gaussbonnet(
    end: &EndDefinition,
    cfg: &RunConfig,
    r_inner: f64,
    r_outer: f64,
    strict: bool,
) -> Result<Output, CliError> {
    if !(r_inner > 0.0 && r_inner < r_outer && r_outer.is_finite()) {
        return Err(CliError::Config("annulus needs 0 < r1 < r2".into()));
    }
    let warnings = precheck(end, cfg, strict)?;
    let report: GaussBonnetReport = gauss_bonnet_annulus(end, r_inner, r_outer, &cfg.quadrature)?;
    Output::json(&report, warnings)
}

/// Writes to `--obj` (surface) or `--csv` (profiles) when given, otherwise
/// returns the text for standard output.
pub fn cmd_sample(end: &EndDefinition, cfg: &RunConfig, kind: SampleKind, strict: bool) -> Result<Output, CliError> {
    let mut warnings = precheck(end, cfg, strict)?;
    let s = sample(end, kind, &cfg.grid)?;
    warnings.extend(s.warnings);
    if s.degenerate_rows > 0 {
        warnings.push(format!("{} of {} rows are degenerate", s.degenerate_rows, s.rows));
    }
    let path = match kind {
        SampleKind::Surface => cfg.obj.as_ref(),
        _ => cfg.csv.as_ref(),
    };
    match path {
        Some(p) => {
            write_file(p, &s.text)?;
            Ok(Output {
                stdout: String::new(),
                warnings,
            })
        }
        None => Ok(Output {
            stdout: s.text,
            warnings,
        }),
    }
}
