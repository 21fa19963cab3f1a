//! Run configuration: JSON file plus command-line overrides.

use std::path::{Path, PathBuf};

use harmonic_ends_core::curvature::{BlowupConfig, CurvatureConfig, Ladder, QuadratureConfig};
use harmonic_ends_core::series::DEFAULT_ORDER;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Polar sampling grid: `nr` radii spaced geometrically in `[r_min, r_max]`
/// and `nt` angles `2πj/nt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub nr: usize,
    pub nt: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            r_min: 0.05,
            r_max: 0.9,
            nr: 24,
            nt: 128,
        }
    }
}

impl GridSpec {
    pub fn radii(&self) -> Vec<f64> {
        if self.nr == 1 {
            return vec![self.r_max];
        }
        let q = (self.r_min / self.r_max).ln() / (self.nr - 1) as f64;
        (0..self.nr)
            .map(|i| if i + 1 == self.nr { self.r_min } else { self.r_max * (q * i as f64).exp() })
            .collect()
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.nt)
            .map(|j| std::f64::consts::TAU * j as f64 / self.nt as f64)
            .collect()
    }

    fn check(&self) -> Result<(), CliError> {
        let ok = self.r_min > 0.0
            && self.r_min <= self.r_max
            && self.r_max.is_finite()
            && self.nr >= 1
            && self.nt >= 3
            && (self.nr > 1 || self.r_min == self.r_max);
        if ok {
            Ok(())
        } else {
            Err(CliError::Config(
                "grid needs 0 < r_min <= r_max, nr >= 1 (r_min = r_max when nr = 1) and nt >= 3".into(),
            ))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnnulusSpec {
    pub r_inner: f64,
    pub r_outer: f64,
}

impl Default for AnnulusSpec {
    fn default() -> Self {
        Self {
            r_inner: 0.2,
            r_outer: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub ladder: Ladder,
    pub quadrature: QuadratureConfig,
    /// Truncation order of the normalization series.
    pub order: usize,
    /// Tolerance on `|extrapolated - predicted|` for the `converged` flag.
    pub limit_tol: f64,
    /// Halton sample count used by validation.
    pub validation_samples: usize,
    pub blowup_radii: Vec<f64>,
    pub blowup_s_max: f64,
    pub blowup_s_samples: usize,
    pub annulus: AnnulusSpec,
    pub grid: GridSpec,
    pub csv: Option<PathBuf>,
    pub obj: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let curvature = CurvatureConfig::default();
        let blowup = BlowupConfig::default();
        Self {
            ladder: curvature.ladder,
            quadrature: curvature.quadrature,
            order: DEFAULT_ORDER,
            limit_tol: curvature.limit_tol,
            validation_samples: 4096,
            blowup_radii: blowup.radii,
            blowup_s_max: blowup.s_max,
            blowup_s_samples: blowup.s_samples,
            annulus: AnnulusSpec::default(),
            grid: GridSpec::default(),
            csv: None,
            obj: None,
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub r0: Option<f64>,
    pub ratio: Option<f64>,
    pub count: Option<usize>,
    pub tol: Option<f64>,
    pub order: Option<usize>,
    pub csv: Option<PathBuf>,
    pub obj: Option<PathBuf>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Reads `path` if given, applies the overrides and checks the result.
    pub fn resolve(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        cfg.apply(overrides);
        cfg.check()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.r0 {
            self.ladder.r0 = v;
        }
        if let Some(v) = o.ratio {
            self.ladder.ratio = v;
        }
        if let Some(v) = o.count {
            self.ladder.count = v;
        }
        if let Some(v) = o.tol {
            self.quadrature.abs_tol = v;
        }
        if let Some(v) = o.order {
            self.order = v;
        }
        if o.csv.is_some() {
            self.csv.clone_from(&o.csv);
        }
        if o.obj.is_some() {
            self.obj.clone_from(&o.obj);
        }
    }

    pub fn check(&self) -> Result<(), CliError> {
        self.ladder.radii().map_err(|e| CliError::Config(e.to_string()))?;
        let q = &self.quadrature;
        if !(q.abs_tol > 0.0) || q.base_panels == 0 || q.max_segments == 0 || q.detection_grid < 8 {
            return Err(CliError::Config(
                "quadrature needs abs_tol > 0, base_panels >= 1, max_segments >= 1, detection_grid >= 8".into(),
            ));
        }
        if self.order < 2 {
            return Err(CliError::Config("order must be at least 2".into()));
        }
        if !(self.limit_tol > 0.0) {
            return Err(CliError::Config("limit_tol must be positive".into()));
        }
        if self.blowup_radii.is_empty()
            || self.blowup_radii.iter().any(|&r| !(r > 0.0 && r < 1.0))
            || !(self.blowup_s_max > 0.0)
            || self.blowup_s_samples < 3
        {
            return Err(CliError::Config(
                "blow-up needs radii in (0, 1), s_max > 0 and s_samples >= 3".into(),
            ));
        }
        let a = &self.annulus;
        if !(a.r_inner > 0.0 && a.r_inner < a.r_outer && a.r_outer.is_finite()) {
            return Err(CliError::Config("annulus needs 0 < r_inner < r_outer".into()));
        }
        self.grid.check()
    }

    pub fn curvature(&self) -> CurvatureConfig {
        CurvatureConfig {
            quadrature: self.quadrature.clone(),
            ladder: self.ladder,
            limit_tol: self.limit_tol,
        }
    }

    pub fn blowup(&self) -> BlowupConfig {
        BlowupConfig {
            radii: self.blowup_radii.clone(),
            s_max: self.blowup_s_max,
            s_samples: self.blowup_s_samples,
            quadrature: self.quadrature.clone(),
        }
    }
}

/// Worker count from `HARMONIC_ENDS_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("HARMONIC_ENDS_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("HARMONIC_ENDS_THREADS must be a positive integer, got {v:?}"))),
        },
    }
}
