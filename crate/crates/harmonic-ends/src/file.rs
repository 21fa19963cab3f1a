//! JSON end definition files.
//!
//! ```json
//! { "label": "example2", "dimension": 3,
//!   "forms": [ { "terms": [ {"exp": 0, "re": 1.0, "im": 0.0} ] }, … ] }
//! ```
//!
//! Form `k` is `ω_k = Σ (re + i·im) z^exp dz`.

use std::path::Path;

use harmonic_ends_core::endspec::EndDefinition;
use harmonic_ends_core::series::LaurentForm;
use harmonic_ends_core::Complex;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub exp: i32,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormFile {
    pub terms: Vec<TermFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndDefinitionFile {
    pub label: String,
    pub dimension: usize,
    pub forms: Vec<FormFile>,
}

impl EndDefinitionFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("end definition: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    /// Checks `dimension = len(forms) ≥ 2`, distinct exponents and finite
    /// coefficients.
    pub fn to_end(&self) -> Result<EndDefinition, CliError> {
        if self.dimension != self.forms.len() {
            return Err(CliError::Input(format!(
                "dimension is {} but {} forms are given",
                self.dimension,
                self.forms.len()
            )));
        }
        let forms = self
            .forms
            .iter()
            .enumerate()
            .map(|(k, f)| {
                LaurentForm::new(f.terms.iter().map(|t| (t.exp, Complex::new(t.re, t.im))))
                    .map_err(|e| CliError::Input(format!("form {}: {e}", k + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        EndDefinition::new(self.label.clone(), forms).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn from_end(end: &EndDefinition) -> Self {
        let forms = end
            .forms()
            .iter()
            .map(|f| FormFile {
                terms: f
                    .terms()
                    .iter()
                    .map(|&(exp, c)| TermFile { exp, re: c.re, im: c.im })
                    .collect(),
            })
            .collect();
        Self {
            label: end.label().into(),
            dimension: end.dimension(),
            forms,
        }
    }
}

pub fn load_end(path: &Path) -> Result<EndDefinition, CliError> {
    EndDefinitionFile::load(path)?.to_end()
}
