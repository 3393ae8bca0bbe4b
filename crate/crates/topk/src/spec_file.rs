//! Serialized threshold classifiers.

use std::path::Path;

use serde::Deserialize;
use topk_core::ThresholdClassifier;

use crate::render::real;
use crate::{CliError, Result};

/// A fitted classifier with provenance.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ClassifierSpecFile {
    pub q: f64,
    pub m: f64,
    pub alpha: f64,
    pub source: String,
    pub created_at: String,
}

impl ClassifierSpecFile {
    pub fn new(classifier: &ThresholdClassifier, alpha: f64, source: impl Into<String>) -> Self {
        ClassifierSpecFile {
            q: classifier.threshold(),
            m: classifier.tie_mass(),
            alpha,
            source: source.into(),
            created_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn classifier(&self) -> Result<ThresholdClassifier> {
        Ok(ThresholdClassifier::new(self.q, self.m)?.with_alpha(self.alpha)?)
    }

    pub fn to_text(&self) -> String {
        let quoted = |s: &str| toml::Value::String(s.to_string()).to_string();
        format!(
            "q = {}\nm = {}\nalpha = {}\nsource = {}\ncreated_at = {}\n",
            real(self.q),
            real(self.m),
            real(self.alpha),
            quoted(&self.source),
            quoted(&self.created_at),
        )
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::BadSpec { path: origin.into(), message: e.message().to_string() })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        Self::parse(&text, path)
    }
}
