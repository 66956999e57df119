//! One module per subcommand: flags, resolved config and the pipeline.

pub mod analyze;
pub mod eval;
pub mod ingest;
pub mod listen;
pub mod report;
pub mod rerank;
pub mod train_image_probe;
pub mod train_text_clf;

use std::path::{Path, PathBuf};

use aec_core::analysis::MajorityRule;
use aec_core::Measured;

use crate::error::CliError;
use crate::header::OutputDir;

/// Process-level settings that never change results.
#[derive(Debug, Clone, Copy, Default)]
pub struct Context {
    pub quiet: bool,
}

impl Context {
    pub fn progress(&self, message: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("aec: {}", message.as_ref());
        }
    }
}

pub(crate) fn out_dir(out: &Option<PathBuf>) -> Result<OutputDir, CliError> {
    Ok(OutputDir::create(crate::config::required(out, "out")?)?)
}

pub(crate) fn rule(threshold: f64, strict: bool) -> Result<MajorityRule, CliError> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(CliError::usage(format!("majority threshold must lie in (0, 1), got {threshold}")));
    }
    Ok(MajorityRule { threshold, strict })
}

/// Shortest round-trip decimal form.
pub(crate) fn num(v: f64) -> String {
    format!("{v}")
}

pub(crate) fn measured_cell(m: &Measured<f64>) -> String {
    match m {
        Measured::Available(v) => num(*v),
        Measured::Unavailable(_) => "NA".into(),
        Measured::Unsupported(_) => "unsupported".into(),
    }
}

pub(crate) fn file_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub(crate) fn negate<S: serde::Serializer>(value: &bool, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_bool(!value)
}

pub(crate) fn is_false(value: &bool) -> bool {
    !value
}
