use std::path::PathBuf;

use aec_core::metrics::TABLE_COLUMNS;
use aec_core::Measured;
use clap::Args;
use serde::{Deserialize, Serialize};

use super::eval::MetricsDocument;
use super::{measured_cell, out_dir, Context};
use crate::error::{CliError, FormatError};
use crate::header::Header;
use crate::io::read_to_string;

/// Combine `metrics.json` files into one table.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ReportArgs {
    /// `metrics.json` files, one per generation set, in row order.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<Vec<PathBuf>>,
    /// Output directory.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportConfig {
    pub metrics: Vec<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct ReportRow {
    name: String,
    source: PathBuf,
    fingerprint: String,
    generations: usize,
    values: Vec<(&'static str, Measured<f64>)>,
}

#[derive(Debug, Serialize)]
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<ReportRow>,
}

pub fn run(cfg: &ReportConfig, ctx: &Context) -> Result<(), CliError> {
    if cfg.metrics.is_empty() {
        return Err(CliError::usage("missing required input --metrics"));
    }
    let mut out = out_dir(&cfg.out)?;
    let header = Header::new("report", cfg);
    let mut rows = Vec::new();
    for path in &cfg.metrics {
        let value: serde_json::Value =
            serde_json::from_str(&read_to_string(path)?).map_err(|e| FormatError::invalid(path, e.to_string()))?;
        let doc: MetricsDocument = serde_json::from_value(value)
            .map_err(|e| FormatError::invalid(path, format!("not a metrics file: {e}")))?;
        let values = TABLE_COLUMNS.iter().copied().zip(doc.report.table_row().into_iter().cloned()).collect();
        rows.push(ReportRow {
            name: doc.name,
            source: path.clone(),
            fingerprint: doc.report.fingerprint.clone(),
            generations: doc.report.generations,
            values,
        });
    }
    let fingerprints: std::collections::BTreeSet<&str> = rows.iter().map(|r| r.fingerprint.as_str()).collect();
    if fingerprints.len() > 1 {
        ctx.progress("warning: rows were computed with different metric settings");
    }
    let mut columns = vec!["name"];
    columns.extend(TABLE_COLUMNS);
    out.write_csv(
        "table3.csv",
        &header,
        &columns,
        rows.iter().map(|r| {
            let mut cells = vec![r.name.clone()];
            cells.extend(r.values.iter().map(|(_, m)| measured_cell(m)));
            cells
        }),
    )?;
    let table = Table { columns, rows };
    out.write_json("report.json", &header, &table)?;
    ctx.progress(format!("combined {} generation sets", table.rows.len()));
    Ok(())
}
