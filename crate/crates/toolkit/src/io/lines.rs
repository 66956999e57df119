//! Generic line-JSON reading.

use std::path::Path;

use serde::de::DeserializeOwned;

use super::{is_header_line, read_to_string};
use crate::error::FormatError;

/// Parse one object per non-blank line, skipping a leading header line.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, FormatError> {
    let text = read_to_string(path)?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let line_error = |message: String| FormatError::Line { path: path.display().to_string(), line: i + 1, message };
        let value: serde_json::Value = serde_json::from_str(line).map_err(|e| line_error(e.to_string()))?;
        if is_header_line(&value) {
            continue;
        }
        rows.push(serde_json::from_value(value).map_err(|e| line_error(e.to_string()))?);
    }
    Ok(rows)
}
