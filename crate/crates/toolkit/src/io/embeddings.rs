//! Packed embedding tables.
//!
//! `name.bin` holds `count × dim` little-endian `f32` values in row order,
//! `name.json` the header `{count, dim, space_tag, dtype, checksum}` and
//! `name.ids` one id per line. Any path ending in `.jsonl` is read as line
//! JSON instead, one `{id, values, space_tag?}` object per line.

use std::path::{Path, PathBuf};

use aec_core::corpus::EmbeddingTable;
use serde::{Deserialize, Serialize};

use super::{is_header_line, read_bytes, read_to_string, sha256_tag};
use crate::error::FormatError;

pub const DTYPE: &str = "f32le";
pub const UNTAGGED_SPACE: &str = "untagged";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackedHeader {
    pub count: usize,
    pub dim: usize,
    pub space_tag: String,
    pub dtype: String,
    /// `sha256:<hex>` of the payload bytes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checksum: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoder: Option<String>,
}

/// The three files of one packed table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedPaths {
    pub payload: PathBuf,
    pub header: PathBuf,
    pub ids: PathBuf,
}

impl PackedPaths {
    /// Companions of `X.bin` (or of `X.json` / `X.ids`, or of a bare stem).
    pub fn new(path: &Path) -> Self {
        let stem = match path.extension().and_then(|e| e.to_str()) {
            Some("bin" | "json" | "ids") => path.with_extension(""),
            _ => path.to_path_buf(),
        };
        let with = |ext: &str| {
            let mut s = stem.clone().into_os_string();
            s.push(".");
            s.push(ext);
            PathBuf::from(s)
        };
        Self { payload: with("bin"), header: with("json"), ids: with("ids") }
    }
}

fn is_jsonl(path: &Path) -> bool {
    path.extension().and_then(|e| e.to_str()) == Some("jsonl")
}

pub fn encode_payload(data: &[f32]) -> Vec<u8> {
    data.iter().flat_map(|v| v.to_le_bytes()).collect()
}

pub fn decode_payload(bytes: &[u8]) -> Vec<f32> {
    bytes.chunks_exact(4).map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect()
}

pub fn load_embeddings(path: &Path) -> Result<EmbeddingTable, FormatError> {
    if is_jsonl(path) {
        load_jsonl(path)
    } else {
        load_packed(path)
    }
}

pub fn load_packed(path: &Path) -> Result<EmbeddingTable, FormatError> {
    let paths = PackedPaths::new(path);
    let header: PackedHeader = serde_json::from_str(&read_to_string(&paths.header)?)
        .map_err(|e| FormatError::invalid(&paths.header, e.to_string()))?;
    if header.dtype != DTYPE {
        return Err(FormatError::invalid(
            &paths.header,
            format!("unsupported dtype {:?}, expected {DTYPE:?}", header.dtype),
        ));
    }
    let bytes = read_bytes(&paths.payload)?;
    let expected = header
        .count
        .checked_mul(header.dim)
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| FormatError::invalid(&paths.header, "count × dim overflows"))?;
    if bytes.len() != expected {
        return Err(FormatError::invalid(
            &paths.payload,
            format!(
                "payload is {} bytes, header implies {} × {} × 4 = {expected}",
                bytes.len(),
                header.count,
                header.dim
            ),
        ));
    }
    if let Some(checksum) = &header.checksum {
        let found = sha256_tag(&bytes);
        if &found != checksum {
            return Err(FormatError::Checksum {
                path: paths.payload.display().to_string(),
                expected: checksum.clone(),
                found,
            });
        }
    }
    let ids: Vec<String> = read_to_string(&paths.ids)?.lines().map(str::to_string).filter(|l| !l.is_empty()).collect();
    if ids.len() != header.count {
        return Err(FormatError::invalid(&paths.ids, format!("{} ids for {} rows", ids.len(), header.count)));
    }
    EmbeddingTable::new(header.space_tag, header.dim, ids, decode_payload(&bytes))
        .map_err(|e| FormatError::invalid(&paths.payload, e.to_string()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonlRow {
    id: String,
    values: Vec<f32>,
    #[serde(default)]
    space_tag: Option<String>,
}

pub fn load_jsonl(path: &Path) -> Result<EmbeddingTable, FormatError> {
    let text = read_to_string(path)?;
    let mut ids = Vec::new();
    let mut data = Vec::new();
    let mut dim = None;
    let mut space: Option<String> = None;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let line_error = |message: String| FormatError::Line { path: path.display().to_string(), line: i + 1, message };
        let value: serde_json::Value = serde_json::from_str(line).map_err(|e| line_error(e.to_string()))?;
        if is_header_line(&value) {
            continue;
        }
        let row: JsonlRow = serde_json::from_value(value).map_err(|e| line_error(e.to_string()))?;
        match dim {
            None => dim = Some(row.values.len()),
            Some(d) if d != row.values.len() => {
                return Err(line_error(format!("row has {} values, earlier rows have {d}", row.values.len())));
            }
            Some(_) => {}
        }
        if let Some(tag) = row.space_tag {
            match &space {
                None => space = Some(tag),
                Some(s) if *s != tag => return Err(line_error(format!("space_tag {tag:?} differs from {s:?}"))),
                Some(_) => {}
            }
        }
        ids.push(row.id);
        data.extend(row.values);
    }
    let dim = dim.ok_or_else(|| FormatError::invalid(path, "no embedding rows"))?;
    EmbeddingTable::new(space.unwrap_or_else(|| UNTAGGED_SPACE.into()), dim, ids, data)
        .map_err(|e| FormatError::invalid(path, e.to_string()))
}

/// Write the packed triple for `table` next to `path`; returns the header.
pub fn write_packed(path: &Path, table: &EmbeddingTable, encoder: Option<&str>) -> Result<PackedHeader, FormatError> {
    let paths = PackedPaths::new(path);
    let bytes = encode_payload(table.data());
    let header = PackedHeader {
        count: table.len(),
        dim: table.dim(),
        space_tag: table.space_tag().into(),
        dtype: DTYPE.into(),
        checksum: Some(sha256_tag(&bytes)),
        encoder: encoder.map(str::to_string),
    };
    let mut ids = table.ids().join("\n");
    if !ids.is_empty() {
        ids.push('\n');
    }
    let mut json = serde_json::to_string_pretty(&header).expect("header serializes");
    json.push('\n');
    std::fs::write(&paths.payload, &bytes).map_err(|e| FormatError::io(&paths.payload, e))?;
    std::fs::write(&paths.ids, ids).map_err(|e| FormatError::io(&paths.ids, e))?;
    std::fs::write(&paths.header, json).map_err(|e| FormatError::io(&paths.header, e))?;
    Ok(header)
}

/// Write `table` as line JSON.
pub fn write_jsonl(path: &Path, table: &EmbeddingTable) -> Result<(), FormatError> {
    #[derive(Serialize)]
    struct Row<'a> {
        id: &'a str,
        values: &'a [f32],
        space_tag: &'a str,
    }
    let mut out = String::new();
    for (id, values) in table.iter() {
        out.push_str(
            &serde_json::to_string(&Row { id, values, space_tag: table.space_tag() }).expect("row serializes"),
        );
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| FormatError::io(path, e))
}
