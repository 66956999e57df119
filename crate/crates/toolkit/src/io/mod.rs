//! Readers and writers for every on-disk format the tool consumes or emits.

pub mod annotations;
pub mod embeddings;
pub mod lexicons;
pub mod lines;
pub mod model;

use std::path::Path;

use crate::error::FormatError;

pub fn read_to_string(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|e| FormatError::io(path, e))
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, FormatError> {
    std::fs::read(path).map_err(|e| FormatError::io(path, e))
}

/// `sha256:<hex>` of a byte string.
pub fn sha256_tag(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// Is this line the `{"header": …}` line our own line-JSON outputs start with.
pub(crate) fn is_header_line(value: &serde_json::Value) -> bool {
    value.as_object().is_some_and(|o| o.len() == 1 && o.contains_key("header"))
}
