//! Run configuration: optional TOML file merged with command-line flags.
//!
//! A key is resolved from, in decreasing priority: the flag, the
//! `[command]` table of the file, the top level of the file, the default.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

/// Parsed config file, as JSON values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    top: Map<String, Value>,
    sections: Map<String, Value>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let table: toml::Table = toml::from_str(text).map_err(|e| e.to_string())?;
        let value = serde_json::to_value(table).map_err(|e| e.to_string())?;
        let Value::Object(all) = value else { unreachable!("a TOML document is a table") };
        let mut file = Self::default();
        for (key, value) in all {
            if crate::cli::COMMANDS.contains(&key.as_str()) {
                if !value.is_object() {
                    return Err(format!("[{key}] must be a table"));
                }
                file.sections.insert(key, value);
            } else if value.is_object() {
                return Err(format!("unknown section [{key}]"));
            } else {
                file.top.insert(key, value);
            }
        }
        Ok(file)
    }

    fn section(&self, command: &str) -> Option<&Map<String, Value>> {
        self.sections.get(command).and_then(Value::as_object)
    }
}

/// Merge defaults, file and flag overrides into a command config.
///
/// Top-level file keys and `global` flags only apply to commands that have
/// them; unknown keys in a command section are usage errors.
pub fn resolve<C>(
    command: &str,
    file: Option<&ConfigFile>,
    global: &Map<String, Value>,
    flags: &impl Serialize,
) -> Result<C, CliError>
where
    C: Serialize + DeserializeOwned + Default,
{
    let Value::Object(mut merged) = serde_json::to_value(C::default()).expect("defaults serialize") else {
        unreachable!("command configs are structs")
    };
    if let Some(file) = file {
        for (key, value) in &file.top {
            if merged.contains_key(key) {
                merged.insert(key.clone(), value.clone());
            }
        }
        if let Some(section) = file.section(command) {
            for (key, value) in section {
                merged.insert(key.clone(), value.clone());
            }
        }
    }
    for (key, value) in global {
        if merged.contains_key(key) && !value.is_null() {
            merged.insert(key.clone(), value.clone());
        }
    }
    if let Value::Object(overrides) = serde_json::to_value(flags).expect("flags serialize") {
        for (key, value) in overrides {
            if !value.is_null() {
                merged.insert(key, value);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::usage(format!("{command} config: {e}")))
}

/// The value of a required input, or a usage error naming its flag.
pub fn required<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T, CliError> {
    value.as_ref().ok_or_else(|| CliError::usage(format!("missing required input --{flag}")))
}
