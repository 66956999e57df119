//! Output headers and writers that put them first in every file.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::FormatError;

pub const TOOL_NAME: &str = "aec";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tool identity plus the fully resolved configuration of the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
}

impl Header {
    pub fn new(command: &str, config: &impl Serialize) -> Self {
        Self {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            command: command.into(),
            config: serde_json::to_value(config).expect("configs serialize to JSON"),
        }
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    header: &'a Header,
    #[serde(flatten)]
    body: &'a T,
}

#[derive(Serialize)]
struct HeaderLine<'a> {
    header: &'a Header,
}

/// Files written by one command, all placed under its `--out` directory.
pub struct OutputDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, FormatError> {
        std::fs::create_dir_all(root).map_err(|e| FormatError::io(root, e))?;
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Path of a file directly inside the output directory.
    pub fn path(&self, name: &str) -> PathBuf {
        assert!(!name.contains('/') && !name.contains('\\') && name != "..", "output names are plain file names");
        self.root.join(name)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn open(&mut self, name: &str) -> Result<(PathBuf, BufWriter<File>), FormatError> {
        let path = self.path(name);
        let file = File::create(&path).map_err(|e| FormatError::io(&path, e))?;
        self.written.push(path.clone());
        Ok((path, BufWriter::new(file)))
    }

    /// A JSON document whose first key is `header`.
    pub fn write_json(&mut self, name: &str, header: &Header, body: &impl Serialize) -> Result<PathBuf, FormatError> {
        let (path, mut w) = self.open(name)?;
        serde_json::to_writer_pretty(&mut w, &Document { header, body })
            .map_err(|e| FormatError::invalid(&path, e.to_string()))?;
        w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| FormatError::io(&path, e))?;
        Ok(path)
    }

    /// Line-JSON: a `{"header": …}` line, then one object per row.
    pub fn write_jsonl<T: Serialize>(
        &mut self,
        name: &str,
        header: &Header,
        rows: impl IntoIterator<Item = T>,
    ) -> Result<PathBuf, FormatError> {
        let (path, mut w) = self.open(name)?;
        write_jsonl_to(&mut w, header, rows).map_err(|e| FormatError::invalid(&path, e.to_string()))?;
        w.flush().map_err(|e| FormatError::io(&path, e))?;
        Ok(path)
    }

    /// CSV preceded by `# ` comment lines carrying the header.
    pub fn write_csv<R: IntoIterator<Item = String>>(
        &mut self,
        name: &str,
        header: &Header,
        columns: &[&str],
        rows: impl IntoIterator<Item = R>,
    ) -> Result<PathBuf, FormatError> {
        let (path, mut w) = self.open(name)?;
        let result = (|| -> anyhow::Result<()> {
            writeln!(w, "# {} {} {}", header.tool, header.version, header.command)?;
            writeln!(w, "# config: {}", serde_json::to_string(&header.config)?)?;
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(columns)?;
            for row in rows {
                csv.write_record(row)?;
            }
            csv.flush()?;
            Ok(())
        })();
        result.map_err(|e| FormatError::invalid(&path, e.to_string()))?;
        w.flush().map_err(|e| FormatError::io(&path, e))?;
        Ok(path)
    }

    /// Plain text lines after `# ` header comments.
    pub fn write_lines(
        &mut self,
        name: &str,
        header: &Header,
        lines: impl IntoIterator<Item = String>,
    ) -> Result<PathBuf, FormatError> {
        let (path, mut w) = self.open(name)?;
        let result = (|| -> std::io::Result<()> {
            writeln!(w, "# {} {} {}", header.tool, header.version, header.command)?;
            writeln!(w, "# config: {}", serde_json::to_string(&header.config)?)?;
            for l in lines {
                writeln!(w, "{l}")?;
            }
            w.flush()
        })();
        result.map_err(|e| FormatError::io(&path, e))?;
        Ok(path)
    }

    /// Raw bytes for formats that carry their own header.
    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, FormatError> {
        let (path, mut w) = self.open(name)?;
        w.write_all(bytes).and_then(|_| w.flush()).map_err(|e| FormatError::io(&path, e))?;
        Ok(path)
    }
}

pub fn write_jsonl_to<T: Serialize>(
    w: &mut impl Write,
    header: &Header,
    rows: impl IntoIterator<Item = T>,
) -> anyhow::Result<()> {
    serde_json::to_writer(&mut *w, &HeaderLine { header })?;
    w.write_all(b"\n")?;
    for row in rows {
        serde_json::to_writer(&mut *w, &row)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
