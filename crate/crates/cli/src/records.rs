//! Structured result records and their JSON/CSV serialization.
//!
//! Energies travel as decimal strings so arbitrary-precision results
//! survive a round trip through the output files.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "resonance-record/1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Record {
    pub label: String,
    pub method: String,
    #[serde(rename = "Re_E")]
    pub re_e: String,
    #[serde(rename = "Im_E")]
    pub im_e: String,
    pub uncertainty: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub status: Option<String>,
    /// Per-dimension convergence history (RPM sequences only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub history: Option<Vec<HistoryPoint>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HistoryPoint {
    #[serde(rename = "D")]
    pub dim: usize,
    #[serde(rename = "Re_E")]
    pub re_e: String,
    #[serde(rename = "Im_E")]
    pub im_e: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecordFile {
    pub schema: String,
    pub records: Vec<Record>,
}

impl RecordFile {
    pub fn new(records: Vec<Record>) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            records,
        }
    }
}

pub fn read_records(path: &Path) -> Result<RecordFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: RecordFile =
        serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))?;
    if file.schema != SCHEMA {
        return Err(format!(
            "{}: unsupported schema {:?} (expected {SCHEMA:?})",
            path.display(),
            file.schema
        ));
    }
    Ok(file)
}

/// stdout or a file, selected by --out.
pub fn output_writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>, String> {
    match out {
        None => Ok(Box::new(io::stdout())),
        Some(path) => File::create(path)
            .map(|f| Box::new(f) as Box<dyn Write>)
            .map_err(|e| format!("cannot create {}: {e}", path.display())),
    }
}

pub fn write_json(out: &Option<PathBuf>, file: &RecordFile) -> Result<(), String> {
    let mut writer = output_writer(out)?;
    serde_json::to_writer_pretty(&mut writer, file).map_err(|e| e.to_string())?;
    writeln!(writer).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        match text {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("format must be csv or json, got {other:?}")),
        }
    }
}
