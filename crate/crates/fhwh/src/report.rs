//! Report files: a config echo plus numeric rows, as CSV or JSON.
//!
//! CSV layout:
//!
//! ```text
//! # fhwh <version>
//! # config: <config as one-line JSON>
//! # note: <free text>
//! # row-error <index> <code>: <message>
//! <header>
//! <rows>
//! ```
//!
//! Missing values are written as `NaN`.

use crate::config::{ExperimentConfig, Format};
use crate::error::CliError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowError {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub values: Vec<Option<f64>>,
    pub error: Option<RowError>,
}

impl Row {
    pub fn ok(values: Vec<f64>) -> Self {
        Row { values: values.into_iter().map(|v| (!v.is_nan()).then_some(v)).collect(), error: None }
    }

    /// A failed row: leading key columns kept, the rest missing.
    pub fn failed(keys: Vec<f64>, width: usize, err: &fhwh_core::Error) -> Self {
        let mut values: Vec<Option<f64>> = keys.into_iter().map(|v| (!v.is_nan()).then_some(v)).collect();
        values.resize(width, None);
        Row { values, error: Some(RowError { code: err.code().to_string(), message: err.to_string() }) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub version: String,
    pub config: ExperimentConfig,
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl ReportFile {
    pub fn new(config: ExperimentConfig, columns: &[&str]) -> Self {
        ReportFile {
            version: fhwh_core::VERSION.to_string(),
            config,
            notes: Vec::new(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn all_computed(&self) -> bool {
        self.rows.iter().all(|r| r.error.is_none())
    }

    /// Values of a named column.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values.get(k).copied().flatten()).collect())
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Json => {
                let mut v = serde_json::to_vec_pretty(self).map_err(|e| CliError::Parse(e.to_string()))?;
                v.push(b'\n');
                Ok(v)
            }
            Format::Csv => self.render_csv(),
        }
    }

    fn render_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        let config = serde_json::to_string(&self.config).map_err(|e| CliError::Parse(e.to_string()))?;
        out.extend_from_slice(format!("# fhwh {}\n# config: {config}\n", self.version).as_bytes());
        for n in &self.notes {
            out.extend_from_slice(format!("# note: {}\n", n.replace('\n', " ")).as_bytes());
        }
        for (i, r) in self.rows.iter().enumerate() {
            if let Some(e) = &r.error {
                out.extend_from_slice(format!("# row-error {i} {}: {}\n", e.code, e.message.replace('\n', " ")).as_bytes());
            }
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).map_err(|e| CliError::Parse(e.to_string()))?;
        for r in &self.rows {
            w.write_record(r.values.iter().map(|v| format_value(*v))).map_err(|e| CliError::Parse(e.to_string()))?;
        }
        out.extend(w.into_inner().map_err(|e| CliError::Parse(e.to_string()))?);
        Ok(out)
    }

    pub fn parse(bytes: &[u8], format: Format) -> Result<Self, CliError> {
        match format {
            Format::Json => serde_json::from_slice(bytes).map_err(|e| CliError::Parse(e.to_string())),
            Format::Csv => Self::parse_csv(bytes),
        }
    }

    fn parse_csv(bytes: &[u8]) -> Result<Self, CliError> {
        let text = std::str::from_utf8(bytes).map_err(|e| CliError::Parse(e.to_string()))?;
        let bad = |m: &str| CliError::Parse(m.to_string());
        let mut version = None;
        let mut config = None;
        let mut notes = Vec::new();
        let mut errors = Vec::new();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(c) = line.strip_prefix("# ") else { break };
            body_start += line.len();
            let c = c.trim_end_matches('\n');
            if let Some(v) = c.strip_prefix("fhwh ") {
                version = Some(v.to_string());
            } else if let Some(v) = c.strip_prefix("config: ") {
                config = Some(serde_json::from_str::<ExperimentConfig>(v).map_err(|e| CliError::Parse(e.to_string()))?);
            } else if let Some(v) = c.strip_prefix("note: ") {
                notes.push(v.to_string());
            } else if let Some(v) = c.strip_prefix("row-error ") {
                let (idx, rest) = v.split_once(' ').ok_or_else(|| bad("row-error line"))?;
                let (code, message) = rest.split_once(": ").ok_or_else(|| bad("row-error line"))?;
                let idx: usize = idx.parse().map_err(|_| bad("row-error index"))?;
                errors.push((idx, RowError { code: code.to_string(), message: message.to_string() }));
            } else {
                return Err(bad("unknown comment line"));
            }
        }
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(&text.as_bytes()[body_start..]);
        let columns: Vec<String> =
            rdr.headers().map_err(|e| CliError::Parse(e.to_string()))?.iter().map(|s| s.to_string()).collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| CliError::Parse(e.to_string()))?;
            let values = rec
                .iter()
                .map(|s| {
                    let v: f64 = s.parse().map_err(|_| bad("numeric cell"))?;
                    Ok((!v.is_nan()).then_some(v))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            rows.push(Row { values, error: None });
        }
        for (i, e) in errors {
            rows.get_mut(i).ok_or_else(|| bad("row-error index out of range"))?.error = Some(e);
        }
        Ok(ReportFile {
            version: version.ok_or_else(|| bad("missing version line"))?,
            config: config.ok_or_else(|| bad("missing config line"))?,
            notes,
            columns,
            rows,
        })
    }
}

/// Shortest representation that parses back to the same `f64`.
fn format_value(v: Option<f64>) -> String {
    match v {
        None => "NaN".to_string(),
        Some(x) if x.fract() == 0.0 && x.abs() < 1e15 => format!("{x}"),
        Some(x) => format!("{x:e}"),
    }
}
