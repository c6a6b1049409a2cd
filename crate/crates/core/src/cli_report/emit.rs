//! JSON reports and CSV field files.
//!
//! Non-finite numbers are written as `null`. Floats use the shortest representation
//! that parses back to the same value, so parsing and re-emitting a report is
//! byte-identical.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{FieldData, Report};
use crate::error::{Error, Result};
use crate::relations::Status;

/// Output format of [`emit_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::InvalidParameter(format!("unknown format `{other}` (expected json or csv)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRecord {
    pub name: String,
    /// Tag of the relation the check verifies.
    pub paper_ref: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub ratio: Option<f64>,
    pub gap: Option<f64>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldRecord {
    pub name: String,
    /// Where the field was written, if it was.
    pub path: Option<String>,
}

/// Serialized form of a [`Report`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub scenario: String,
    pub params: BTreeMap<String, Option<f64>>,
    pub checks: Vec<CheckRecord>,
    pub fields: Vec<FieldRecord>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl ReportDocument {
    /// Builds the document; `paths` maps field names to the files they were written to.
    pub fn new(r: &Report, paths: &BTreeMap<String, PathBuf>) -> Self {
        Self {
            scenario: r.scenario.clone(),
            params: r.params.iter().map(|(k, v)| (k.clone(), finite(*v))).collect(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckRecord {
                    name: c.name.clone(),
                    paper_ref: c.relation.clone(),
                    lhs: finite(c.lhs),
                    rhs: finite(c.rhs),
                    ratio: finite(c.ratio),
                    gap: finite(c.gap),
                    status: c.status,
                })
                .collect(),
            fields: r
                .fields
                .iter()
                .map(|f| FieldRecord {
                    name: f.name().to_string(),
                    path: paths.get(f.name()).map(|p| p.display().to_string()),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Parses a JSON report.
pub fn parse_report(json: &str) -> Result<ReportDocument> {
    Ok(serde_json::from_str(json)?)
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(io_error(path))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

fn finish(mut w: csv::Writer<BufWriter<File>>, path: &Path) -> Result<()> {
    w.flush().map_err(io_error(path))?;
    let inner = w.into_inner().map_err(|e| Error::Io { path: path.to_path_buf(), source: e.into_error() })?;
    inner.into_inner().map_err(|e| Error::Io { path: path.to_path_buf(), source: e.into_error() })?.sync_all().map_err(io_error(path))
}

/// Writes one field as CSV with header `x,value` or `x,p,value`.
pub fn write_field_csv(field: &FieldData, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    match field {
        FieldData::Line { x, values, .. } => {
            w.write_record(["x", "value"])?;
            for (a, v) in x.iter().zip(values) {
                w.serialize((a, v))?;
            }
        }
        FieldData::Plane { x, p, values, .. } => {
            w.write_record(["x", "p", "value"])?;
            for (i, a) in x.iter().enumerate() {
                for (j, b) in p.iter().enumerate() {
                    w.serialize((a, b, values[i * p.len() + j]))?;
                }
            }
        }
    }
    finish(w, path)
}

fn write_checks_csv(r: &Report, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["name", "paper_ref", "lhs", "rhs", "ratio", "gap", "status"])?;
    for c in &r.checks {
        w.serialize((&c.name, &c.relation, finite(c.lhs), finite(c.rhs), finite(c.ratio), finite(c.gap), c.status.as_str()))?;
    }
    finish(w, path)
}

/// Writes a report and returns every file written.
///
/// With [`Format::Json`], `out` is the report file and fields go next to it as
/// `<stem>.<field>.csv`. With [`Format::Csv`], `out` is a directory that receives
/// `<scenario>.checks.csv` and `<scenario>.<field>.csv`.
pub fn emit_report(r: &Report, format: Format, out: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let mut paths = BTreeMap::new();
    let (dir, stem) = match format {
        Format::Json => {
            let dir = out.parent().map(Path::to_path_buf).unwrap_or_default();
            let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| r.scenario.clone());
            (dir, stem)
        }
        Format::Csv => (out.to_path_buf(), r.scenario.clone()),
    };
    if !dir.as_os_str().is_empty() {
        std::fs::create_dir_all(&dir).map_err(io_error(&dir))?;
    }
    for f in &r.fields {
        let path = dir.join(format!("{stem}.{}.csv", f.name()));
        write_field_csv(f, &path)?;
        paths.insert(f.name().to_string(), path.clone());
        written.push(path);
    }
    match format {
        Format::Json => {
            let json = ReportDocument::new(r, &paths).to_json()?;
            std::fs::write(out, json).map_err(io_error(out))?;
            written.push(out.to_path_buf());
        }
        Format::Csv => {
            let path = dir.join(format!("{stem}.checks.csv"));
            write_checks_csv(r, &path)?;
            written.push(path);
        }
    }
    Ok(written)
}
