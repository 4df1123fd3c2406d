//! Report encoders.
//!
//! CSV carries the manifest on a leading `# manifest {json}` line, then one
//! row per record over the union of record keys. An enclosure field `x`
//! becomes the two columns `x.lo` and `x.hi`; absent fields are empty cells.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use hypharm::report::{Field, Record, Report, RunManifest};

use crate::args::Format;

const MANIFEST_PREFIX: &str = "# manifest ";

#[derive(Debug, thiserror::Error)]
pub enum DecodeError {
    #[error("missing manifest line")]
    MissingManifest,
    #[error("manifest: {0}")]
    Manifest(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("column {0} has no matching .lo/.hi partner")]
    UnpairedColumn(String),
}

pub fn encode(report: &Report, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
        Format::Text => to_text(report),
    }
}

pub fn to_json(report: &Report) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}

pub fn from_json(text: &str) -> Result<Report, DecodeError> {
    Ok(serde_json::from_str(text)?)
}

fn columns(results: &[Record]) -> Vec<String> {
    let mut cols = BTreeSet::new();
    for rec in results {
        for (key, field) in &rec.0 {
            match field {
                Field::Text(_) => {
                    cols.insert(key.clone());
                }
                Field::Enclosure { .. } => {
                    cols.insert(format!("{key}.lo"));
                    cols.insert(format!("{key}.hi"));
                }
            }
        }
    }
    cols.into_iter().collect()
}

fn cell<'a>(rec: &'a Record, column: &str) -> &'a str {
    if let Some(Field::Text(t)) = rec.0.get(column) {
        return t;
    }
    let (key, side) = match column.rsplit_once('.') {
        Some(split) => split,
        None => return "",
    };
    match (rec.0.get(key), side) {
        (Some(Field::Enclosure { lo, .. }), "lo") => lo,
        (Some(Field::Enclosure { hi, .. }), "hi") => hi,
        _ => "",
    }
}

pub fn to_csv(report: &Report) -> String {
    let mut out = String::new();
    let manifest = serde_json::to_string(&report.manifest).expect("manifest serializes");
    writeln!(out, "{MANIFEST_PREFIX}{manifest}").unwrap();
    let cols = columns(&report.results);
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(&cols).expect("in-memory write");
    for rec in &report.results {
        writer
            .write_record(cols.iter().map(|c| cell(rec, c)))
            .expect("in-memory write");
    }
    let bytes = writer.into_inner().expect("in-memory flush");
    out.push_str(&String::from_utf8(bytes).expect("utf-8 input"));
    out
}

pub fn from_csv(text: &str) -> Result<Report, DecodeError> {
    let (first, rest) = text.split_once('\n').ok_or(DecodeError::MissingManifest)?;
    let manifest_json = first
        .strip_prefix(MANIFEST_PREFIX)
        .ok_or(DecodeError::MissingManifest)?;
    let manifest: RunManifest = serde_json::from_str(manifest_json)?;
    let mut reader = csv::Reader::from_reader(rest.as_bytes());
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut results = Vec::new();
    for row in reader.records() {
        let row = row?;
        let mut fields = BTreeMap::new();
        let mut halves: BTreeMap<String, (Option<String>, Option<String>)> = BTreeMap::new();
        for (col, value) in headers.iter().zip(row.iter()) {
            if value.is_empty() {
                continue;
            }
            if let Some(key) = col.strip_suffix(".lo") {
                halves.entry(key.to_string()).or_default().0 = Some(value.to_string());
            } else if let Some(key) = col.strip_suffix(".hi") {
                halves.entry(key.to_string()).or_default().1 = Some(value.to_string());
            } else {
                fields.insert(col.clone(), Field::Text(value.to_string()));
            }
        }
        for (key, pair) in halves {
            match pair {
                (Some(lo), Some(hi)) => {
                    fields.insert(key, Field::Enclosure { lo, hi });
                }
                _ => return Err(DecodeError::UnpairedColumn(key)),
            }
        }
        results.push(Record(fields));
    }
    Ok(Report { manifest, results })
}

pub fn to_text(report: &Report) -> String {
    let m = &report.manifest;
    let mut out = String::new();
    writeln!(
        out,
        "hypharm {} {}: {}",
        m.tool_version, m.subcommand, m.outcome
    )
    .unwrap();
    for (k, v) in &m.parameters {
        writeln!(out, "  {k} = {v}").unwrap();
    }
    writeln!(out, "  seed = {}", m.seed).unwrap();
    writeln!(
        out,
        "  started {} finished {} ({} ms)",
        m.started_at, m.finished_at, m.wall_time_ms
    )
    .unwrap();
    for rec in &report.results {
        let kind = rec.get("kind").unwrap_or("record");
        write!(out, "{kind}:").unwrap();
        for (k, field) in rec.0.iter().filter(|(k, _)| k.as_str() != "kind") {
            match field {
                Field::Text(t) => write!(out, " {k}={t}").unwrap(),
                Field::Enclosure { lo, hi } => write!(out, " {k}=[{lo}, {hi}]").unwrap(),
            }
        }
        out.push('\n');
    }
    out
}
