//! Report containers and the single-threaded writer.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// A CSV file with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file: impl Into<String>, header: &[&'static str]) -> Self {
        Table {
            file: file.into(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .header
                    .iter()
                    .zip(r)
                    .map(|(h, v)| (h.to_string(), serde_json::Value::String(v.clone())))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "file": self.file, "header": self.header, "rows": rows })
    }
}

/// A two-column `(x, y)` series for external plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub kind: &'static str,
    pub tables: Vec<Table>,
    pub series: Vec<Series>,
    /// Extra text files (relative path, contents), e.g. witness matrices.
    pub attachments: Vec<(String, String)>,
    pub diagnostics: serde_json::Value,
}

impl Report {
    pub fn new(kind: &'static str) -> Self {
        Report {
            kind,
            tables: Vec::new(),
            series: Vec::new(),
            attachments: Vec::new(),
            diagnostics: serde_json::json!({}),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "tables": self.tables.iter().map(Table::to_json).collect::<Vec<_>>(),
            "series": self.series.iter().map(|s| s.name.clone()).collect::<Vec<_>>(),
            "diagnostics": self.diagnostics,
        })
    }
}

/// Formats a float for reports: shortest round-trip form, `inf` for
/// infinity.
pub fn num(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x}")
    }
}

/// Writes a two-column numeric file per series under `dir/plot`.
pub fn emit_plotdata(report: &Report, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let plot_dir = dir.join("plot");
    if !report.series.is_empty() {
        create_dir(&plot_dir)?;
    }
    report
        .series
        .iter()
        .map(|s| {
            let mut text = format!("# {} {}\n", s.x_label, s.y_label);
            for (x, y) in &s.points {
                text.push_str(&format!("{} {}\n", num(*x), num(*y)));
            }
            let path = plot_dir.join(format!("{}.dat", s.name));
            write(&path, &text)?;
            Ok(path)
        })
        .collect()
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        create_dir(parent)?;
    }
    fs::write(path, text).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes every table, the JSON report, attachments and plot data. Returns
/// the written paths in a fixed order.
pub fn write_report(report: &Report, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    create_dir(dir)?;
    let mut written = Vec::new();
    for t in &report.tables {
        let path = dir.join(&t.file);
        write(&path, &t.to_csv())?;
        written.push(path);
    }
    for (name, text) in &report.attachments {
        let path = dir.join(name);
        write(&path, text)?;
        written.push(path);
    }
    let json_path = dir.join(format!("{}.json", report.kind));
    let json = serde_json::to_string_pretty(&report.to_json()).expect("json values serialize");
    write(&json_path, &(json + "\n"))?;
    written.push(json_path);
    written.extend(emit_plotdata(report, dir)?);
    Ok(written)
}
