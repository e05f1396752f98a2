use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use super::{Format, JobConfig, SCHEMA_VERSION};
use crate::error::Result;

/// Column-oriented view of a result, written as one CSV file.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Parsed numeric column, for tests and consumers.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[i].parse().ok()).collect()
    }
}

/// Shortest decimal string that parses back to the same f64.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Clone, Debug)]
pub struct Report {
    pub tables: Vec<Table>,
    /// The JSON `result` member.
    pub result: Value,
    pub passed: bool,
}

impl Report {
    pub fn new<T: Serialize>(result: &T, tables: Vec<Table>) -> Self {
        Report {
            tables,
            result: serde_json::to_value(result).expect("result serializes"),
            passed: true,
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

fn generator() -> String {
    format!("debranges {}", env!("CARGO_PKG_VERSION"))
}

fn document(config: &JobConfig, report: &Report) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "generator": generator(),
        "config": config,
        "passed": report.passed,
        "result": report.result,
    })
}

fn write_table(config: &JobConfig, table: &Table, w: &mut dyn Write) -> Result<()> {
    writeln!(w, "# schema_version: {SCHEMA_VERSION}")?;
    writeln!(w, "# generator: {}", generator())?;
    writeln!(w, "# table: {}", table.name)?;
    writeln!(w, "# config: {}", config.to_json())?;
    writeln!(w, "{}", table.columns.join(","))?;
    for row in &table.rows {
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_stream(config: &JobConfig, report: &Report, w: &mut dyn Write) -> Result<()> {
    match config.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &document(config, report))
                .map_err(|e| crate::Error::Io(e.to_string()))?;
            writeln!(w)?;
        }
        Format::Csv => {
            for (i, t) in report.tables.iter().enumerate() {
                if i > 0 {
                    writeln!(w)?;
                }
                write_table(config, t, w)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Path of table `name` when a CSV job with several tables writes to `out`:
/// `dir/stem-name.ext`.
pub fn table_path(out: &Path, name: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = out
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    out.with_file_name(format!("{stem}-{name}.{ext}"))
}

pub fn write_files(config: &JobConfig, report: &Report, out: &Path) -> Result<Vec<PathBuf>> {
    if let Some(dir) = out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let single = |path: &Path, table: Option<&Table>| -> Result<PathBuf> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        match table {
            Some(t) => write_table(config, t, &mut f)?,
            None => write_stream(config, report, &mut f)?,
        }
        f.flush()?;
        Ok(path.to_path_buf())
    };
    match (config.format, report.tables.len()) {
        (Format::Json, _) | (Format::Csv, 0) => Ok(vec![single(out, None)?]),
        (Format::Csv, 1) => Ok(vec![single(out, report.tables.first())?]),
        (Format::Csv, _) => report
            .tables
            .iter()
            .map(|t| single(&table_path(out, &t.name), Some(t)))
            .collect(),
    }
}
