//! CSV formatting and parsing. Numbers are written with 12 significant
//! digits in scientific form, independent of locale, so identical runs
//! produce byte-identical files.

use std::io::Write;
use std::path::Path;

use crate::{config_err, CliResult};

/// 12 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.11e}")
}

/// A parsed CSV with a header row and float columns.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    let mut buf = Vec::new();
    writeln!(buf, "{}", header.join(","))?;
    for row in rows {
        writeln!(buf, "{}", row.join(","))?;
    }
    atomic_write(path, &buf)
}

/// Write via a temporary file and rename, so readers never observe a
/// partial file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

pub fn read_csv(path: &Path) -> CliResult<Table> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| config_err(format!("{} is empty", path.display())))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(',').map(|s| s.trim().parse::<f64>()).collect();
        let row = row.map_err(|e| {
            config_err(format!(
                "{} line {}: bad number: {e}",
                path.display(),
                lineno + 2
            ))
        })?;
        if row.len() != header.len() {
            return Err(config_err(format!(
                "{} line {}: {} fields, header has {}",
                path.display(),
                lineno + 2,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(config_err(format!("{} has no data rows", path.display())));
    }
    Ok(Table { header, rows })
}
