use std::io::{BufRead, Write};

use super::format_f64;
use crate::error::{Error, Result};

/// Writes a header line and one row per index, LF line endings. Negative zero
/// is written as zero.
pub fn write_csv<W: Write>(mut out: W, headers: &[&str], columns: &[&[f64]]) -> Result<()> {
    if headers.len() != columns.len() {
        return Err(Error::input("header and column counts differ"));
    }
    let rows = columns.first().map_or(0, |c| c.len());
    if columns.iter().any(|c| c.len() != rows) {
        return Err(Error::input("csv columns differ in length"));
    }
    writeln!(out, "{}", headers.join(","))?;
    for r in 0..rows {
        let line: Vec<String> = columns.iter().map(|c| format_f64(c[r] + 0.0)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// Header plus string cells of a comma-separated table.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    /// A named column parsed as numbers.
    pub fn numeric_column(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self
            .column_index(name)
            .ok_or_else(|| Error::format(format!("missing column `{name}`")))?;
        self.rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row[idx]
                    .parse::<f64>()
                    .map_err(|_| Error::parse(r + 2, format!("invalid number `{}`", row[idx])))
            })
            .collect()
    }
}

/// Reads a table written by [`write_csv`] (or any header-first CSV without quoting).
pub fn read_csv<R: BufRead>(source: R) -> Result<CsvTable> {
    let mut headers: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let cells: Vec<String> = text.split(',').map(|c| c.trim().to_string()).collect();
        match &headers {
            None => headers = Some(cells),
            Some(h) => {
                if cells.len() != h.len() {
                    return Err(Error::parse(
                        idx + 1,
                        format!("expected {} fields, got {}", h.len(), cells.len()),
                    ));
                }
                rows.push(cells);
            }
        }
    }
    let headers = headers.ok_or_else(|| Error::parse(1, "csv is empty"))?;
    Ok(CsvTable { headers, rows })
}
