//! Line-oriented weights file.
//!
//! ```text
//! MLP v1 I J K
//! <J lines of I hidden weights>
//! <K lines of J output weights>
//! <input_offset input_scale target_offset target_scale>   (optional)
//! ```

use std::io::{BufRead, Write};

use super::network::MlpNetwork;
use crate::error::{Error, Result};
use crate::io::format_f64;
use crate::pipeline::Normalization;

const MAGIC: &str = "MLP";
const VERSION: &str = "v1";

/// Writes the network without a normalization line.
pub fn save_weights<W: Write>(net: &MlpNetwork, out: W) -> Result<()> {
    write_model(net, None, out)
}

/// Writes the network followed by its normalization line.
pub fn save_model<W: Write>(net: &MlpNetwork, norm: &Normalization, out: W) -> Result<()> {
    write_model(net, Some(norm), out)
}

fn write_model<W: Write>(net: &MlpNetwork, norm: Option<&Normalization>, mut out: W) -> Result<()> {
    let (i, j, k) = (net.input_size(), net.hidden_size(), net.output_size());
    writeln!(out, "{MAGIC} {VERSION} {i} {j} {k}")?;
    for row in net.hidden_weights().chunks(i) {
        write_row(&mut out, row)?;
    }
    for row in net.output_weights().chunks(j) {
        write_row(&mut out, row)?;
    }
    if let Some(n) = norm {
        write_row(
            &mut out,
            &[n.input_offset, n.input_scale, n.target_offset, n.target_scale],
        )?;
    }
    out.flush()?;
    Ok(())
}

fn write_row<W: Write>(out: &mut W, row: &[f64]) -> Result<()> {
    let line: Vec<String> = row.iter().map(|&x| format_f64(x)).collect();
    writeln!(out, "{}", line.join(" "))?;
    Ok(())
}

pub fn load_weights<R: BufRead>(source: R) -> Result<MlpNetwork> {
    Ok(load_model(source)?.0)
}

/// Reads a weights file and its normalization line if present.
pub fn load_model<R: BufRead>(source: R) -> Result<(MlpNetwork, Option<Normalization>)> {
    let mut lines = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if !trimmed.is_empty() {
            lines.push((idx + 1, trimmed.to_string()));
        }
    }
    let mut it = lines.into_iter();

    let (hline, header) = it
        .next()
        .ok_or_else(|| Error::format("weights file is empty"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 5 || tokens[0] != MAGIC || tokens[1] != VERSION {
        return Err(Error::parse(hline, format!("expected `{MAGIC} {VERSION} I J K`, got `{header}`")));
    }
    let dim = |s: &str| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|_| Error::parse(hline, format!("invalid layer size `{s}`")))
    };
    let (i, j, k) = (dim(tokens[2])?, dim(tokens[3])?, dim(tokens[4])?);
    if i == 0 || j == 0 || k == 0 {
        return Err(Error::format(format!("layer sizes must be at least 1, got {i} {j} {k}")));
    }

    let mut read_rows = |rows: usize, width: usize, what: &str| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(rows * width);
        for r in 0..rows {
            let (line_no, text) = it.next().ok_or_else(|| {
                Error::format(format!(
                    "declared {rows} {what} rows but file ends after {r}"
                ))
            })?;
            let row = parse_row(line_no, &text)?;
            if row.len() != width {
                return Err(Error::format(format!(
                    "line {line_no}: {what} row has {} values, header declares {width}",
                    row.len()
                )));
            }
            out.extend(row);
        }
        Ok(out)
    };
    let v = read_rows(j, i, "hidden-weight")?;
    let w = read_rows(k, j, "output-weight")?;

    let norm = match it.next() {
        None => None,
        Some((line_no, text)) => {
            let row = parse_row(line_no, &text)?;
            if row.len() != 4 {
                return Err(Error::format(format!(
                    "line {line_no}: normalization line needs 4 values, got {}",
                    row.len()
                )));
            }
            Some(Normalization::new(row[0], row[1], row[2], row[3])?)
        }
    };
    if let Some((line_no, _)) = it.next() {
        return Err(Error::format(format!(
            "line {line_no}: unexpected content after the declared weights"
        )));
    }

    let net = MlpNetwork::from_weights(i, j, k, v, w)
        .map_err(|e| Error::format(e.to_string()))?;
    Ok((net, norm))
}

fn parse_row(line_no: usize, text: &str) -> Result<Vec<f64>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| Error::parse(line_no, format!("invalid number `{tok}`")))
        })
        .collect()
}
