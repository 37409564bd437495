//! Ground-motion record files.
//!
//! Two layouts are accepted, with `#` comment lines anywhere:
//!
//! ```text
//! dt=0.02            t,accel
//! 0.0                0.00,0.0
//! 0.1                0.02,0.1
//! ...                ...
//! ```
//!
//! In the first, values may also share a line separated by commas or spaces.
//! In the second the header's first column must be `t`; the second column is
//! read as the acceleration whatever its name, and the spacing of `t` must be
//! uniform to 1e-9 relative.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::format_f64;
use crate::error::{Error, Result};
use crate::sdof::GroundMotionRecord;

const SPACING_TOLERANCE: f64 = 1e-9;

pub fn read_record_file(path: &Path) -> Result<GroundMotionRecord> {
    let file = File::open(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_record(BufReader::new(file), &label)
}

pub fn parse_record<R: BufRead>(source: R, label: &str) -> Result<GroundMotionRecord> {
    let mut lines = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if !text.is_empty() && !text.starts_with('#') {
            lines.push((idx + 1, text.to_string()));
        }
    }
    let Some((first_no, first)) = lines.first().cloned() else {
        return Err(Error::parse(1, "record file is empty"));
    };

    if let Some(dt_text) = first.strip_prefix("dt=") {
        let dt = parse_number(first_no, dt_text.trim())?;
        let mut samples = Vec::new();
        for (no, text) in &lines[1..] {
            for tok in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                samples.push(parse_number(*no, tok)?);
            }
        }
        return GroundMotionRecord::new(dt, samples, label);
    }

    let header: Vec<&str> = first.split(',').map(str::trim).collect();
    if header.len() < 2 || header[0] != "t" {
        return Err(Error::parse(
            first_no,
            format!("expected `dt=<seconds>` or a `t,accel` header, got `{first}`"),
        ));
    }
    let mut times = Vec::new();
    let mut samples = Vec::new();
    for (no, text) in &lines[1..] {
        let cells: Vec<&str> = text.split(',').map(str::trim).collect();
        if cells.len() != header.len() {
            return Err(Error::parse(
                *no,
                format!("expected {} fields, got {}", header.len(), cells.len()),
            ));
        }
        times.push((*no, parse_number(*no, cells[0])?));
        samples.push(parse_number(*no, cells[1])?);
    }
    if times.len() < 2 {
        return Err(Error::input(format!(
            "record needs at least 2 samples, got {}",
            times.len()
        )));
    }
    let dt = times[1].1 - times[0].1;
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::format(format!(
            "line {}: time must increase, got dt = {dt}",
            times[1].0
        )));
    }
    for w in times.windows(2) {
        let step = w[1].1 - w[0].1;
        if (step - dt).abs() > SPACING_TOLERANCE * dt {
            return Err(Error::format(format!(
                "line {}: non-uniform spacing ({step} vs {dt})",
                w[1].0
            )));
        }
    }
    GroundMotionRecord::new(dt, samples, label)
}

/// Writes the `dt=` layout with the label as a leading comment.
pub fn write_record<W: Write>(record: &GroundMotionRecord, mut out: W) -> Result<()> {
    if !record.label().is_empty() {
        writeln!(out, "# {}", record.label().replace('\n', " "))?;
    }
    writeln!(out, "dt={}", format_f64(record.dt()))?;
    for &a in record.samples() {
        writeln!(out, "{}", format_f64(a))?;
    }
    out.flush()?;
    Ok(())
}

fn parse_number(line: usize, tok: &str) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| Error::parse(line, format!("invalid number `{tok}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dt_layout() {
        let r = parse_record("dt=0.02\n0.0,0.1,0.0\n".as_bytes(), "a").unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.dt(), 0.02);
        let r = parse_record("# c\ndt=0.02\n0.0\n0.1\n\n0.0\n".as_bytes(), "a").unwrap();
        assert_eq!(r.samples(), &[0.0, 0.1, 0.0]);
    }

    #[test]
    fn csv_layout() {
        let r = parse_record("t,accel\n0.00,0.0\n0.02,0.1\n0.04,0.0\n".as_bytes(), "b").unwrap();
        assert_eq!(r.samples(), &[0.0, 0.1, 0.0]);
        assert!((r.dt() - 0.02).abs() < 1e-15);
    }

    #[test]
    fn non_uniform_csv_cites_row() {
        let err = parse_record("t,accel\n0.00,0.0\n0.02,0.1\n0.05,0.0\n".as_bytes(), "b").unwrap_err();
        match err {
            Error::Format(msg) => assert!(msg.starts_with("line 4"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(parse_record("".as_bytes(), "e"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_record("dt=0.02\n0.1\nfoo\n".as_bytes(), "e"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_record("time,a\n0,1\n".as_bytes(), "e"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_record("dt=0.02\n0.1\n".as_bytes(), "e"),
            Err(Error::Input(_))
        ));
    }

    proptest! {
        #[test]
        fn written_records_parse_back(
            samples in proptest::collection::vec(-10.0f64..10.0, 2..64),
            dt in 1e-4f64..1.0,
        ) {
            let r = GroundMotionRecord::new(dt, samples, "p").unwrap();
            let mut buf = Vec::new();
            write_record(&r, &mut buf).unwrap();
            let back = parse_record(buf.as_slice(), "p").unwrap();
            prop_assert_eq!(back, r);
        }
    }
}
