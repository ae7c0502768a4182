//! CSV and newline-delimited JSON for experiment rows.
//!
//! Exact quantities are written as integer or `p/q` strings, floats carry the
//! `_approx` suffix and 12 significant digits, and the column order is
//! [`COLUMNS`](super::COLUMNS).

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};

use super::ExperimentRow;

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    if rows.is_empty() {
        w.write_record(super::COLUMNS).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ExperimentRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_err)?.clone();
    if header.iter().ne(super::COLUMNS.iter().copied()) {
        return Err(Error::Parse("unexpected CSV header".into()));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

pub fn write_json_lines<W: Write>(rows: &[ExperimentRow], mut out: W) -> Result<()> {
    for r in rows {
        let line = serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_json_lines<R: BufRead>(input: R) -> Result<Vec<ExperimentRow>> {
    let mut rows = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        rows.push(serde_json::from_str(&line).map_err(|e| Error::Parse(e.to_string()))?);
    }
    Ok(rows)
}

/// Rows from either format, detected by the first non-blank character.
pub fn read_rows(text: &str) -> Result<Vec<ExperimentRow>> {
    if text.trim_start().starts_with('{') {
        read_json_lines(text.as_bytes())
    } else {
        read_csv(text.as_bytes())
    }
}
