//! Headerless CSV matrices and atomic file output.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use slr_core::Matrix64;
use tempfile::NamedTempFile;

use crate::CliError;

/// Read a headerless CSV of finite numbers, one matrix row per line.
pub fn read_matrix(path: &Path) -> Result<Matrix64, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_matrix(file, path)
}

fn parse_matrix(source: impl std::io::Read, path: &Path) -> Result<Matrix64, CliError> {
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(source);
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0usize;
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(rows + 1, |p| p.line() as usize);
        match cols {
            None => cols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(CliError::Parse(format!(
                    "{}: line {line}: expected {c} fields, found {}",
                    path.display(),
                    record.len()
                )))
            }
            _ => {}
        }
        for (j, field) in record.iter().enumerate() {
            let x: f64 = field.parse().map_err(|_| {
                CliError::Parse(format!(
                    "{}: line {line}, column {}: not a number: {field:?}",
                    path.display(),
                    j + 1
                ))
            })?;
            if !x.is_finite() {
                return Err(CliError::Parse(format!(
                    "{}: line {line}, column {}: non-finite value {field}",
                    path.display(),
                    j + 1
                )));
            }
            data.push(x);
        }
        rows += 1;
    }
    let cols = cols.unwrap_or(0);
    if rows == 0 || cols == 0 {
        return Err(CliError::Parse(format!("{}: empty matrix", path.display())));
    }
    Matrix64::from_vec(rows, cols, data).map_err(CliError::Core)
}

/// Shortest decimal that parses back to the same `f64`.
pub fn format_matrix(m: &Matrix64) -> String {
    let mut out = String::with_capacity(m.len() * 20);
    for i in 0..m.rows() {
        for (j, x) in m.row(i).iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{x:?}"));
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix(path: &Path, m: &Matrix64) -> Result<(), CliError> {
    write_atomic(path, format_matrix(m).as_bytes())
}

pub fn write_json<S: serde::Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Parse(e.to_string()))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Write to a temporary file in the destination directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
