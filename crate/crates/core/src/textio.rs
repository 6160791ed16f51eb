//! Plain-text matrix and key=value file helpers shared by the dataset,
//! score and configuration formats.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Format a float with 17 significant digits, which round-trips exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_matrix_csv(path: &Path, rows: usize, cols: usize, data: &[f64]) -> Result<()> {
    debug_assert_eq!(data.len(), rows * cols);
    let mut out = String::with_capacity(rows * cols * 24);
    for r in 0..rows {
        for c in 0..cols {
            if c > 0 {
                out.push(',');
            }
            let _ = write!(out, "{:.16e}", data[r * cols + c]);
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// Read a rectangular comma-separated matrix. Returns `(rows, cols, data)`.
pub fn read_matrix_csv(path: &Path) -> Result<(usize, usize, Vec<f64>)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let before = data.len();
        for field in line.split(',') {
            let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                msg: format!("not a number: {field:?}"),
            })?;
            data.push(v);
        }
        let width = data.len() - before;
        match cols {
            None => cols = Some(width),
            Some(c) if c != width => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: lineno + 1,
                    msg: format!("expected {c} columns, found {width}"),
                })
            }
            _ => {}
        }
        rows += 1;
    }
    Ok((rows, cols.unwrap_or(0), data))
}

/// Parse `key=value` lines; `#` starts a comment line. Keys keep file order.
pub fn parse_key_values(text: &str, path: &Path) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                msg: format!("expected key=value, found {line:?}"),
            });
        };
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}
