//! The dataset CSV format: header `x1,...,x{p-1},y`, one observation per
//! row, decimal floating point, UTF-8, LF line endings.

use std::fs;
use std::path::Path;

use regdepth_core::Dataset;

use crate::{AppError, AppResult};

/// Reads a dataset from a CSV file; `p` is inferred from the header.
pub fn read_dataset(path: &Path) -> AppResult<Dataset> {
    let text = fs::read_to_string(path).map_err(|source| AppError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    parse_dataset(&text, &label)
}

/// Parses the CSV text format.
pub fn parse_dataset(text: &str, label: &str) -> AppResult<Dataset> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| AppError::Malformed("empty file".into()))?;
    let cols: Vec<&str> = header.trim_end_matches('\r').split(',').collect();
    if cols.len() < 2 || cols[cols.len() - 1] != "y" {
        return Err(AppError::Malformed(format!(
            "header must be x1,...,x{{p-1}},y; got {header:?}"
        )));
    }
    for (i, c) in cols[..cols.len() - 1].iter().enumerate() {
        let expect = format!("x{}", i + 1);
        if *c != expect {
            return Err(AppError::Malformed(format!(
                "header column {} must be {expect}, got {c:?}",
                i + 1
            )));
        }
    }
    let p = cols.len(); // p-1 predictors plus y

    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != p {
            return Err(AppError::Malformed(format!(
                "line {}: expected {p} fields, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let parse = |s: &str| -> AppResult<f64> {
            s.trim().parse::<f64>().map_err(|_| {
                AppError::Malformed(format!("line {}: bad number {s:?}", lineno + 1))
            })
        };
        let x: Vec<f64> = fields[..p - 1]
            .iter()
            .map(|s| parse(s))
            .collect::<AppResult<_>>()?;
        let y = parse(fields[p - 1])?;
        rows.push((x, y));
    }
    Ok(Dataset::new(p, &rows, label)?)
}

/// Renders a dataset in the CSV format (LF endings, shortest round-trip
/// float formatting).
pub fn dataset_to_csv(d: &Dataset) -> String {
    let mut out = String::new();
    for i in 0..d.x_dim() {
        out.push_str(&format!("x{},", i + 1));
    }
    out.push_str("y\n");
    for (x, y) in d.rows() {
        for c in x {
            out.push_str(&format!("{c},"));
        }
        out.push_str(&format!("{y}\n"));
    }
    out
}

/// Writes a dataset to a CSV file.
pub fn write_dataset(d: &Dataset, path: &Path) -> AppResult<()> {
    fs::write(path, dataset_to_csv(d)).map_err(|source| AppError::Io {
        path: path.display().to_string(),
        source,
    })
}
