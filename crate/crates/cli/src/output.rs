//! CSV tables with nine significant digits and their JSON sidecars.

use csv::{Terminator, WriterBuilder};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

use crate::error::CliError;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Formats like C's `%.9g`: fixed notation for moderate exponents, scientific
/// otherwise, trailing zeros removed.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A table ready to be written.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn write_csv(path: &Path, table: &Table) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    let mut w = WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_path(path)?;
    w.write_record(&table.columns)?;
    for row in &table.rows {
        debug_assert_eq!(row.len(), table.columns.len());
        w.write_record(row.iter().map(|v| format_value(*v)))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the CSV and a sidecar holding the command line, the resolved
/// parameters, versions and the command-specific report.
pub fn write_artifacts(
    path: &Path,
    table: &Table,
    command: &str,
    parameters: Value,
    report: Value,
) -> Result<PathBuf, CliError> {
    write_csv(path, table)?;
    let meta = json!({
        "command": command,
        "parameters": parameters,
        "versions": {
            "trarep-core": trarep_core::VERSION,
            "trarep-cli": env!("CARGO_PKG_VERSION"),
        },
        "csv": {
            "file": path.file_name().map(|f| f.to_string_lossy().into_owned()),
            "columns": table.columns,
            "rows": table.rows.len(),
            "significant_digits": SIGNIFICANT_DIGITS,
        },
        "report": report,
    });
    let side = sidecar_path(path);
    let mut text = serde_json::to_string_pretty(&meta)?;
    text.push('\n');
    std::fs::write(&side, text)?;
    Ok(side)
}

/// Replaces non-finite numbers, which JSON cannot hold, by `null`.
pub fn finite_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}
