use std::fs;

use aperiodic_core::{Error, Result};

/// Reads one real per line. Blank lines and lines starting with `#` are
/// skipped; a trailing comma-separated column is ignored.
pub fn load_values(path: &str) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{path}: {e}")))?;
    parse_values(&text).map_err(|m| Error::Input(format!("{path}: {m}")))
}

pub fn parse_values(text: &str) -> std::result::Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let field = t.split(',').next().unwrap_or("").trim();
        let x: f64 = field.parse().map_err(|_| format!("line {}: bad number {field:?}", i + 1))?;
        out.push(x);
    }
    if out.is_empty() {
        return Err("no values".into());
    }
    Ok(out)
}
