//! Plain-text sample files: one decimal per line, `#` comments and blank
//! lines ignored.

use std::io::BufRead;

use crate::error::CliError;

/// Parses observations, naming the 1-based line of the first bad value.
pub fn read_observations(reader: impl BufRead) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| CliError::Input(format!("line {lineno}: {e}")))?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let value = parse_decimal(text)
            .ok_or_else(|| CliError::Input(format!("line {lineno}: cannot parse {text:?} as a number")))?;
        if !(0.0..1.0).contains(&value) {
            return Err(CliError::Input(format!("line {lineno}: value {text} lies outside [0, 1)")));
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(CliError::Input("no observations found".into()));
    }
    Ok(values)
}

/// Dot-decimal numbers only: `inf`, `nan` and friends are rejected.
fn parse_decimal(text: &str) -> Option<f64> {
    let plain = text
        .bytes()
        .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E'));
    if !plain {
        return None;
    }
    text.parse::<f64>().ok().filter(|v| v.is_finite())
}
