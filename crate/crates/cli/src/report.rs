//! Output formatting: machine artifacts carry 17 significant digits for
//! bit-faithful round trips, human tables 7.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::CliError;

/// 17 significant digits, round-trip exact for f64.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// 7-digit human rendering.
pub fn h7(x: f64) -> String {
    format!("{x:.7}")
}

/// Writes to the path, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Input(format!("cannot write to stdout: {e}")))
        }
    }
}

/// `"t,pressure"` style two-column CSV.
pub fn csv_two_column(header: &str, rows: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(rows.len() * 48 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for (a, b) in rows {
        out.push_str(&g17(*a));
        out.push(',');
        out.push_str(&g17(*b));
        out.push('\n');
    }
    out
}

/// Builds a JSON object string from prerendered field values.
pub fn json_object(fields: &[(&str, String)]) -> String {
    let mut out = String::from("{");
    for (i, (key, value)) in fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('"');
        out.push_str(key);
        out.push_str("\":");
        out.push_str(value);
    }
    out.push('}');
    out
}

pub fn json_array(items: &[String]) -> String {
    let mut out = String::from("[");
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(item);
    }
    out.push(']');
    out
}

pub fn json_float_array(values: &[f64]) -> String {
    json_array(&values.iter().map(|&v| g17(v)).collect::<Vec<_>>())
}
