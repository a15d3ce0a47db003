//! CSV conventions shared by every output file.
//!
//! Files start with `#` comment lines (free-form provenance, including a
//! timestamp), then one header line, then data rows. Fields are separated by
//! `,`, floats use `.` and 12 significant digits, and every row starts with
//! the schema version.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const SIGNIFICANT_DIGITS: usize = 12;

pub const FIDELITY_COLUMNS: &[&str] = &[
    "schema_version",
    "family",
    "boundary",
    "nu",
    "size",
    "M",
    "N",
    "nn_repulsion",
    "S",
    "chiN",
    "energy_ground",
    "energy_ansatz",
    "fidelity",
    "iterations",
    "residual",
];

pub const EFFECTIVE_SIZE_COLUMNS: &[&str] = &[
    "schema_version",
    "family",
    "boundary",
    "nu",
    "size",
    "M",
    "E",
    "S",
    "purity",
    "energy_single",
    "iterations",
    "residual",
];

pub const PATH_LENGTH_COLUMNS: &[&str] = &[
    "schema_version",
    "family",
    "boundary",
    "nu",
    "size",
    "M",
    "E",
    "avg_path_length",
    "circuit_rank",
];

pub const NODE_PROFILE_COLUMNS: &[&str] = &[
    "schema_version",
    "family",
    "boundary",
    "nu",
    "size",
    "M",
    "node_id",
    "degree",
    "betweenness",
    "p1",
];

pub const FIT_COLUMNS: &[&str] = &[
    "schema_version",
    "family",
    "boundary",
    "nu",
    "alpha",
    "r_squared",
    "points",
    "M_min",
    "M_max",
];

pub const NODE_METRICS_COLUMNS: &[&str] = &["schema_version", "node_id", "degree", "betweenness"];

pub const GRAPH_SUMMARY_COLUMNS: &[&str] = &[
    "schema_version",
    "family",
    "boundary",
    "nu",
    "size",
    "M",
    "E",
    "avg_path_length",
    "circuit_rank",
];

/// `%.12g`-style formatting: fixed notation for decimal exponents in
/// `-4..12`, scientific otherwise, trailing zeros removed.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        let keep = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(keep);
    }
    s
}

pub fn header_line(columns: &[&str]) -> String {
    columns.join(",")
}

pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Data rows of an existing CSV file whose header matches `columns`.
///
/// Comment lines are skipped; a trailing line without a newline (an
/// interrupted write) and rows with the wrong field count are dropped.
pub fn read_rows(path: &Path, columns: &[&str]) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    let mut lines = complete.lines().filter(|l| !l.starts_with('#'));
    match lines.next() {
        None => return Ok(Vec::new()),
        Some(h) if h == header_line(columns) => {}
        Some(h) => {
            return Err(Error::Config(format!(
                "{} has header '{h}', expected '{}'",
                path.display(),
                header_line(columns)
            )))
        }
    }
    Ok(lines
        .filter(|l| l.split(',').count() == columns.len())
        .map(str::to_string)
        .collect())
}

/// Index of `name` in `columns`.
pub fn column(columns: &[&str], name: &str) -> Option<usize> {
    columns.iter().position(|c| *c == name)
}
