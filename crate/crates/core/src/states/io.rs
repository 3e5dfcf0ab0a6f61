//! JSON state files:
//! `{ "dims": [..], "labels": [..], "matrix": [[[re, im], ..], ..] }`,
//! dense and row-major. `labels` is optional on input.

use std::fmt::Write as _;
use std::path::Path;

use faer::Mat;
use serde::Deserialize;

use super::MultipartiteState;
use crate::{c64, Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dims: Vec<usize>,
    #[serde(default)]
    labels: Option<Vec<String>>,
    matrix: Vec<Vec<[f64; 2]>>,
}

/// Parses and validates a state from its JSON text.
pub fn parse_state_json(text: &str) -> Result<MultipartiteState> {
    let file: StateFile = serde_json::from_str(text)?;
    let rows = file.matrix.len();
    for (i, row) in file.matrix.iter().enumerate() {
        if row.len() != rows {
            return Err(Error::Format(format!(
                "matrix row {i} has {} entries, expected {rows}",
                row.len()
            )));
        }
    }
    let m = Mat::from_fn(rows, rows, |i, j| {
        let [re, im] = file.matrix[i][j];
        c64::new(re, im)
    });
    MultipartiteState::new(m, file.dims, file.labels)
}

pub fn read_state(path: impl AsRef<Path>) -> Result<MultipartiteState> {
    let text = std::fs::read_to_string(path)?;
    parse_state_json(&text)
}

/// Serializes with 17 significant digits per component, which round-trips
/// every `f64` exactly.
pub fn state_to_json(s: &MultipartiteState) -> String {
    let mut out = String::new();
    let dims: Vec<String> = s.dims().iter().map(|d| d.to_string()).collect();
    let labels: Vec<String> = s
        .labels()
        .iter()
        .map(|l| serde_json::to_string(l).expect("string serialization"))
        .collect();
    let _ = write!(
        out,
        "{{\n  \"dims\": [{}],\n  \"labels\": [{}],\n  \"matrix\": [\n",
        dims.join(", "),
        labels.join(", ")
    );
    let m = s.matrix();
    let n = m.nrows();
    for i in 0..n {
        out.push_str("    [");
        for j in 0..n {
            let z = m[(i, j)];
            let _ = write!(out, "[{}, {}]", fmt17(z.re), fmt17(z.im));
            if j + 1 < n {
                out.push_str(", ");
            }
        }
        out.push(']');
        if i + 1 < n {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn write_state(s: &MultipartiteState, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, state_to_json(s))?;
    Ok(())
}

fn fmt17(x: f64) -> String {
    // `-0.0` would print as "-0.0000000000000000e0"; keep the file tidy.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}
