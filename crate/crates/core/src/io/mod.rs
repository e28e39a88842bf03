//! Text formats, parameter handling and batch runs.
//!
//! Input vectors use one point per line: whitespace-separated coordinates
//! followed by an optional free-text label. `#` starts a comment line.
//! Clusterings are written one per line as space-separated integer labels
//! (noise is `-1`) followed by an optional run label.

mod params;
mod range;
mod run;

pub use params::{build_algorithm, Algorithm, Extraction, HacEngine, MedoidAlgorithm, ParamSet, RunDescription};
pub use range::{parse_int_range, IntRange};
pub use run::{evaluate, execute, EvalMeasure, RunOutput};

use std::io::BufRead;

use crate::clustering::{Clustering, NOISE};
use crate::data::Dataset;
use crate::error::{invalid, Error, Result};

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn numeric(token: &str) -> Option<f64> {
    token.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Reads a vector file. Every data line needs at least one coordinate and
/// all lines must agree on the dimensionality.
pub fn parse_points<R: BufRead>(reader: R) -> Result<Dataset> {
    let mut dim = None;
    let mut values = Vec::new();
    let mut labels = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| parse_error(lineno, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let split = tokens.iter().position(|t| numeric(t).is_none()).unwrap_or(tokens.len());
        if split == 0 {
            return Err(parse_error(lineno, format!("no numeric columns before '{}'", tokens[0])));
        }
        if let Some(t) = tokens[split..].iter().find(|t| numeric(t).is_some()) {
            return Err(parse_error(lineno, format!("number '{t}' after the label; labels must follow all coordinates")));
        }
        match dim {
            None => dim = Some(split),
            Some(d) if d != split => {
                return Err(parse_error(lineno, format!("expected {d} coordinates, found {split}")));
            }
            _ => {}
        }
        values.extend(tokens[..split].iter().map(|t| numeric(t).expect("checked")));
        labels.push((split < tokens.len()).then(|| tokens[split..].join(" ")));
    }
    let dim = dim.ok_or_else(|| parse_error(0, "no data rows"))?;
    Dataset::from_flat(dim, values)?.with_labels(labels)
}

pub fn parse_points_str(text: &str) -> Result<Dataset> {
    parse_points(text.as_bytes())
}

/// One output line: the labels in input order, then `run_label` if any.
pub fn write_assignment(c: &Clustering, run_label: Option<&str>) -> Result<String> {
    if c.is_empty() {
        return Err(invalid("cannot write an empty clustering"));
    }
    let mut out = c.assignment().iter().map(i32::to_string).collect::<Vec<_>>().join(" ");
    if let Some(label) = run_label {
        out.push(' ');
        out.push_str(label);
    }
    out.push('\n');
    Ok(out)
}

/// Reads one assignment line; every negative label becomes noise.
pub fn parse_assignment(line: &str) -> Result<(Clustering, Option<String>)> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let split = tokens.iter().position(|t| t.parse::<i64>().is_err()).unwrap_or(tokens.len());
    if split == 0 {
        return Err(parse_error(1, "no cluster labels"));
    }
    let labels: Vec<i32> = tokens[..split]
        .iter()
        .map(|t| {
            let v: i64 = t.parse().expect("checked");
            if v < 0 {
                Ok(NOISE)
            } else {
                i32::try_from(v).map_err(|_| parse_error(1, format!("label {v} out of range")))
            }
        })
        .collect::<Result<_>>()?;
    let run_label = (split < tokens.len()).then(|| tokens[split..].join(" "));
    Ok((Clustering::new(labels)?, run_label))
}

/// All assignment lines of a result file, skipping comments and blank lines.
pub fn parse_assignments(text: &str) -> Result<Vec<(Clustering, Option<String>)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            parse_assignment(l).map_err(|e| match e {
                Error::Parse { msg, .. } => parse_error(i + 1, msg),
                other => other,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests;
