//! CSV output and plain-text data input.
//!
//! Floats are written with Rust's shortest round-trip formatting, so values
//! read back are bit-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{DeconvError, Result};
use crate::estimator::SampleBatch;
use crate::harness::{ExperimentSpec, SummaryStats};
use crate::selection::ModelScore;

pub const RESULTS_HEADER: &str =
    "density,noise,assumed_noise,n,s2n,reps,seed,mean_ise,median_ise,sd_ise,modal_m";

/// Results table, one row per experiment.
pub fn results_csv(rows: &[(ExperimentSpec, SummaryStats)]) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for (spec, stats) in rows {
        let modal = stats.modal_m().map(|m| m.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            spec.density.letter(),
            spec.noise,
            spec.assumed_kind(),
            spec.n,
            spec.s2n,
            spec.reps,
            spec.seed,
            stats.mean_ise,
            stats.median_ise,
            stats.sd_ise,
            modal
        )
        .expect("writing to a String cannot fail");
    }
    out
}

pub fn write_results(rows: &[(ExperimentSpec, SummaryStats)], path: &Path) -> Result<()> {
    write_text(path, &results_csv(rows))
}

/// Score curve with columns `m,contrast,pen,crit`.
pub fn score_curve_csv(scores: &[ModelScore]) -> String {
    let mut out = String::from("m,contrast,pen,crit\n");
    for s in scores {
        writeln!(out, "{},{},{},{}", s.m, s.contrast, s.pen, s.crit).expect("infallible");
    }
    out
}

/// Density estimate with columns `x,ghat`.
pub fn estimate_csv(grid: &[f64], values: &[f64]) -> String {
    let mut out = String::from("x,ghat\n");
    for (x, v) in grid.iter().zip(values) {
        writeln!(out, "{x},{v}").expect("infallible");
    }
    out
}

pub fn write_text(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| DeconvError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Reads one observation per line; blank lines are skipped.
pub fn read_data(path: &Path) -> Result<SampleBatch> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| DeconvError::Io {
        path: shown.clone(),
        message: e.to_string(),
    })?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        match trimmed.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            _ => {
                return Err(DeconvError::Data {
                    path: shown,
                    message: format!("line {}: '{trimmed}' is not a finite number", i + 1),
                })
            }
        }
    }
    if values.is_empty() {
        return Err(DeconvError::Data {
            path: shown,
            message: "no observations".into(),
        });
    }
    SampleBatch::new(values)
}
