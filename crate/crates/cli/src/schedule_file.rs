//! Sampled Hamiltonian schedules loaded from JSON, for the generic-file
//! model.
//!
//! File format:
//!
//! ```json
//! {
//!   "dim": 2,
//!   "tau": 1.0,
//!   "samples": [
//!     { "t": 0.0, "matrix": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]] },
//!     { "t": 1.0, "matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]] }
//!   ]
//! }
//! ```
//!
//! Matrix entries are `[re, im]` pairs, row major. Between samples the
//! operator is interpolated entrywise linearly, which preserves Hermiticity
//! exactly. Sample times must be strictly ascending, starting at 0 and ending
//! at `tau`.

use cdkit_core::counterdiabatic::HamiltonianSchedule;
use cdkit_core::spectral::HermitianOperator;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
struct ScheduleFile {
    dim: usize,
    tau: f64,
    samples: Vec<Sample>,
}

#[derive(Debug, Deserialize)]
struct Sample {
    t: f64,
    matrix: Vec<Vec<[f64; 2]>>,
}

fn parse(path: &str) -> Result<(usize, f64, Vec<(f64, DMatrix<Complex64>)>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read schedule {path}: {e}")))?;
    let file: ScheduleFile = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("schedule {path}: invalid JSON: {e}")))?;

    if file.samples.len() < 2 {
        return Err(CliError::usage(format!(
            "schedule {path}: need at least 2 samples"
        )));
    }
    if !(file.tau > 0.0) {
        return Err(CliError::usage(format!(
            "schedule {path}: tau must be > 0, got {}",
            file.tau
        )));
    }

    let mut knots = Vec::with_capacity(file.samples.len());
    for (i, s) in file.samples.iter().enumerate() {
        if s.matrix.len() != file.dim || s.matrix.iter().any(|row| row.len() != file.dim) {
            return Err(CliError::usage(format!(
                "schedule {path}: sample {i} is not a {d}x{d} matrix",
                d = file.dim
            )));
        }
        let m = DMatrix::from_fn(file.dim, file.dim, |r, c| {
            Complex64::new(s.matrix[r][c][0], s.matrix[r][c][1])
        });
        // validate Hermiticity sample by sample; interpolation preserves it
        HermitianOperator::new(m.clone())
            .map_err(|e| CliError::usage(format!("schedule {path}: sample {i}: {e}")))?;
        knots.push((s.t, m));
    }
    if knots[0].0 != 0.0 || (knots.last().unwrap().0 - file.tau).abs() > 1e-12 * file.tau {
        return Err(CliError::usage(format!(
            "schedule {path}: samples must start at t = 0 and end at t = tau"
        )));
    }
    if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(CliError::usage(format!(
            "schedule {path}: sample times must be strictly ascending"
        )));
    }
    Ok((file.dim, file.tau, knots))
}

fn interpolating_schedule(
    dim: usize,
    tau: f64,
    knots: Vec<(f64, DMatrix<Complex64>)>,
    time_scale: f64,
) -> Result<HamiltonianSchedule, CliError> {
    HamiltonianSchedule::new(dim, tau * time_scale, move |t| {
        let u = (t / time_scale).clamp(0.0, tau);
        let idx = match knots.binary_search_by(|(kt, _)| kt.partial_cmp(&u).unwrap()) {
            Ok(i) => i.min(knots.len() - 2),
            Err(i) => i.saturating_sub(1).min(knots.len() - 2),
        };
        let (t0, ref m0) = knots[idx];
        let (t1, ref m1) = knots[idx + 1];
        let w = ((u - t0) / (t1 - t0)).clamp(0.0, 1.0);
        let m = m0 * Complex64::from(1.0 - w) + m1 * Complex64::from(w);
        HermitianOperator::new(m).expect("interpolation preserves Hermiticity")
    })
    .map_err(CliError::usage_from_core)
}

/// Loads a sampled-schedule file as an interpolating [`HamiltonianSchedule`].
pub fn load(path: &str) -> Result<HamiltonianSchedule, CliError> {
    let (dim, tau, knots) = parse(path)?;
    interpolating_schedule(dim, tau, knots, 1.0)
}

/// Loads a schedule and re-times it to the duration `new_tau`: the same
/// control path traversed over a different window.
pub fn load_retimed(path: &str, new_tau: f64) -> Result<HamiltonianSchedule, CliError> {
    if !(new_tau > 0.0) {
        return Err(CliError::usage(format!("tau must be > 0, got {new_tau}")));
    }
    let (dim, tau, knots) = parse(path)?;
    interpolating_schedule(dim, tau, knots, new_tau / tau)
}
