//! Deterministic rendering of reports and sweeps.
//!
//! CSV numbers are printed in scientific notation with 12 significant digits;
//! unbounded speeds appear as the literal `inf`. Identical inputs therefore
//! produce byte-identical files.

use cdkit_core::qsl::{ProtocolReport, Speed};
use serde_json::json;

use crate::config::RunConfig;
use crate::error::CliError;

/// Fixed 12-significant-digit scientific formatting.
pub fn fmt(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.11e}")
    }
}

fn fmt_speed(s: Speed) -> String {
    match s {
        Speed::Finite(v) => fmt(v),
        Speed::Unbounded => "inf".to_string(),
    }
}

fn json_number(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

fn json_speed(s: Speed) -> serde_json::Value {
    match s {
        Speed::Finite(v) => json_number(v),
        Speed::Unbounded => json!("inf"),
    }
}

fn config_comment_lines(config: &RunConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!("# model = {}\n", config.model));
    match config.model {
        crate::config::Model::Oscillator => {
            let o = &config.oscillator;
            out.push_str(&format!(
                "# oscillator.omega0 = {}, oscillator.omega_d = {}, oscillator.mass = {}, oscillator.tau = {}\n",
                fmt(o.omega0), fmt(o.omega_d), fmt(o.mass), fmt(o.tau)
            ));
        }
        crate::config::Model::LandauZener => {
            let l = &config.lz;
            out.push_str(&format!(
                "# lz.delta = {}, lz.g0 = {}, lz.g_d = {}, lz.tau = {}, lz.rescaled = {}\n",
                fmt(l.delta),
                fmt(l.g0),
                fmt(l.g_d),
                fmt(l.tau),
                l.rescaled
            ));
        }
        crate::config::Model::GenericFile => {
            out.push_str(&format!(
                "# schedule.file = {}\n",
                config.schedule_file.as_deref().unwrap_or("")
            ));
        }
    }
    out.push_str(&format!(
        "# grid_points = {}, quadrature.abs_tol = {}, quadrature.rel_tol = {}\n",
        config.grid_points,
        fmt(config.abs_tol),
        fmt(config.rel_tol)
    ));
    out
}

/// Renders a protocol report as CSV with a summary comment block.
pub fn report_csv(report: &ProtocolReport, config: &RunConfig) -> String {
    let mut out = String::new();
    out.push_str("# cdkit report\n");
    out.push_str(&config_comment_lines(config));
    out.push_str(&format!(
        "# tau = {}, total_cost = {}, e_tau = {}, tau_qsl = {}\n",
        fmt(report.tau),
        fmt(report.total_cost),
        fmt(report.e_tau),
        fmt(report.tau_qsl)
    ));
    out.push_str("t,t_over_tau,control,epsilon,cost_rate,angle,vqsl\n");
    for s in &report.samples {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt(s.t),
            fmt(s.t / report.tau),
            fmt(s.control),
            fmt(s.epsilon),
            fmt(s.cost_rate),
            fmt(s.angle),
            fmt_speed(s.speed)
        ));
    }
    out
}

/// Renders a protocol report as JSON; the embedded config re-ingests as a
/// run configuration.
pub fn report_json(report: &ProtocolReport, config: &RunConfig) -> Result<String, CliError> {
    let samples: Vec<serde_json::Value> = report
        .samples
        .iter()
        .map(|s| {
            json!({
                "t": json_number(s.t),
                "t_over_tau": json_number(s.t / report.tau),
                "control": json_number(s.control),
                "epsilon": json_number(s.epsilon),
                "cost_rate": json_number(s.cost_rate),
                "angle": json_number(s.angle),
                "vqsl": json_speed(s.speed),
            })
        })
        .collect();
    let doc = json!({
        "config": config,
        "summary": {
            "tau": json_number(report.tau),
            "total_cost": json_number(report.total_cost),
            "e_tau": json_number(report.e_tau),
            "tau_qsl": json_number(report.tau_qsl),
        },
        "samples": samples,
    });
    serde_json::to_string_pretty(&doc)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::io(format!("cannot serialize report: {e}")))
}

/// One row of a duration sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub tau: f64,
    pub total_cost: f64,
    pub e_tau: f64,
    pub tau_qsl: f64,
}

pub fn sweep_csv(rows: &[SweepRow], config: &RunConfig) -> String {
    let mut out = String::new();
    out.push_str("# cdkit qsl-sweep\n");
    out.push_str(&config_comment_lines(config));
    out.push_str("tau,total_cost,e_tau,tau_qsl\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt(r.tau),
            fmt(r.total_cost),
            fmt(r.e_tau),
            fmt(r.tau_qsl)
        ));
    }
    out
}

pub fn sweep_json(rows: &[SweepRow], config: &RunConfig) -> Result<String, CliError> {
    let rows: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            json!({
                "tau": json_number(r.tau),
                "total_cost": json_number(r.total_cost),
                "e_tau": json_number(r.e_tau),
                "tau_qsl": json_number(r.tau_qsl),
            })
        })
        .collect();
    let doc = json!({ "config": config, "rows": rows });
    serde_json::to_string_pretty(&doc)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::io(format!("cannot serialize sweep: {e}")))
}

/// Writes to the given path, or to stdout when no path is set.
pub fn emit(text: &str, path: Option<&str>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::io(format!("cannot write {p}: {e}"))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io(format!("cannot write stdout: {e}")))
        }
    }
}
