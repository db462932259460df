//! Quantum-speed-limit quantities: maximal speed, QSL time, total driving
//! cost and time-averaged energy, plus the adaptive quadrature they require.
//!
//! With `ħ = 1` the maximal rate of change of the angle `L_t` between the
//! initial and the current state is `v = eps_t / (cos L_t sin L_t)`, and the
//! minimal time to reach the final angle is
//! `tau_qsl = tau sin^2(L_tau) / (2 ∫ eps_t dt)`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{check_window, CoreError, Result};

/// Default absolute quadrature tolerance.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;
/// Default relative quadrature tolerance.
pub const DEFAULT_REL_TOL: f64 = 1e-8;
/// Maximum bisection depth of the adaptive quadrature.
pub const MAX_QUAD_DEPTH: u32 = 48;
/// Default number of samples in a protocol report grid.
pub const DEFAULT_GRID_POINTS: usize = 1001;

/// A QSL speed. The bound genuinely diverges when the angle sits at 0 or
/// pi/2 while the generator has nonzero norm, so that case carries a
/// dedicated marker instead of a floating-point overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Speed {
    Finite(f64),
    Unbounded,
}

impl Speed {
    pub fn is_unbounded(&self) -> bool {
        matches!(self, Speed::Unbounded)
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<f64> {
        match self {
            Speed::Finite(v) => Some(*v),
            Speed::Unbounded => None,
        }
    }
}

impl std::fmt::Display for Speed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Speed::Finite(v) => write!(f, "{v}"),
            Speed::Unbounded => write!(f, "inf"),
        }
    }
}

/// Maximal speed `eps / (cos(angle) sin(angle))` for a generator of norm
/// `eps >= 0` at angle `angle in [0, pi/2]`.
///
/// Returns `Speed::Unbounded` when the denominator vanishes with `eps > 0`,
/// and 0 when `eps = 0` (no generator, no motion).
pub fn qsl_speed(epsilon: f64, angle: f64) -> Result<Speed> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(CoreError::domain("epsilon", epsilon, 0.0, f64::INFINITY));
    }
    check_window("angle", angle, 0.0, FRAC_PI_2)?;
    if epsilon == 0.0 {
        return Ok(Speed::Finite(0.0));
    }
    if angle == 0.0 || angle == FRAC_PI_2 {
        return Ok(Speed::Unbounded);
    }
    Ok(Speed::Finite(epsilon / (angle.cos() * angle.sin())))
}

/// Energy norm under transitionless driving: `sqrt(eps_n^2 + cost_rate^2)`.
/// The cross terms vanish because the counterdiabatic field has no diagonal
/// matrix element in the tracked eigenstate.
pub fn tqd_energy_norm(level_energy: f64, cost_rate: f64) -> f64 {
    level_energy.hypot(cost_rate)
}

/// Maximal TQD speed: [`qsl_speed`] evaluated on the [`tqd_energy_norm`] of
/// the tracked level and the instantaneous cost rate.
pub fn tqd_speed(level_energy: f64, cost_rate: f64, angle: f64) -> Result<Speed> {
    qsl_speed(tqd_energy_norm(level_energy, cost_rate), angle)
}

/// A driving protocol, as seen by the QSL functionals: the tracked level
/// energy, the instantaneous cost rate, and the angle accumulated from the
/// initial state, all on `[0, tau]`.
pub trait Protocol: Sync {
    fn tau(&self) -> f64;

    /// Instantaneous eigenvalue of the tracked level.
    fn level_energy(&self, t: f64) -> Result<f64>;

    /// Instantaneous cost rate, the norm of the counterdiabatic field.
    fn cost_rate(&self, t: f64) -> Result<f64>;

    /// Angle between the initial and the instantaneous tracked eigenstate.
    fn angle(&self, t: f64) -> Result<f64>;

    /// Scalar control value, used for reporting.
    fn control(&self, t: f64) -> Result<f64>;

    /// Energy norm of the full (tracked + counterdiabatic) generator.
    fn epsilon(&self, t: f64) -> Result<f64> {
        Ok(tqd_energy_norm(self.level_energy(t)?, self.cost_rate(t)?))
    }

    /// Maximal TQD speed at `t`.
    fn speed(&self, t: f64) -> Result<Speed> {
        tqd_speed(self.level_energy(t)?, self.cost_rate(t)?, self.angle(t)?)
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// The estimate satisfies `error <= max(abs_tol, rel_tol * |estimate|)`; the
/// relative branch is anchored on the initial whole-interval estimate.
/// Exceeding [`MAX_QUAD_DEPTH`] yields a numeric error carrying the best
/// estimate and its error bound. Deterministic for fixed inputs.
pub fn adaptive_quadrature(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(CoreError::validation(
            "interval",
            format!("need finite a < b, got [{a}, {b}]"),
        ));
    }
    if !(abs_tol > 0.0) || !(rel_tol >= 0.0) {
        return Err(CoreError::validation(
            "tolerance",
            "abs_tol must be > 0 and rel_tol >= 0",
        ));
    }

    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    let tol = abs_tol.max(rel_tol * whole.abs());

    let (value, bound, converged) = refine(&f, a, m, b, fa, fm, fb, whole, tol, 0);
    if !converged {
        return Err(CoreError::QuadratureNonConvergence { best: value, bound });
    }
    Ok(value)
}

fn simpson(fa: f64, fm: f64, fb: f64, width: f64) -> f64 {
    width / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &impl Fn(f64) -> f64,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64, bool) {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;

    // Richardson-corrected acceptance test for composite Simpson.
    if delta.abs() <= 15.0 * tol {
        return (left + right + delta / 15.0, delta.abs() / 15.0, true);
    }
    if depth >= MAX_QUAD_DEPTH {
        return (left + right + delta / 15.0, delta.abs() / 15.0, false);
    }

    let (lv, le, lok) = refine(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1);
    let (rv, re, rok) = refine(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    (lv + rv, le + re, lok && rok)
}

/// Total driving cost `C = ∫ cost_rate dt` over the protocol window.
pub fn total_cost(p: &dyn Protocol, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    adaptive_quadrature(
        |t| p.cost_rate(t).expect("cost_rate defined on [0, tau]"),
        0.0,
        p.tau(),
        abs_tol,
        rel_tol,
    )
}

/// Time-averaged energy norm `E_tau = (1/tau) ∫ eps_t dt`.
pub fn time_averaged_energy(p: &dyn Protocol, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    let integral = adaptive_quadrature(
        |t| p.epsilon(t).expect("epsilon defined on [0, tau]"),
        0.0,
        p.tau(),
        abs_tol,
        rel_tol,
    )?;
    Ok(integral / p.tau())
}

/// QSL time `tau_qsl = tau sin^2(L_tau) / (2 ∫ eps_t dt)`.
///
/// Exactly 0 when the final angle vanishes (nothing to traverse); otherwise in
/// `(0, tau]` since the integrand dominates the bound.
pub fn qsl_time(p: &dyn Protocol, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    let final_angle = p.angle(p.tau())?;
    let sin_sq = final_angle.sin().powi(2);
    if sin_sq == 0.0 {
        return Ok(0.0);
    }
    let integral = adaptive_quadrature(
        |t| p.epsilon(t).expect("epsilon defined on [0, tau]"),
        0.0,
        p.tau(),
        abs_tol,
        rel_tol,
    )?;
    Ok(p.tau() * sin_sq / (2.0 * integral))
}

/// One grid point of a protocol report.
#[derive(Debug, Clone, Copy)]
pub struct SpeedSample {
    pub t: f64,
    pub control: f64,
    /// Energy norm `eps_t` of the full generator.
    pub epsilon: f64,
    /// Instantaneous cost rate.
    pub cost_rate: f64,
    /// Angle from the initial state, in `[0, pi/2]`.
    pub angle: f64,
    pub speed: Speed,
}

/// Per-grid record of a protocol plus its integrated summary quantities.
#[derive(Debug, Clone)]
pub struct ProtocolReport {
    pub samples: Vec<SpeedSample>,
    pub total_cost: f64,
    pub e_tau: f64,
    pub tau_qsl: f64,
    pub tau: f64,
}

/// Samples a protocol on a uniform grid of `grid_points >= 3` points over
/// `[0, tau]` and attaches total cost, time-averaged energy and QSL time.
pub fn protocol_report(
    p: &dyn Protocol,
    grid_points: usize,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<ProtocolReport> {
    if grid_points < 3 {
        return Err(CoreError::validation(
            "grid_points",
            format!("need at least 3, got {grid_points}"),
        ));
    }
    let tau = p.tau();
    let n = grid_points - 1;
    let samples = (0..=n)
        .map(|i| {
            // fraction first so the grid never overshoots tau by rounding
            let t = tau * (i as f64 / n as f64);
            Ok(SpeedSample {
                t,
                control: p.control(t)?,
                epsilon: p.epsilon(t)?,
                cost_rate: p.cost_rate(t)?,
                angle: p.angle(t)?,
                speed: p.speed(t)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProtocolReport {
        samples,
        total_cost: total_cost(p, abs_tol, rel_tol)?,
        e_tau: time_averaged_energy(p, abs_tol, rel_tol)?,
        tau_qsl: qsl_time(p, abs_tol, rel_tol)?,
        tau,
    })
}
