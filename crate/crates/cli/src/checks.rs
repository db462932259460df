//! Self-validation suite: generic-engine-vs-closed-form oracle checks and
//! propagator fidelity checks, with achieved-vs-required reporting.

use cdkit_core::counterdiabatic::{
    self, eigenstate_derivative_raw, lz_schedule, lz_tqd_schedule, oscillator_fock_cd,
};
use cdkit_core::landau_zener::{self, LZParams};
use cdkit_core::oscillator::{self, OscillatorParams};
use cdkit_core::propagator;
use cdkit_core::spectral::StateVector;

/// Outcome of one named check. `achieved` must stay at or below `required`
/// for a pass, except where noted in the detail line.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub achieved: f64,
    pub required: f64,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn bounded(name: &'static str, achieved: f64, required: f64, detail: String) -> Self {
        Check {
            name,
            achieved,
            required,
            pass: achieved.is_finite() && achieved <= required,
            detail,
        }
    }
}

fn fig2(delta: f64, tau: f64) -> LZParams {
    LZParams::new(delta, 0.2, -0.4, tau).expect("valid parameters")
}

fn interior_points(tau: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| tau * i as f64 / (n + 1) as f64).collect()
}

/// Oscillator oracle: the Fock-basis engine against the closed-form cost
/// rate and energy norm, on both case-study ramps.
fn check_oscillator_oracle(fd_factor: f64) -> Check {
    let required = 1e-5;
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for (label, omega_d) in [("compression", 4.0), ("expansion", -0.75)] {
        let p = OscillatorParams::new(1.0, omega_d, 1.0).expect("valid parameters");
        for t in interior_points(1.0, 12) {
            let r = match oscillator_fock_cd(&p, 60, t, fd_factor * 1.0) {
                Ok(r) => r,
                Err(e) => {
                    return Check {
                        name: "oscillator_fock_oracle",
                        achieved: f64::INFINITY,
                        required,
                        pass: false,
                        detail: format!("{label}: {e}"),
                    }
                }
            };
            let cost = oscillator::cost_rate(&p, t).expect("in window");
            let energy = oscillator::ground_energy(&p, t)
                .expect("in window")
                .hypot(cost);
            let err = ((r.cost_rate - cost) / cost)
                .abs()
                .max(((r.energy_norm - energy) / energy).abs());
            if err > worst {
                worst = err;
                detail = format!("worst at {label} t = {t:.3}");
            }
        }
    }
    Check::bounded("oscillator_fock_oracle", worst, required, detail)
}

/// Landau-Zener oracle: the finite-difference counterdiabatic field against
/// the closed form, elementwise.
fn check_lz_cd_term(fd_factor: f64) -> Check {
    let required = 1e-6;
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for delta in [0.001, 0.01] {
        for tau in [1.0, 1000.0] {
            let p = fig2(delta, tau);
            let schedule = lz_schedule(p);
            for t in interior_points(tau, 12) {
                let numeric =
                    match counterdiabatic::cd_hamiltonian(&schedule, t, 0, fd_factor * tau) {
                        Ok(h) => h,
                        Err(e) => {
                            return Check {
                                name: "lz_cd_term",
                                achieved: f64::INFINITY,
                                required,
                                pass: false,
                                detail: format!("delta {delta}, tau {tau}: {e}"),
                            }
                        }
                    };
                let exact = landau_zener::cd_term(&p, t).expect("in window");
                let mut err: f64 = 0.0;
                for i in 0..2 {
                    for j in 0..2 {
                        err = err.max((numeric.entry(i, j) - exact.entry(i, j)).norm());
                    }
                }
                if err > worst {
                    worst = err;
                    detail = format!("worst at delta = {delta}, tau = {tau}, t = {t:.3}");
                }
            }
        }
    }
    Check::bounded("lz_cd_term", worst, required, detail)
}

/// Stencil health: the raw central difference must behave as a second-order
/// formula, shrinking its increments about fourfold per step halving.
fn check_richardson_consistency(fd_factor: f64) -> Check {
    let p = fig2(0.01, 1.0);
    let schedule = lz_schedule(p);
    let h = fd_factor.max(1e-9);
    let norm_at = |step: f64| {
        eigenstate_derivative_raw(&schedule, 0.5, 0, step)
            .map(|d| d.norm())
            .unwrap_or(f64::NAN)
    };
    let n1 = norm_at(h);
    let n2 = norm_at(h / 2.0);
    let n3 = norm_at(h / 4.0);
    let c1 = (n1 - n2).abs();
    let c2 = (n2 - n3).abs();
    // second order: c2 close to c1 / 4; allow 50% slack
    let required = 0.375;
    let ratio = if c1 > 0.0 { c2 / c1 } else { 0.0 };
    Check::bounded(
        "richardson_consistency",
        ratio,
        required,
        format!("fd_step {h:.1e}: increments {c1:.3e} then {c2:.3e}"),
    )
}

/// The transitionless guarantee: driving with `H0 + H1` keeps the
/// instantaneous-ground-state infidelity at or below 1e-6 at every step.
fn check_tqd_fidelity() -> Check {
    let p = fig2(0.01, 1.0);
    let schedule = lz_tqd_schedule(p);
    let (g0, _) = landau_zener::ground_state(&p, 0.0).expect("in window");
    let psi0 = StateVector::unit(g0.amplitudes().clone()).expect("unit eigenvector");
    let result = propagator::propagate(&schedule, &psi0, 10_000)
        .and_then(|traj| propagator::min_instantaneous_fidelity(&traj, &lz_schedule(p), 0));
    match result {
        Ok(min_f) => Check::bounded(
            "tqd_fidelity",
            1.0 - min_f,
            1e-6,
            format!("min instantaneous fidelity {min_f:.9}"),
        ),
        Err(e) => Check {
            name: "tqd_fidelity",
            achieved: f64::INFINITY,
            required: 1e-6,
            pass: false,
            detail: e.to_string(),
        },
    }
}

/// Without the counterdiabatic field the same fast sweep must end far from
/// the instantaneous ground state.
fn check_bare_sweep_is_diabatic() -> Check {
    let p = fig2(0.01, 1.0);
    let schedule = lz_schedule(p);
    let (g0, _) = landau_zener::ground_state(&p, 0.0).expect("in window");
    let psi0 = StateVector::unit(g0.amplitudes().clone()).expect("unit eigenvector");
    let result = propagator::propagate(&schedule, &psi0, 10_000);
    match result {
        Ok(traj) => {
            let (target, _) = landau_zener::ground_state(&p, 1.0).expect("in window");
            let fidelity = target
                .inner(traj.states.last().expect("nonempty"))
                .expect("same dim")
                .norm_sqr();
            Check::bounded(
                "bare_sweep_diabatic",
                fidelity,
                0.5,
                format!("final ground-state fidelity {fidelity:.6}"),
            )
        }
        Err(e) => Check {
            name: "bare_sweep_diabatic",
            achieved: f64::INFINITY,
            required: 0.5,
            pass: false,
            detail: e.to_string(),
        },
    }
}

/// Runs the whole suite. `fd_step_override` replaces the default
/// finite-difference step factors when set (the oracle checks default to
/// 1e-6 of the duration, the stencil-order check to 1e-4).
pub fn run_all(fd_step_override: Option<f64>) -> Vec<Check> {
    let oracle_factor = fd_step_override.unwrap_or(1e-6);
    let richardson_factor = fd_step_override.unwrap_or(1e-4);
    vec![
        check_oscillator_oracle(oracle_factor),
        check_lz_cd_term(oracle_factor),
        check_richardson_consistency(richardson_factor),
        check_tqd_fidelity(),
        check_bare_sweep_is_diabatic(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_is_green() {
        for check in run_all(None) {
            assert!(
                check.pass,
                "{}: achieved {:e}, required {:e} ({})",
                check.name, check.achieved, check.required, check.detail
            );
        }
    }

    #[test]
    fn coarse_stencil_breaks_richardson_consistency() {
        let checks = run_all(Some(0.1));
        let richardson = checks
            .iter()
            .find(|c| c.name == "richardson_consistency")
            .unwrap();
        assert!(!richardson.pass, "expected {richardson:?} to fail");
    }
}
