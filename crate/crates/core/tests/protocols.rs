//! Cross-module protocol behavior: QSL times, total costs and averaged
//! energies for the two case studies, plus the generic-engine protocol
//! adapter.

use approx::assert_abs_diff_eq;
use cdkit_core::counterdiabatic::{lz_schedule, ScheduleProtocol};
use cdkit_core::landau_zener::LZParams;
use cdkit_core::oscillator::OscillatorParams;
use cdkit_core::qsl;

const ABS_TOL: f64 = 1e-10;
const REL_TOL: f64 = 1e-8;

fn compression(tau: f64) -> OscillatorParams {
    OscillatorParams::new(1.0, 4.0, tau).unwrap()
}

fn expansion(tau: f64) -> OscillatorParams {
    OscillatorParams::new(1.0, -0.75, tau).unwrap()
}

fn fig2(delta: f64, tau: f64) -> LZParams {
    LZParams::new(delta, 0.2, -0.4, tau).unwrap()
}

#[test]
fn compression_qsl_time_grows_with_duration() {
    let mut last = 0.0;
    for tau in [0.5, 1.0, 2.0] {
        let t_qsl = qsl::qsl_time(&compression(tau), ABS_TOL, REL_TOL).unwrap();
        assert!(t_qsl > last, "tau = {tau}: {t_qsl} not above {last}");
        assert!(t_qsl <= tau);
        last = t_qsl;
    }
}

#[test]
fn qsl_times_match_independent_quadrature() {
    // frozen from an independent adaptive quadrature of the closed-form
    // integrand at tolerance 1e-13
    let cases = [
        (compression(0.5), 0.062903),
        (compression(1.0), 0.075940),
        (compression(2.0), 0.081981),
        (expansion(0.5), 0.095089),
        (expansion(1.0), 0.163767),
        (expansion(2.0), 0.237486),
    ];
    for (p, expected) in cases {
        let t_qsl = qsl::qsl_time(&p, ABS_TOL, REL_TOL).unwrap();
        assert_abs_diff_eq!(t_qsl, expected, epsilon = 1e-6);
    }
}

#[test]
fn expansion_needs_more_time_than_compression() {
    for tau in [0.5, 1.0, 2.0] {
        let comp = qsl::qsl_time(&compression(tau), ABS_TOL, REL_TOL).unwrap();
        let exp = qsl::qsl_time(&expansion(tau), ABS_TOL, REL_TOL).unwrap();
        assert!(exp > comp, "tau = {tau}: expansion {exp} vs compression {comp}");
    }
}

#[test]
fn oscillator_total_cost_is_duration_independent() {
    let expected_compression = 5.0_f64.ln() / 8.0_f64.sqrt();
    let expected_expansion = 0.25_f64.ln().abs() / 8.0_f64.sqrt();
    let mut costs = Vec::new();
    for tau in [0.5, 1.0, 2.0] {
        let c = qsl::total_cost(&compression(tau), ABS_TOL, REL_TOL).unwrap();
        assert_abs_diff_eq!(c, expected_compression, epsilon = 1e-8);
        costs.push(c);
        let e = qsl::total_cost(&expansion(tau), ABS_TOL, REL_TOL).unwrap();
        assert_abs_diff_eq!(e, expected_expansion, epsilon = 1e-8);
    }
    assert!((costs[0] - costs[2]).abs() <= 1e-8);
}

#[test]
fn static_oscillator_has_ground_energy_average() {
    let p = OscillatorParams::new(1.0, 0.0, 1.0).unwrap();
    assert_abs_diff_eq!(
        qsl::time_averaged_energy(&p, ABS_TOL, REL_TOL).unwrap(),
        0.5,
        epsilon = 1e-10
    );
    assert_eq!(qsl::total_cost(&p, ABS_TOL, REL_TOL).unwrap(), 0.0);
}

#[test]
fn lz_averaged_energy_regression() {
    // frozen output of the adaptive quadrature at tolerance 1e-10;
    // cross-checked against an independent integrator at 1e-13
    let p = fig2(0.01, 1.0);
    let e_tau = qsl::time_averaged_energy(&p, ABS_TOL, REL_TOL).unwrap();
    assert_abs_diff_eq!(e_tau, 11.168640872468629, epsilon = 1e-7);
}

#[test]
fn qsl_time_below_duration_for_all_protocols() {
    let tols = (ABS_TOL, REL_TOL);
    for tau in [0.5, 1.0, 2.0] {
        for p in [compression(tau), expansion(tau)] {
            let t = qsl::qsl_time(&p, tols.0, tols.1).unwrap();
            assert!(t <= tau && t > 0.0);
        }
    }
    for delta in [0.001, 0.01] {
        for tau in [1.0, 1000.0] {
            let p = fig2(delta, tau);
            let t = qsl::qsl_time(&p, tols.0, tols.1).unwrap();
            assert!(t <= tau && t > 0.0);
        }
    }
}

#[test]
fn near_adiabatic_lz_report_dips_at_the_crossing() {
    let p = fig2(0.001, 1000.0);
    let report = qsl::protocol_report(&p, 1001, ABS_TOL, REL_TOL).unwrap();
    assert_eq!(report.samples.len(), 1001);
    let argmin = report
        .samples
        .iter()
        .enumerate()
        .filter_map(|(i, s)| s.speed.finite().map(|v| (i, v)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap()
        .0;
    assert_eq!(argmin, 500);
    assert!(report.tau_qsl <= report.tau);
}

#[test]
fn fast_lz_report_has_finite_interior_and_unbounded_start() {
    let p = fig2(0.01, 1.0);
    let report = qsl::protocol_report(&p, 101, ABS_TOL, REL_TOL).unwrap();
    assert!(report.samples[0].speed.is_unbounded());
    assert!(report.samples[1..].iter().all(|s| !s.speed.is_unbounded()));
    assert!(report.samples.iter().all(|s| s.cost_rate >= 0.0));
    assert!(report
        .samples
        .iter()
        .all(|s| (0.0..=std::f64::consts::FRAC_PI_2).contains(&s.angle)));
}

#[test]
fn schedule_protocol_report_matches_closed_form_lz() {
    // the generic-engine adapter reproduces the closed-form protocol numbers
    let p = fig2(0.01, 1.0);
    let generic = ScheduleProtocol::new(lz_schedule(p), 0, 1e-6).unwrap();
    let direct = qsl::protocol_report(&p, 51, ABS_TOL, REL_TOL).unwrap();
    let via_engine = qsl::protocol_report(&generic, 51, 1e-8, 1e-7).unwrap();
    assert_abs_diff_eq!(direct.total_cost, via_engine.total_cost, epsilon = 1e-5);
    assert_abs_diff_eq!(direct.e_tau, via_engine.e_tau, epsilon = 1e-4);
    assert_abs_diff_eq!(direct.tau_qsl, via_engine.tau_qsl, epsilon = 1e-6);
    for (a, b) in direct.samples.iter().zip(&via_engine.samples).skip(1) {
        assert_abs_diff_eq!(a.cost_rate, b.cost_rate, epsilon = 1e-5);
        assert_abs_diff_eq!(a.angle, b.angle, epsilon = 1e-8);
    }
}
