//! Time-dependent scalar controls.
//!
//! Every formula downstream consumes both the control value and its time
//! derivative, so ramps carry exact analytic derivatives instead of relying on
//! interpolation.

use crate::error::{check_window, CoreError, Result};

/// Shape of a control schedule. Only linear ramps ship; the enum leaves room
/// for other protocol shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[non_exhaustive]
pub enum RampKind {
    Linear,
}

/// A scalar control schedule on the window `[0, tau]`.
///
/// For the linear kind the value is `start + delta * (t / tau)` exactly and
/// the derivative is the constant `delta / tau`. Evaluation outside the window
/// is an error rather than an extrapolation: the counterdiabatic field is only
/// defined while the protocol runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ramp {
    kind: RampKind,
    start: f64,
    delta: f64,
    tau: f64,
}

impl Ramp {
    /// Builds a linear ramp from `start` to `start + delta` over `tau`.
    pub fn linear(start: f64, delta: f64, tau: f64) -> Result<Self> {
        if !start.is_finite() || !delta.is_finite() {
            return Err(CoreError::validation("ramp", "start and delta must be finite"));
        }
        if !tau.is_finite() || tau <= 0.0 {
            return Err(CoreError::validation("ramp.tau", format!("duration must be > 0, got {tau}")));
        }
        Ok(Ramp {
            kind: RampKind::Linear,
            start,
            delta,
            tau,
        })
    }

    pub fn kind(&self) -> RampKind {
        self.kind
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Control value at `t in [0, tau]`.
    pub fn value(&self, t: f64) -> Result<f64> {
        check_window("t", t, 0.0, self.tau)?;
        match self.kind {
            RampKind::Linear => Ok(self.start + self.delta * (t / self.tau)),
        }
    }

    /// Exact time derivative at `t in [0, tau]`; constant for linear ramps.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        check_window("t", t, 0.0, self.tau)?;
        match self.kind {
            RampKind::Linear => Ok(self.delta / self.tau),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn value_endpoint() {
        let r = Ramp::linear(1.0, 4.0, 1.0).unwrap();
        assert_eq!(r.value(0.0).unwrap(), 1.0);
    }

    #[test]
    fn value_midpoint_compression_ramp() {
        // omega_0 = 1, omega_d = 4 at the midpoint
        let r = Ramp::linear(1.0, 4.0, 1.0).unwrap();
        assert_eq!(r.value(0.5).unwrap(), 3.0);
    }

    #[test]
    fn value_crosses_zero_at_half_time() {
        // g(t) = 0.2 - 0.4 t/tau crosses zero at t = tau/2
        let r = Ramp::linear(0.2, -0.4, 2.0).unwrap();
        assert_eq!(r.value(1.0).unwrap(), 0.0);
    }

    #[test]
    fn derivative_is_constant_slope() {
        let r = Ramp::linear(1.0, 4.0, 1.0).unwrap();
        for t in [0.0, 0.3, 1.0] {
            assert_eq!(r.derivative(t).unwrap(), 4.0);
        }
        let r = Ramp::linear(1.0, 4.0, 2.0).unwrap();
        assert_eq!(r.derivative(1.3).unwrap(), 2.0);
    }

    #[test]
    fn derivative_near_adiabatic_ramp() {
        let r = Ramp::linear(0.2, -0.4, 1000.0).unwrap();
        assert!((r.derivative(500.0).unwrap() - (-0.0004)).abs() < 1e-15);
    }

    #[test]
    fn evaluation_outside_window_is_an_error() {
        let r = Ramp::linear(1.0, 4.0, 1.0).unwrap();
        assert!(matches!(r.value(-0.1), Err(CoreError::Domain { .. })));
        assert!(matches!(r.value(1.0 + 1e-12), Err(CoreError::Domain { .. })));
        assert!(matches!(r.derivative(2.0), Err(CoreError::Domain { .. })));
        assert!(matches!(r.value(f64::NAN), Err(CoreError::Domain { .. })));
    }

    #[test]
    fn non_positive_duration_rejected() {
        assert!(Ramp::linear(1.0, 4.0, 0.0).is_err());
        assert!(Ramp::linear(1.0, 4.0, -1.0).is_err());
        assert!(Ramp::linear(f64::INFINITY, 4.0, 1.0).is_err());
    }

    #[test]
    fn finite_difference_matches_derivative() {
        let ramps = [
            Ramp::linear(1.0, 4.0, 1.0).unwrap(),
            Ramp::linear(1.0, -0.75, 2.0).unwrap(),
            Ramp::linear(0.2, -0.4, 1000.0).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for r in ramps {
            let h = 1e-6 * r.tau();
            for _ in 0..100 {
                let t = rng.gen_range(2.0 * h..r.tau() - 2.0 * h);
                let fd = (r.value(t + h).unwrap() - r.value(t - h).unwrap()) / (2.0 * h);
                assert!((fd - r.derivative(t).unwrap()).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn linearity_across_the_window() {
        for (s, d, tau) in [(1.0, 4.0, 1.0), (1.0, -0.75, 1.0), (0.2, -0.4, 1000.0)] {
            let r = Ramp::linear(s, d, tau).unwrap();
            assert_eq!(r.value(tau).unwrap() - r.value(0.0).unwrap(), d);
        }
    }
}
