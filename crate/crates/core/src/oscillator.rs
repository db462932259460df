//! Parametric harmonic oscillator driven through a linear frequency ramp,
//! tracked in its instantaneous ground state.
//!
//! Everything here is closed form: the cost of keeping the oscillator in its
//! ground state is `|d omega / dt| / (sqrt(8) omega_t)`, the ground energy is
//! `omega_t / 2`, and the angle from the initial ground state is
//! `arccos( sqrt( 2 sqrt(omega_0 omega_t) / (omega_0 + omega_t) ) )`.
//! None of these depend on the mass.

use crate::error::{CoreError, Result};
use crate::qsl::{self, Protocol, Speed};
use crate::schedules::Ramp;

const SQRT_8: f64 = 2.8284271247461903;

/// Parameters of the frequency ramp `omega_t = omega0 + omega_d t / tau`.
#[derive(Debug, Clone, Copy)]
pub struct OscillatorParams {
    omega0: f64,
    omega_d: f64,
    mass: f64,
    ramp: Ramp,
}

impl OscillatorParams {
    /// Unit-mass oscillator; the frequency must stay strictly positive over
    /// the whole window, which for a linear ramp means both endpoints.
    pub fn new(omega0: f64, omega_d: f64, tau: f64) -> Result<Self> {
        Self::with_mass(omega0, omega_d, 1.0, tau)
    }

    pub fn with_mass(omega0: f64, omega_d: f64, mass: f64, tau: f64) -> Result<Self> {
        if !omega0.is_finite() || omega0 <= 0.0 {
            return Err(CoreError::validation(
                "oscillator.omega0",
                format!("initial frequency must be > 0, got {omega0}"),
            ));
        }
        if !omega_d.is_finite() || omega0 + omega_d <= 0.0 {
            return Err(CoreError::validation(
                "oscillator.omega_d",
                format!(
                    "final frequency omega0 + omega_d must be > 0, got {}",
                    omega0 + omega_d
                ),
            ));
        }
        if !mass.is_finite() || mass <= 0.0 {
            return Err(CoreError::validation(
                "oscillator.mass",
                format!("mass must be > 0, got {mass}"),
            ));
        }
        let ramp = Ramp::linear(omega0, omega_d, tau)?;
        Ok(OscillatorParams {
            omega0,
            omega_d,
            mass,
            ramp,
        })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega_d(&self) -> f64 {
        self.omega_d
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn tau(&self) -> f64 {
        self.ramp.tau()
    }

    /// Instantaneous angular frequency.
    pub fn frequency(&self, t: f64) -> Result<f64> {
        self.ramp.value(t)
    }

    /// Exact frequency slope `omega_d / tau`.
    pub fn frequency_derivative(&self, t: f64) -> Result<f64> {
        self.ramp.derivative(t)
    }
}

/// Instantaneous cost rate `|d omega/dt| / (sqrt(8) omega_t)`; the norm of the
/// squeezing-type counterdiabatic term for the ground state.
pub fn cost_rate(p: &OscillatorParams, t: f64) -> Result<f64> {
    let omega = p.frequency(t)?;
    Ok((p.frequency_derivative(t)? / (SQRT_8 * omega)).abs())
}

/// Ground-state energy `omega_t / 2`.
pub fn ground_energy(p: &OscillatorParams, t: f64) -> Result<f64> {
    Ok(p.frequency(t)? / 2.0)
}

/// Angle between the initial and the instantaneous ground state.
///
/// Zero exactly when the frequencies coincide; always below pi/2 since two
/// Gaussians never become orthogonal.
pub fn angle(p: &OscillatorParams, t: f64) -> Result<f64> {
    let omega = p.frequency(t)?;
    if omega == p.omega0 {
        return Ok(0.0);
    }
    let overlap_sq = 2.0 * (p.omega0 * omega).sqrt() / (p.omega0 + omega);
    Ok(overlap_sq.sqrt().clamp(0.0, 1.0).acos())
}

/// Maximal TQD speed `sqrt((omega_t/2)^2 + cost_rate^2) / (cos L sin L)`.
/// Unbounded at `t = 0` where the angle vanishes.
pub fn speed(p: &OscillatorParams, t: f64) -> Result<Speed> {
    qsl::tqd_speed(ground_energy(p, t)?, cost_rate(p, t)?, angle(p, t)?)
}

impl Protocol for OscillatorParams {
    fn tau(&self) -> f64 {
        OscillatorParams::tau(self)
    }

    fn level_energy(&self, t: f64) -> Result<f64> {
        ground_energy(self, t)
    }

    fn cost_rate(&self, t: f64) -> Result<f64> {
        cost_rate(self, t)
    }

    fn angle(&self, t: f64) -> Result<f64> {
        angle(self, t)
    }

    fn control(&self, t: f64) -> Result<f64> {
        self.frequency(t)
    }
}
