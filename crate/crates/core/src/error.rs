//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by the numerical toolkit.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// An evaluation point fell outside the window on which a quantity is
    /// defined (controls and counterdiabatic fields only exist on `[0, tau]`).
    #[error("{name} = {value:e} outside [{min:e}, {max:e}]")]
    Domain {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// Invalid input that violates a structural precondition.
    #[error("invalid {name}: {reason}")]
    Validation { name: &'static str, reason: String },

    /// Operand dimensions disagree.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Two adjacent eigenvalues are closer than the degeneracy floor; tracking
    /// a single level through a crossing is ill-defined.
    #[error("near-degenerate spectrum: gap {gap:e} below adjacent level {level}")]
    Degeneracy { level: usize, gap: f64 },

    /// Adaptive quadrature hit its maximum depth before reaching the requested
    /// tolerance. The best estimate and its error bound are attached.
    #[error("quadrature did not converge: best estimate {best:e}, error bound {bound:e}")]
    QuadratureNonConvergence { best: f64, bound: f64 },

    /// A finite-difference stencil would leave the protocol window.
    #[error("stencil [{lo:e}, {hi:e}] leaves the protocol window [0, {tau:e}]")]
    Boundary { lo: f64, hi: f64, tau: f64 },

    /// Per-step norm drift of the propagator exceeded its limit.
    #[error("norm drift {drift:e} exceeds {limit:e}; increase the step count")]
    StepSize { drift: f64, limit: f64 },

    /// A trajectory and a schedule do not share a time grid.
    #[error("time grids do not match: {reason}")]
    GridMismatch { reason: String },

    /// The Fock truncation is too small for the requested state.
    #[error("truncated basis too small: ground-state amplitude {amplitude:e} on the top {levels} levels")]
    Truncation { amplitude: f64, levels: usize },
}

pub type Result<T> = std::result::Result<T, CoreError>;

impl CoreError {
    pub(crate) fn domain(name: &'static str, value: f64, min: f64, max: f64) -> Self {
        CoreError::Domain {
            name,
            value,
            min,
            max,
        }
    }

    pub(crate) fn validation(name: &'static str, reason: impl Into<String>) -> Self {
        CoreError::Validation {
            name,
            reason: reason.into(),
        }
    }
}

/// Checks `min <= value <= max`, mapping violations to [`CoreError::Domain`].
pub(crate) fn check_window(name: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
    if !value.is_finite() || value < min || value > max {
        return Err(CoreError::domain(name, value, min, max));
    }
    Ok(())
}
