//! Numerical toolkit for transitionless quantum driving (TQD): counterdiabatic
//! Hamiltonians, driving cost, quantum-speed-limit (QSL) speeds and times.
//!
//! The crate is organised around a small set of building blocks:
//!
//! * [`schedules`] — scalar control ramps with exact derivatives;
//! * [`spectral`] — dense complex Hermitian eigenproblems, state norms and the
//!   Bures-type angle between pure states;
//! * [`qsl`] — QSL speed and time, total driving cost, time-averaged energy,
//!   and the adaptive quadrature they rely on;
//! * [`oscillator`] — closed forms for the parametric harmonic oscillator;
//! * [`landau_zener`] — closed forms for the (rescaled) Landau-Zener crossing;
//! * [`counterdiabatic`] — generic counterdiabatic construction for any
//!   finite-dimensional Hermitian schedule, used as the independent oracle for
//!   the closed-form models;
//! * [`propagator`] — fixed-step Schrödinger integration to certify that
//!   driving with the counterdiabatic field tracks the adiabatic manifold.
//!
//! Natural units with `ħ = 1` are used throughout.

pub mod counterdiabatic;
pub mod error;
pub mod landau_zener;
pub mod oscillator;
pub mod propagator;
pub mod qsl;
pub mod schedules;
pub mod spectral;

pub use error::{CoreError, Result};
