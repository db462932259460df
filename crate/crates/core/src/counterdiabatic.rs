//! Generic counterdiabatic construction for any finite-dimensional Hermitian
//! schedule.
//!
//! The counterdiabatic field for a tracked level is
//! `H1 = i (|dn><n| - |n><dn|)` with `|dn>` the gauge-projected time
//! derivative of the instantaneous eigenstate. The derivative is built by a
//! central finite difference of numerically gauge-aligned eigenvectors plus
//! one Richardson extrapolation level, followed by exact projection that
//! removes the `|n>` component and so enforces `<n|dn> = 0`.
//!
//! This module is the independent numerical route against which the
//! closed-form oscillator and Landau-Zener expressions are validated.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::landau_zener::{self, LZParams};
use crate::oscillator::OscillatorParams;
use crate::qsl::{self, Protocol, Speed};
use crate::spectral::{eigensystem_hermitian, HermitianOperator, StateVector};

/// Default finite-difference step, as a fraction of the protocol duration.
/// Balances stencil truncation against cancellation for operator norms up to
/// around 1e3.
pub const DEFAULT_FD_STEP_FACTOR: f64 = 1e-6;

/// A time-dependent Hermitian operator on `[0, tau]` with constant dimension.
pub struct HamiltonianSchedule {
    dim: usize,
    tau: f64,
    f: Box<dyn Fn(f64) -> HermitianOperator + Send + Sync>,
}

impl std::fmt::Debug for HamiltonianSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HamiltonianSchedule")
            .field("dim", &self.dim)
            .field("tau", &self.tau)
            .finish_non_exhaustive()
    }
}

impl HamiltonianSchedule {
    pub fn new(
        dim: usize,
        tau: f64,
        f: impl Fn(f64) -> HermitianOperator + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(CoreError::validation(
                "schedule",
                format!("dimension must be >= 2, got {dim}"),
            ));
        }
        if !tau.is_finite() || tau <= 0.0 {
            return Err(CoreError::validation(
                "schedule.tau",
                format!("duration must be > 0, got {tau}"),
            ));
        }
        Ok(HamiltonianSchedule {
            dim,
            tau,
            f: Box::new(f),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// The operator at `t in [0, tau]`.
    pub fn evaluate(&self, t: f64) -> Result<HermitianOperator> {
        crate::error::check_window("t", t, 0.0, self.tau)?;
        let h = (self.f)(t);
        if h.dim() != self.dim {
            return Err(CoreError::DimensionMismatch {
                left: h.dim(),
                right: self.dim,
            });
        }
        Ok(h)
    }
}

/// Counterdiabatic data for one tracked level at one instant.
#[derive(Debug, Clone)]
pub struct CdResult {
    /// The counterdiabatic field `H1`.
    pub h1: HermitianOperator,
    /// Gauge-projected eigenstate derivative (not unit-norm).
    pub eigenstate_derivative: StateVector,
    /// `||H1|| = ||dn||`, the instantaneous cost rate.
    pub cost_rate: f64,
    /// `sqrt(eps_level^2 + ||dn||^2)`, the TQD energy norm.
    pub energy_norm: f64,
}

fn level_vector(s: &HamiltonianSchedule, t: f64, level: usize) -> Result<(StateVector, f64)> {
    let es = eigensystem_hermitian(&s.evaluate(t)?)?;
    if level >= es.eigenvalues.len() {
        return Err(CoreError::validation(
            "level",
            format!("level {level} out of range for dimension {}", s.dim()),
        ));
    }
    Ok((es.eigenvectors[level].clone(), es.eigenvalues[level]))
}

/// Multiplies `v` by the phase that makes `<reference|v>` real and positive,
/// removing the free gauge phase relative to the reference vector.
fn align_phase(reference: &StateVector, v: &StateVector) -> Result<DVector<Complex64>> {
    let overlap = reference.inner(v)?;
    if overlap.norm() == 0.0 {
        return Err(CoreError::validation(
            "gauge",
            "endpoint eigenvector is orthogonal to the center one; the stencil straddles a crossing",
        ));
    }
    let phase = overlap.conj() / Complex64::from(overlap.norm());
    Ok(v.amplitudes().map(|z| z * phase))
}

fn check_stencil(s: &HamiltonianSchedule, t: f64, fd_step: f64) -> Result<()> {
    if !fd_step.is_finite() || fd_step <= 0.0 {
        return Err(CoreError::validation(
            "fd_step",
            format!("must be > 0, got {fd_step}"),
        ));
    }
    if t - fd_step <= 0.0 || t + fd_step >= s.tau() {
        return Err(CoreError::Boundary {
            lo: t - fd_step,
            hi: t + fd_step,
            tau: s.tau(),
        });
    }
    Ok(())
}

fn central_difference(
    s: &HamiltonianSchedule,
    t: f64,
    level: usize,
    fd_step: f64,
    center: &StateVector,
) -> Result<DVector<Complex64>> {
    check_stencil(s, t, fd_step)?;
    let (plus, _) = level_vector(s, t + fd_step, level)?;
    let (minus, _) = level_vector(s, t - fd_step, level)?;
    let aligned_plus = align_phase(center, &plus)?;
    let aligned_minus = align_phase(center, &minus)?;
    Ok((aligned_plus - aligned_minus) / Complex64::from(2.0 * fd_step))
}

/// Plain second-order central difference of the tracked eigenvector at `t`,
/// with both endpoints phase-aligned to the center eigenvector. No projection
/// and no extrapolation; building block for [`eigenstate_derivative`] and the
/// stencil-order diagnostics.
pub fn eigenstate_derivative_raw(
    s: &HamiltonianSchedule,
    t: f64,
    level: usize,
    fd_step: f64,
) -> Result<StateVector> {
    let (center, _) = level_vector(s, t, level)?;
    Ok(StateVector::raw(central_difference(
        s, t, level, fd_step, &center,
    )?))
}

fn project_out(v: &DVector<Complex64>, direction: &StateVector) -> DVector<Complex64> {
    let overlap = direction.amplitudes().dotc(v);
    // overlaps at the roundoff floor are pure noise from the subtraction
    // itself; skipping them makes the projection exactly idempotent
    if overlap.norm() <= 64.0 * f64::EPSILON * v.norm() {
        return v.clone();
    }
    v - direction.amplitudes() * overlap
}

fn derivative_about(
    s: &HamiltonianSchedule,
    t: f64,
    level: usize,
    fd_step: f64,
    center: &StateVector,
) -> Result<StateVector> {
    let coarse = central_difference(s, t, level, fd_step, center)?;
    let fine = central_difference(s, t, level, fd_step / 2.0, center)?;
    let extrapolated = (fine * Complex64::from(4.0) - coarse) / Complex64::from(3.0);
    Ok(StateVector::raw(project_out(&extrapolated, center)))
}

/// Gauge-projected eigenstate derivative `|dn>`: one Richardson extrapolation
/// level over the raw central difference, then exact projection removing the
/// `|n>` component.
pub fn eigenstate_derivative(
    s: &HamiltonianSchedule,
    t: f64,
    level: usize,
    fd_step: f64,
) -> Result<StateVector> {
    let (center, _) = level_vector(s, t, level)?;
    derivative_about(s, t, level, fd_step, &center)
}

/// The counterdiabatic field `H1 = i (|dn><n| - |n><dn|)` for the tracked
/// level; Hermitian by construction and satisfying `H1 |n> = i |dn>`.
pub fn cd_hamiltonian(
    s: &HamiltonianSchedule,
    t: f64,
    level: usize,
    fd_step: f64,
) -> Result<HermitianOperator> {
    let (n, _) = level_vector(s, t, level)?;
    let dn = derivative_about(s, t, level, fd_step, &n)?;
    cd_from_parts(&n, &dn)
}

fn cd_from_parts(n: &StateVector, dn: &StateVector) -> Result<HermitianOperator> {
    let dim = n.dim();
    let i = Complex64::new(0.0, 1.0);
    let m = DMatrix::from_fn(dim, dim, |r, c| {
        i * (dn.amplitudes()[r] * n.amplitudes()[c].conj()
            - n.amplitudes()[r] * dn.amplitudes()[c].conj())
    });
    HermitianOperator::new(m)
}

/// TQD energy norm `sqrt(eps_level^2 + <dn|dn>)` from the generic engine.
pub fn energy_norm(s: &HamiltonianSchedule, t: f64, level: usize, fd_step: f64) -> Result<f64> {
    Ok(cd_result(s, t, level, fd_step)?.energy_norm)
}

/// One-stop evaluation of the counterdiabatic field, derivative, cost rate
/// and energy norm at `t`.
pub fn cd_result(s: &HamiltonianSchedule, t: f64, level: usize, fd_step: f64) -> Result<CdResult> {
    let (n, energy) = level_vector(s, t, level)?;
    let dn = derivative_about(s, t, level, fd_step, &n)?;
    let h1 = cd_from_parts(&n, &dn)?;
    let cost_rate = dn.norm();
    Ok(CdResult {
        h1,
        eigenstate_derivative: dn,
        cost_rate,
        energy_norm: energy.hypot(cost_rate),
    })
}

/// The bare Landau-Zener schedule `H0(t)` in the frame selected by `p`.
pub fn lz_schedule(p: LZParams) -> HamiltonianSchedule {
    HamiltonianSchedule::new(2, p.tau(), move |t| {
        landau_zener::hamiltonian(&p, t).expect("t within the protocol window")
    })
    .expect("LZ parameters already validated")
}

/// The transitionless Landau-Zener schedule `H0(t) + H1(t)` built from the
/// closed-form counterdiabatic term.
pub fn lz_tqd_schedule(p: LZParams) -> HamiltonianSchedule {
    HamiltonianSchedule::new(2, p.tau(), move |t| {
        landau_zener::tqd_hamiltonian(&p, t).expect("t within the protocol window")
    })
    .expect("LZ parameters already validated")
}

/// Oscillator Hamiltonian `p^2/2m + m omega_t^2 x^2 / 2` in a number basis of
/// `n_trunc` levels built at the fixed reference frequency `omega_ref`.
///
/// With ladder operators of the reference oscillator the matrix is real
/// pentadiagonal: diagonal `(omega_ref^2 + omega^2) (2k+1) / (4 omega_ref)`
/// and `(k, k+2)` entries `(omega^2 - omega_ref^2) sqrt((k+1)(k+2)) /
/// (4 omega_ref)`. The mass cancels identically.
pub fn oscillator_fock_schedule(
    p: OscillatorParams,
    n_trunc: usize,
    omega_ref: f64,
) -> Result<HamiltonianSchedule> {
    if n_trunc < 40 {
        return Err(CoreError::validation(
            "n_trunc",
            format!("need at least 40 basis levels, got {n_trunc}"),
        ));
    }
    if !omega_ref.is_finite() || omega_ref <= 0.0 {
        return Err(CoreError::validation(
            "omega_ref",
            format!("reference frequency must be > 0, got {omega_ref}"),
        ));
    }
    HamiltonianSchedule::new(n_trunc, p.tau(), move |t| {
        let omega = p.frequency(t).expect("t within the protocol window");
        fock_matrix(omega, omega_ref, n_trunc)
    })
}

fn fock_matrix(omega: f64, omega_ref: f64, n_trunc: usize) -> HermitianOperator {
    let diag = (omega_ref * omega_ref + omega * omega) / (4.0 * omega_ref);
    let off = (omega * omega - omega_ref * omega_ref) / (4.0 * omega_ref);
    let mut m = DMatrix::zeros(n_trunc, n_trunc);
    for k in 0..n_trunc {
        m[(k, k)] = Complex64::from(diag * (2 * k + 1) as f64);
        if k + 2 < n_trunc {
            let v = Complex64::from(off * (((k + 1) * (k + 2)) as f64).sqrt());
            m[(k, k + 2)] = v;
            m[(k + 2, k)] = v;
        }
    }
    HermitianOperator::new(m).expect("Fock matrix is real symmetric")
}

/// Oscillator Hamiltonian in a number basis referenced to the instantaneous
/// frequency `omega_t`, so the ground state at `t` is the bare vacuum.
pub fn build_oscillator_fock(
    p: &OscillatorParams,
    n_trunc: usize,
    t: f64,
) -> Result<HermitianOperator> {
    let omega_ref = p.frequency(t)?;
    oscillator_fock_schedule(*p, n_trunc, omega_ref)?.evaluate(t)
}

/// Largest ground-state amplitude on the top `levels` basis states; the
/// truncation stress indicator for Fock-basis runs.
pub fn fock_truncation_amplitude(h: &HermitianOperator, levels: usize) -> Result<f64> {
    let es = eigensystem_hermitian(h)?;
    let ground = &es.eigenvectors[0];
    let dim = ground.dim();
    let lo = dim.saturating_sub(levels);
    Ok((lo..dim)
        .map(|k| ground.amplitudes()[k].norm())
        .fold(0.0, f64::max))
}

/// Counterdiabatic data for the oscillator at `t`, computed in a Fock basis
/// referenced to `omega_t` (rebuilt per evaluation time, which keeps the
/// truncation error flat along the protocol). Errors out if the ground state
/// leaks onto the top 5 basis levels beyond 1e-10.
pub fn oscillator_fock_cd(
    p: &OscillatorParams,
    n_trunc: usize,
    t: f64,
    fd_step: f64,
) -> Result<CdResult> {
    let omega_ref = p.frequency(t)?;
    let schedule = oscillator_fock_schedule(*p, n_trunc, omega_ref)?;
    let amplitude = fock_truncation_amplitude(&schedule.evaluate(t)?, 5)?;
    if amplitude > 1e-10 {
        return Err(CoreError::Truncation {
            amplitude,
            levels: 5,
        });
    }
    cd_result(&schedule, t, 0, fd_step)
}

/// A [`Protocol`] driven entirely by the generic engine: level energies and
/// cost rates from eigen-decompositions and finite differences, the angle
/// from eigenvector overlaps against the initial state.
///
/// Near the window edges the stencil is shifted inward so that reports can
/// still cover `[0, tau]`; the shift is bounded by the step itself.
pub struct ScheduleProtocol {
    schedule: HamiltonianSchedule,
    level: usize,
    fd_step: f64,
    initial: StateVector,
}

impl ScheduleProtocol {
    pub fn new(schedule: HamiltonianSchedule, level: usize, fd_step: f64) -> Result<Self> {
        if !fd_step.is_finite() || fd_step <= 0.0 || 2.0 * fd_step >= schedule.tau() {
            return Err(CoreError::validation(
                "fd_step",
                format!("must be in (0, tau/2), got {fd_step}"),
            ));
        }
        let (initial, _) = level_vector(&schedule, 0.0, level)?;
        Ok(ScheduleProtocol {
            schedule,
            level,
            fd_step,
            initial,
        })
    }

    pub fn schedule(&self) -> &HamiltonianSchedule {
        &self.schedule
    }

    fn interior(&self, t: f64) -> f64 {
        t.clamp(self.fd_step * 1.0001, self.schedule.tau() - self.fd_step * 1.0001)
    }
}

impl Protocol for ScheduleProtocol {
    fn tau(&self) -> f64 {
        self.schedule.tau()
    }

    fn level_energy(&self, t: f64) -> Result<f64> {
        Ok(level_vector(&self.schedule, t, self.level)?.1)
    }

    fn cost_rate(&self, t: f64) -> Result<f64> {
        crate::error::check_window("t", t, 0.0, self.schedule.tau())?;
        Ok(
            eigenstate_derivative(&self.schedule, self.interior(t), self.level, self.fd_step)?
                .norm(),
        )
    }

    fn angle(&self, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        let (n_t, _) = level_vector(&self.schedule, t, self.level)?;
        let overlap = self.initial.inner(&n_t)?.norm().clamp(0.0, 1.0);
        Ok(overlap.acos())
    }

    fn control(&self, _t: f64) -> Result<f64> {
        // no scalar control knob for a generic schedule
        Ok(f64::NAN)
    }

    fn speed(&self, t: f64) -> Result<Speed> {
        qsl::tqd_speed(self.level_energy(t)?, self.cost_rate(t)?, self.angle(t)?)
    }
}
