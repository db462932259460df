//! Small dense complex Hermitian linear algebra: eigen-decomposition, state
//! norms of operators, and the Bures-type angle between pure states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Absolute tolerance for the Hermiticity check on construction.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Minimum allowed gap between adjacent eigenvalues. Every downstream formula
/// divides by gap-dependent quantities, so degenerate spectra are a hard error.
pub const DEGENERACY_FLOOR: f64 = 1e-12;

const UNIT_NORM_TOL: f64 = 1e-8;

/// A dense complex Hermitian matrix of dimension >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    m: DMatrix<Complex64>,
}

impl HermitianOperator {
    /// Validates Hermiticity (to [`HERMITICITY_TOL`] absolute) and wraps the
    /// matrix.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(CoreError::DimensionMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        let n = m.nrows();
        if n < 2 {
            return Err(CoreError::validation(
                "operator",
                format!("dimension must be >= 2, got {n}"),
            ));
        }
        for i in 0..n {
            for j in i..n {
                let d = m[(i, j)] - m[(j, i)].conj();
                if d.norm() > HERMITICITY_TOL {
                    return Err(CoreError::validation(
                        "operator",
                        format!("not Hermitian at ({i}, {j}): residual {:e}", d.norm()),
                    ));
                }
            }
        }
        Ok(HermitianOperator { m })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    /// `self + other`, checked for matching dimension. Exact Hermiticity is
    /// preserved by entrywise addition.
    pub fn add(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        if self.dim() != other.dim() {
            return Err(CoreError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(HermitianOperator {
            m: &self.m + &other.m,
        })
    }

    /// Scales by a real factor (keeps Hermiticity exactly).
    pub fn scaled(&self, factor: f64) -> HermitianOperator {
        HermitianOperator {
            m: self.m.map(|z| z * factor),
        }
    }

    /// Frobenius norm; used as a cheap upper-bound proxy for the spectral
    /// norm when sizing integrator steps.
    pub fn frobenius_norm(&self) -> f64 {
        self.m.norm()
    }

    /// Applies the operator to a state, returning the raw image vector.
    pub fn apply(&self, psi: &StateVector) -> Result<DVector<Complex64>> {
        if self.dim() != psi.dim() {
            return Err(CoreError::DimensionMismatch {
                left: self.dim(),
                right: psi.dim(),
            });
        }
        Ok(&self.m * psi.amplitudes())
    }
}

/// Pauli x matrix.
pub fn pauli_x() -> HermitianOperator {
    let z = Complex64::new;
    HermitianOperator::new(DMatrix::from_row_slice(
        2,
        2,
        &[z(0.0, 0.0), z(1.0, 0.0), z(1.0, 0.0), z(0.0, 0.0)],
    ))
    .expect("pauli_x is Hermitian")
}

/// Pauli y matrix.
pub fn pauli_y() -> HermitianOperator {
    let z = Complex64::new;
    HermitianOperator::new(DMatrix::from_row_slice(
        2,
        2,
        &[z(0.0, 0.0), z(0.0, -1.0), z(0.0, 1.0), z(0.0, 0.0)],
    ))
    .expect("pauli_y is Hermitian")
}

/// Pauli z matrix.
pub fn pauli_z() -> HermitianOperator {
    let z = Complex64::new;
    HermitianOperator::new(DMatrix::from_row_slice(
        2,
        2,
        &[z(1.0, 0.0), z(0.0, 0.0), z(0.0, 0.0), z(-1.0, 0.0)],
    ))
    .expect("pauli_z is Hermitian")
}

/// A complex state vector. Unit norm is required wherever a vector stands for
/// a physical pure state; eigenstate time-derivatives are carried by the same
/// type without the norm constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    v: DVector<Complex64>,
}

impl StateVector {
    /// Wraps a vector that must already be unit-norm (to `1e-8`).
    pub fn unit(v: DVector<Complex64>) -> Result<Self> {
        let n = v.norm();
        if (n - 1.0).abs() > UNIT_NORM_TOL {
            return Err(CoreError::validation(
                "state",
                format!("norm {n:e} is not 1"),
            ));
        }
        Ok(StateVector { v })
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(v: DVector<Complex64>) -> Result<Self> {
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(CoreError::validation("state", "cannot normalize, norm is 0 or not finite"));
        }
        Ok(StateVector { v: v / Complex64::from(n) })
    }

    /// Wraps a vector without any norm constraint (derivative vectors).
    pub fn raw(v: DVector<Complex64>) -> Self {
        StateVector { v }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.v
    }

    pub fn norm(&self) -> f64 {
        self.v.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(CoreError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self.v.dotc(&other.v))
    }

    fn check_unit(&self, name: &'static str) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > UNIT_NORM_TOL {
            return Err(CoreError::validation(name, format!("norm {n:e} is not 1")));
        }
        Ok(())
    }
}

/// Instantaneous eigenvalues (ascending) and the matching orthonormal,
/// gauge-fixed eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
}

/// Multiplies the vector by the phase that makes its largest-magnitude
/// component real and positive. Ties keep the earliest index, so the gauge is
/// deterministic. Zero vectors are left untouched.
pub fn gauge_fix(v: &mut DVector<Complex64>) {
    let mut best = 0usize;
    let mut best_sq = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let sq = z.norm_sqr();
        if sq > best_sq {
            best_sq = sq;
            best = i;
        }
    }
    if best_sq == 0.0 {
        return;
    }
    let pivot = v[best];
    let phase = pivot.conj() / Complex64::from(pivot.norm());
    for z in v.iter_mut() {
        *z *= phase;
    }
}

/// Full eigen-decomposition of a Hermitian operator.
///
/// Eigenvalues come out ascending; each eigenvector is gauge-fixed so its
/// largest-magnitude component is real and positive. Spectra with an adjacent
/// gap below [`DEGENERACY_FLOOR`] are rejected: tracking a single level
/// through a crossing is ill-defined.
pub fn eigensystem_hermitian(h: &HermitianOperator) -> Result<EigenSystem> {
    let se = h.matrix().clone().symmetric_eigen();
    let n = h.dim();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[a]
            .partial_cmp(&se.eigenvalues[b])
            .expect("Hermitian eigenvalues are finite")
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    for (k, pair) in eigenvalues.windows(2).enumerate() {
        let gap = pair[1] - pair[0];
        if gap < DEGENERACY_FLOOR {
            return Err(CoreError::Degeneracy { level: k, gap });
        }
    }

    let eigenvectors = order
        .iter()
        .map(|&i| {
            let mut v: DVector<Complex64> = se.eigenvectors.column(i).into_owned();
            gauge_fix(&mut v);
            StateVector::raw(v)
        })
        .collect();

    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// `||A psi||_2 = sqrt(<psi| A^2 |psi>)` for a unit-norm state.
///
/// For a pure state rho the Schatten-1 norm of `A rho` equals exactly this
/// Euclidean norm, which is the operative norm for the cost and energy
/// functionals here.
pub fn state_norm_of_operator(a: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    psi.check_unit("psi")?;
    Ok(a.apply(psi)?.norm())
}

/// Bures-type angle `arccos |<psi0|psi1>|` between two unit-norm states, in
/// `[0, pi/2]`. Invariant under a global phase of either argument.
pub fn bures_angle(psi0: &StateVector, psi1: &StateVector) -> Result<f64> {
    psi0.check_unit("psi0")?;
    psi1.check_unit("psi1")?;
    let overlap = psi0.inner(psi1)?.norm().clamp(0.0, 1.0);
    Ok(overlap.acos())
}
