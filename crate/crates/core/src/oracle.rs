//! Brute-force reference evolution on a truncated joint space.
//!
//! The full block Hamiltonian is assembled as a dense Hermitian matrix,
//! diagonalized once, and `exp(−iHt) ψ₀` is applied by phasing the
//! eigencomponents. Nothing here uses the manifold decomposition, so it can
//! arbitrate the closed-form evaluators.
//!
//! Basis ordering is qubit-major: index `s · dim_field + n` with `|+⟩ → s = 0`
//! and `|−⟩ → s = 1`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fieldstates::FieldState;
use crate::propagator::{JointState, ModelParams};
use crate::qubit::{QubitDensity, QubitInit};

const MAX_SWEEPS: usize = 10_000;

/// Dense Hermitian matrix in scaled frequency units.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitian {
    matrix: DMatrix<Complex64>,
}

impl DenseHermitian {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        let h = Self { matrix };
        let defect = h.hermiticity_defect();
        if defect >= 1e-14 {
            return Err(Error::Domain(format!("matrix is not Hermitian (defect {defect:e})")));
        }
        Ok(h)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `max |H − H†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.matrix.adjoint();
        (&self.matrix - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn expectation(&self, psi: &[Complex64]) -> f64 {
        let v = DVector::from_column_slice(psi);
        v.dotc(&(&self.matrix * &v)).re
    }
}

/// Annihilation operator on `dim` Fock levels, `a|n⟩ = √n |n−1⟩`.
pub fn annihilation(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// `[[Δ/2 · I, −i g a], [i g a†, −Δ/2 · I]]` on `2 · dim_field` states.
pub fn build_hamiltonian(params: &ModelParams, dim_field: usize) -> Result<DenseHermitian> {
    if dim_field < 2 {
        return Err(Error::Domain(format!("field dimension must be >= 2, got {dim_field}")));
    }
    let d = dim_field;
    let a = annihilation(d);
    let coupling = Complex64::new(0.0, params.g);
    let mut h = DMatrix::zeros(2 * d, 2 * d);
    for n in 0..d {
        h[(n, n)] = Complex64::new(0.5 * params.delta, 0.0);
        h[(d + n, d + n)] = Complex64::new(-0.5 * params.delta, 0.0);
    }
    h.view_mut((0, d), (d, d)).copy_from(&(a.map(|z| -coupling * z)));
    h.view_mut((d, 0), (d, d)).copy_from(&(a.adjoint().map(|z| coupling * z)));
    DenseHermitian::new(h)
}

/// Excitation number `a†a + |+⟩⟨+|` in the same basis.
pub fn excitation_number(dim_field: usize) -> DMatrix<Complex64> {
    let d = dim_field;
    DMatrix::from_fn(2 * d, 2 * d, |i, j| {
        if i != j {
            Complex64::new(0.0, 0.0)
        } else if i < d {
            Complex64::new(i as f64 + 1.0, 0.0)
        } else {
            Complex64::new((i - d) as f64, 0.0)
        }
    })
}

/// Spectral form of `exp(−iHt)`: eigenvalues and eigenvectors are computed
/// once and reused for every time point.
#[derive(Debug, Clone)]
pub struct SpectralPropagator {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl SpectralPropagator {
    pub fn new(h: &DenseHermitian) -> Result<Self> {
        let eig = nalgebra::SymmetricEigen::try_new(h.matrix.clone(), f64::EPSILON, MAX_SWEEPS)
            .ok_or_else(|| Error::Numeric(format!("Hermitian eigensolver did not converge (dim {})", h.dim())))?;
        Ok(Self {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `exp(−iHt) ψ₀`.
    pub fn evolve(&self, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        if psi0.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                actual: psi0.len(),
            });
        }
        let v = DVector::from_column_slice(psi0);
        let mut coeffs = self.eigenvectors.adjoint() * v;
        for (c, &e) in coeffs.iter_mut().zip(&self.eigenvalues) {
            *c *= Complex64::from_polar(1.0, -e * t);
        }
        Ok((&self.eigenvectors * coeffs).iter().copied().collect())
    }

    /// The full matrix `exp(−iHt)`.
    pub fn unitary(&self, t: f64) -> DMatrix<Complex64> {
        let phases = DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&e| Complex64::from_polar(1.0, -e * t)),
        ));
        &self.eigenvectors * phases * self.eigenvectors.adjoint()
    }
}

/// `exp(−iHt) ψ₀` for a single time point.
pub fn evolve_exact(h: &DenseHermitian, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    SpectralPropagator::new(h)?.evolve(psi0, t)
}

/// Traces a qubit-major joint vector over the field.
pub fn partial_trace_qubit(psi: &[Complex64], dim_field: usize) -> Result<QubitDensity> {
    if psi.len() != 2 * dim_field {
        return Err(Error::Dimension {
            expected: 2 * dim_field,
            actual: psi.len(),
        });
    }
    let (plus, minus) = psi.split_at(dim_field);
    Ok(QubitDensity {
        rho11: plus.iter().map(|c| c.norm_sqr()).sum(),
        rho22: minus.iter().map(|c| c.norm_sqr()).sum(),
        rho12: plus.iter().zip(minus).map(|(p, m)| p * m.conj()).sum(),
    })
}

/// Reference evaluator for one (params, field, qubit) configuration.
#[derive(Debug, Clone)]
pub struct Oracle {
    dim_field: usize,
    psi0: Vec<Complex64>,
    propagator: SpectralPropagator,
    hamiltonian: DenseHermitian,
}

impl Oracle {
    /// Field dimension is the field truncation plus two.
    pub fn new(params: &ModelParams, field: &FieldState, qubit: &QubitInit) -> Result<Self> {
        let dim_field = field.truncation() + 2;
        let hamiltonian = build_hamiltonian(params, dim_field)?;
        let propagator = SpectralPropagator::new(&hamiltonian)?;
        let psi0 = JointState::product(field, qubit).to_dense();
        Ok(Self {
            dim_field,
            psi0,
            propagator,
            hamiltonian,
        })
    }

    pub fn dim_field(&self) -> usize {
        self.dim_field
    }

    pub fn hamiltonian(&self) -> &DenseHermitian {
        &self.hamiltonian
    }

    pub fn propagator(&self) -> &SpectralPropagator {
        &self.propagator
    }

    pub fn state(&self, t: f64) -> Vec<Complex64> {
        self.propagator
            .evolve(&self.psi0, t)
            .expect("initial state built with matching dimension")
    }

    pub fn rho(&self, t: f64) -> QubitDensity {
        partial_trace_qubit(&self.state(t), self.dim_field).expect("state built with matching dimension")
    }
}

/// One-shot reference reduced state.
pub fn oracle_rho(params: &ModelParams, field: &FieldState, qubit: &QubitInit, t: f64) -> Result<QubitDensity> {
    Ok(Oracle::new(params, field, qubit)?.rho(t))
}
