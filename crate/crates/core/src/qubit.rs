//! Two-level box states in the `{|+⟩, |−⟩}` basis.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Slack allowed on trace, population bounds and determinant.
pub const DENSITY_TOL: f64 = 1e-12;

/// Pure initial qubit state `cos θ |+⟩ + e^{iφ} sin θ |−⟩`.
///
/// The default (`θ = π/4`, `φ = 0`) is the equal superposition whose density
/// matrix is `½[[1, 1], [1, 1]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitInit {
    pub theta: f64,
    pub phi: f64,
}

impl Default for QubitInit {
    fn default() -> Self {
        Self {
            theta: FRAC_PI_4,
            phi: 0.0,
        }
    }
}

impl QubitInit {
    pub fn amplitudes(&self) -> [Complex64; 2] {
        [
            Complex64::new(self.theta.cos(), 0.0),
            Complex64::from_polar(self.theta.sin(), self.phi),
        ]
    }

    pub fn density(&self) -> QubitDensity {
        let [a, b] = self.amplitudes();
        QubitDensity {
            rho11: a.norm_sqr(),
            rho22: b.norm_sqr(),
            rho12: a * b.conj(),
        }
    }
}

/// Reduced 2×2 density matrix of the box; `ρ21 = conj(ρ12)` is implied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensity {
    pub rho11: f64,
    pub rho22: f64,
    pub rho12: Complex64,
}

impl QubitDensity {
    pub fn rho21(&self) -> Complex64 {
        self.rho12.conj()
    }

    pub fn trace(&self) -> f64 {
        self.rho11 + self.rho22
    }

    pub fn det(&self) -> f64 {
        self.rho11 * self.rho22 - self.rho12.norm_sqr()
    }

    pub fn as_matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(self.rho11, 0.0), self.rho12],
            [self.rho21(), Complex64::new(self.rho22, 0.0)],
        ]
    }

    /// Largest elementwise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &QubitDensity) -> f64 {
        [
            (self.rho11 - other.rho11).abs(),
            (self.rho22 - other.rho22).abs(),
            (self.rho12 - other.rho12).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.rho11.is_finite() && self.rho22.is_finite() && self.rho12.re.is_finite() && self.rho12.im.is_finite()
    }

    /// Checks unit trace, populations in `[0, 1]` and positive semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::Numeric(format!("non-finite density matrix {self:?}")));
        }
        if (self.trace() - 1.0).abs() > DENSITY_TOL {
            return Err(Error::Numeric(format!("trace {} differs from 1", self.trace())));
        }
        let range = -DENSITY_TOL..=1.0 + DENSITY_TOL;
        if !range.contains(&self.rho11) || !range.contains(&self.rho22) {
            return Err(Error::Numeric(format!(
                "populations ({}, {}) outside [0, 1]",
                self.rho11, self.rho22
            )));
        }
        if self.det() < -DENSITY_TOL {
            return Err(Error::Numeric(format!("negative determinant {}", self.det())));
        }
        Ok(())
    }
}
