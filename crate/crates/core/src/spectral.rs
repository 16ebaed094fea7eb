//! Eigen-decomposition of 2×2 qubit states and overlaps with the initial eigenbasis.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::qubit::{QubitDensity, QubitInit};

/// Eigenvalue gap below which a state counts as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;
/// Off-diagonal modulus below which the standard basis is returned as-is.
pub const DIAGONAL_CUTOFF: f64 = 1e-13;

pub type Vec2 = [Complex64; 2];

/// Ordered eigenpairs of a qubit density matrix, `lambda1 ≥ lambda2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPair {
    pub lambda1: f64,
    pub lambda2: f64,
    pub u1: Vec2,
    pub u2: Vec2,
    pub degenerate: bool,
}

/// Orthonormal eigenbasis of the initial qubit state, `nu1` carrying weight 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialBasis {
    pub nu1: Vec2,
    pub nu2: Vec2,
}

impl Default for InitialBasis {
    /// `(1, 1)/√2` and `(1, −1)/√2`.
    fn default() -> Self {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self {
            nu1: [s, s],
            nu2: [s, -s],
        }
    }
}

impl InitialBasis {
    /// Eigenbasis of a pure initial qubit state.
    pub fn from_qubit(qubit: &QubitInit) -> Self {
        let nu1 = qubit.amplitudes();
        Self {
            nu1,
            nu2: orthogonal_complement(&nu1),
        }
    }
}

/// Matrix of `|⟨ν_i|u_j⟩|` at one time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapSample {
    pub t: f64,
    pub sp: [[f64; 2]; 2],
    pub degenerate: bool,
}

fn orthogonal_complement(u: &Vec2) -> Vec2 {
    [-u[1].conj(), u[0].conj()]
}

/// Rotates the global phase so the largest-magnitude component (the first on
/// ties) is real and nonnegative.
fn fix_phase(u: Vec2) -> Vec2 {
    let pivot = if u[1].norm() > u[0].norm() { u[1] } else { u[0] };
    let r = pivot.norm();
    if r == 0.0 {
        return u;
    }
    let phase = pivot.conj() / r;
    [u[0] * phase, u[1] * phase]
}

fn normalize(u: Vec2) -> Vec2 {
    let n = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
    [u[0] / n, u[1] / n]
}

fn inner(a: &Vec2, b: &Vec2) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

/// Eigenvalues `½(tr ± sqrt((ρ11−ρ22)² + 4|ρ12|²))` and matching eigenvectors.
///
/// The eigenvector of the larger eigenvalue is built from whichever row of
/// `ρ − λ1` is better conditioned, so no division by a small `ρ12` occurs.
pub fn eig2(rho: &QubitDensity) -> SpectralPair {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mean = 0.5 * (rho.rho11 + rho.rho22);
    let half_diff = 0.5 * (rho.rho11 - rho.rho22);
    let b = rho.rho12;
    let radius = half_diff.hypot(b.norm());
    let lambda1 = mean + radius;
    let lambda2 = mean - radius;
    let degenerate = lambda1 - lambda2 < DEGENERACY_GAP;

    let u1 = if degenerate {
        [one, zero]
    } else if b.norm() < DIAGONAL_CUTOFF {
        if rho.rho11 >= rho.rho22 {
            [one, zero]
        } else {
            [zero, one]
        }
    } else if half_diff >= 0.0 {
        // second row: conj(b) x + (ρ22 − λ1) y = 0
        normalize([Complex64::new(half_diff + radius, 0.0), b.conj()])
    } else {
        // first row: (ρ11 − λ1) x + b y = 0
        normalize([b, Complex64::new(radius - half_diff, 0.0)])
    };
    let u1 = fix_phase(u1);
    let u2 = fix_phase(orthogonal_complement(&u1));
    SpectralPair {
        lambda1,
        lambda2,
        u1,
        u2,
        degenerate,
    }
}

/// `|⟨ν_i|u_j⟩|` for `i, j ∈ {1, 2}`.
pub fn overlaps(pair: &SpectralPair, basis: &InitialBasis) -> [[f64; 2]; 2] {
    let nu = [basis.nu1, basis.nu2];
    let u = [pair.u1, pair.u2];
    let mut sp = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            sp[i][j] = inner(&nu[i], &u[j]).norm().min(1.0);
        }
    }
    sp
}

/// Decomposes `rho` and packages its overlaps at time `t`.
pub fn overlap_sample(t: f64, rho: &QubitDensity, basis: &InitialBasis) -> (SpectralPair, OverlapSample) {
    let pair = eig2(rho);
    let sample = OverlapSample {
        t,
        sp: overlaps(&pair, basis),
        degenerate: pair.degenerate,
    };
    (pair, sample)
}
