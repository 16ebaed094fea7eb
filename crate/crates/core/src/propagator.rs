//! Closed-form evolution of the qubit–cavity state.
//!
//! The interaction-picture generator
//!
//! ```text
//! H = [[ Δ/2 · I,  −i g a ],
//!      [ i g a†,   −Δ/2 · I ]]
//! ```
//!
//! (rows and columns ordered `|+⟩`, `|−⟩`) conserves the excitation number, so
//! it splits into 2×2 blocks on `span{|+,n⟩, |−,n+1⟩}` plus the uncoupled
//! state `|−,0⟩`. Each block squares to `Ω²_{n+1} · I` with
//! `Ω_n = sqrt(Δ²/4 + g² n)`, which gives the exact propagator
//! `U_n(t) = cos(Ω t) I − i sin(Ω t)/Ω · H_n`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fieldstates::{make_binomial, FieldState};
use crate::qubit::{QubitDensity, QubitInit};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Coupling `g` and detuning `Δ` in scaled frequency units; times are in the
/// reciprocal unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub g: f64,
    pub delta: f64,
}

impl ModelParams {
    pub fn new(g: f64, delta: f64) -> Result<Self> {
        let params = Self { g, delta };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g >= 0.0 && self.g.is_finite()) {
            return Err(Error::Domain(format!("coupling g must be finite and >= 0, got {}", self.g)));
        }
        if !self.delta.is_finite() {
            return Err(Error::Domain(format!("detuning must be finite, got {}", self.delta)));
        }
        Ok(())
    }
}

/// How the manifold frequency is formed from `Δ²/4 + g² n`.
///
/// Only [`RabiConvention::SquareRoot`] is physical. `Squared` raises the sum
/// to the second power instead; it exists so the verification battery can
/// show that such a propagator is not unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RabiConvention {
    #[default]
    SquareRoot,
    Squared,
}

/// Generalized Rabi frequency `Ω_n = sqrt(Δ²/4 + g² n)`.
pub fn rabi_frequency(params: &ModelParams, n: usize) -> f64 {
    rabi_frequency_with(params, n, RabiConvention::SquareRoot)
}

pub fn rabi_frequency_with(params: &ModelParams, n: usize, convention: RabiConvention) -> f64 {
    let sum = 0.25 * params.delta * params.delta + params.g * params.g * n as f64;
    match convention {
        RabiConvention::SquareRoot => sum.sqrt(),
        RabiConvention::Squared => sum * sum,
    }
}

/// `sin(Ω t) / Ω`, finite as `Ω → 0` where it tends to `t`.
pub fn sin_over(omega: f64, t: f64) -> f64 {
    let x = omega * t;
    if x.abs() < 1e-4 {
        let x2 = x * x;
        t * (1.0 - x2 / 6.0 * (1.0 - x2 / 20.0))
    } else {
        x.sin() / omega
    }
}

/// Joint pure state: `f_plus[n]` is the amplitude of `|+,n⟩` and
/// `f_minus[n]` that of `|−,n⟩`. `f_minus` is one level longer because the
/// `|+,N⟩` component leaks into `|−,N+1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub f_plus: Vec<Complex64>,
    pub f_minus: Vec<Complex64>,
}

impl JointState {
    /// `qubit ⊗ field`, padded so the dynamics closes without truncation.
    pub fn product(field: &FieldState, qubit: &QubitInit) -> Self {
        let [q_plus, q_minus] = qubit.amplitudes();
        let c = field.amplitudes();
        let f_plus = c.iter().map(|&cn| q_plus * cn).collect();
        let mut f_minus: Vec<Complex64> = c.iter().map(|&cn| q_minus * cn).collect();
        f_minus.push(ZERO);
        Self { f_plus, f_minus }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.f_plus.iter().chain(&self.f_minus).map(|c| c.norm_sqr()).sum()
    }

    /// Field dimension needed to embed this state densely.
    pub fn dim_field(&self) -> usize {
        self.f_minus.len()
    }

    /// Dense vector in qubit-major order, index `s · dim_field + n` with `+ → 0`, `− → 1`.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let dim = self.dim_field();
        let mut psi = vec![ZERO; 2 * dim];
        psi[..self.f_plus.len()].copy_from_slice(&self.f_plus);
        psi[dim..].copy_from_slice(&self.f_minus);
        psi
    }
}

/// Evolves `qubit ⊗ field` for time `t` with the exact manifold propagator.
pub fn evolve_joint(params: &ModelParams, field: &FieldState, qubit: &QubitInit, t: f64) -> JointState {
    evolve_joint_with(params, field, qubit, t, RabiConvention::SquareRoot)
}

pub fn evolve_joint_with(
    params: &ModelParams,
    field: &FieldState,
    qubit: &QubitInit,
    t: f64,
    convention: RabiConvention,
) -> JointState {
    let initial = JointState::product(field, qubit);
    let top = field.truncation();
    let half_delta = 0.5 * params.delta;

    let mut f_plus = vec![ZERO; top + 1];
    let mut f_minus = vec![ZERO; top + 2];

    // |−,0⟩ is an eigenstate with energy −Δ/2.
    f_minus[0] = Complex64::from_polar(1.0, half_delta * t) * initial.f_minus[0];

    for n in 0..=top {
        let omega = rabi_frequency_with(params, n + 1, convention);
        let k = params.g * ((n + 1) as f64).sqrt();
        let s = sin_over(omega, t);
        let c = (omega * t).cos();

        let u11 = c - I * half_delta * s;
        let u12 = Complex64::new(-k * s, 0.0);
        let u21 = Complex64::new(k * s, 0.0);
        let u22 = c + I * half_delta * s;

        let x = initial.f_plus[n];
        let y = initial.f_minus[n + 1];
        f_plus[n] = u11 * x + u12 * y;
        f_minus[n + 1] = u21 * x + u22 * y;
    }
    JointState { f_plus, f_minus }
}

/// Partial trace over the field: `ρ11 = Σ|f₊|²`, `ρ22 = Σ|f₋|²`, `ρ12 = Σ f₊ conj(f₋)`.
pub fn reduced_qubit(state: &JointState) -> QubitDensity {
    let rho11 = state.f_plus.iter().map(|c| c.norm_sqr()).sum();
    let rho22 = state.f_minus.iter().map(|c| c.norm_sqr()).sum();
    let rho12 = state
        .f_plus
        .iter()
        .zip(&state.f_minus)
        .map(|(p, m)| p * m.conj())
        .sum();
    QubitDensity { rho11, rho22, rho12 }
}

/// Reduced qubit state at `t` by manifold exponentiation.
pub fn closed_form_rho(params: &ModelParams, field: &FieldState, qubit: &QubitInit, t: f64) -> QubitDensity {
    reduced_qubit(&evolve_joint(params, field, qubit, t))
}

/// Explicit element formulas for a Fock field `|n⟩` and the default qubit state.
///
/// ```text
/// ρ11 = ½ (cos²Ω_{n+1}t + (Δ/2)² S²_{n+1} + g² n S²_n)
/// ρ22 = ½ (cos²Ω_n t   + (Δ/2)² S²_n     + g² (n+1) S²_{n+1})
/// ρ12 = ½ (cos Ω_{n+1}t − i Δ/2 S_{n+1}) (cos Ω_n t − i Δ/2 S_n)
/// ```
///
/// with `S_k = sin(Ω_k t)/Ω_k`.
pub fn fock_rho_explicit(params: &ModelParams, n: usize, t: f64) -> QubitDensity {
    let half_delta = 0.5 * params.delta;
    let g2 = params.g * params.g;
    let (om_n, om_n1) = (rabi_frequency(params, n), rabi_frequency(params, n + 1));
    let (s_n, s_n1) = (sin_over(om_n, t), sin_over(om_n1, t));
    let (c_n, c_n1) = ((om_n * t).cos(), (om_n1 * t).cos());

    let rho11 = 0.5 * (c_n1 * c_n1 + half_delta * half_delta * s_n1 * s_n1 + g2 * n as f64 * s_n * s_n);
    let rho22 = 0.5 * (c_n * c_n + half_delta * half_delta * s_n * s_n + g2 * (n + 1) as f64 * s_n1 * s_n1);
    let rho12 = 0.5 * (c_n1 - I * half_delta * s_n1) * (c_n - I * half_delta * s_n);
    QubitDensity { rho11, rho22, rho12 }
}

/// Result of evaluating the explicit binomial-field element formulas.
///
/// The triple is *not* a validated density matrix: the formulas carry a
/// doubled normalization and cross-term factors that disagree with the exact
/// dynamics. `deviation` is the largest elementwise distance to the manifold
/// result for the same inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialFormulaCheck {
    pub rho11: f64,
    pub rho22: f64,
    pub rho12: Complex64,
    pub deviation: f64,
}

impl BinomialFormulaCheck {
    pub fn as_density(&self) -> QubitDensity {
        QubitDensity {
            rho11: self.rho11,
            rho22: self.rho22,
            rho12: self.rho12,
        }
    }
}

/// Explicit element formulas for a binomial field `|μ, η⟩`, evaluated term by
/// term as written (weights `Υ η^{2n} (1−η²)^{μ−n}` with `Υ = μ!/((μ−n)! n!)`).
///
/// Kept for diagnostics only; nothing in the main pipeline uses it.
pub fn binomial_rho_explicit(params: &ModelParams, mu: usize, eta: f64, t: f64) -> Result<BinomialFormulaCheck> {
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::Domain(format!("explicit binomial formulas need eta in [0, 1), got {eta}")));
    }
    let field = make_binomial(mu, eta)?;
    let weights = field.populations();

    let half_delta = 0.5 * params.delta;
    let g = params.g;
    let rest = 1.0 - eta * eta;
    let ratio = eta / rest.sqrt();
    let s = |k: usize| sin_over(rabi_frequency(params, k), t);
    let c = |k: usize| (rabi_frequency(params, k) * t).cos();

    let mut rho11 = 0.0;
    let mut rho22 = 0.0;
    let mut rho12 = ZERO;
    for (n, &w) in weights.iter().enumerate() {
        let nf = n as f64;
        let amp = (mu - n) as f64 / (nf + 1.0).sqrt();
        let (s0, s1, s2) = (s(n), s(n + 1), s(n + 2));
        let (c0, c1, c2) = (c(n), c(n + 1), c(n + 2));

        rho11 += w
            * (c1 * c1 + g * g * nf * s0 * s0 + half_delta * half_delta * s1 * s1
                - 2.0 * g * amp * ratio * c1 * s0);
        rho22 += w
            * (c0 * c0 + g * g * (nf + 1.0) * s1 * s1 + half_delta * half_delta * s0 * s0
                - 2.0 * g * amp * ratio * c1 * s1);
        let diag = (c1 - I * half_delta * s1) * (c0 - I * half_delta * s0);
        let second = g * g * amp * ((mu - n) as f64 + 1.0) / (nf + 2.0).sqrt() / rest * s1 * s2;
        let third = g * amp * ratio * s1 * ((c0 - c2) + I * half_delta * (s0 - s2));
        rho12 += w * (diag - second + third);
    }

    let exact = closed_form_rho(params, &field, &QubitInit::default(), t);
    let formula = QubitDensity { rho11, rho22, rho12 };
    Ok(BinomialFormulaCheck {
        rho11,
        rho22,
        rho12,
        deviation: formula.max_abs_diff(&exact),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldstates::{make_binomial, make_fock};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn params(g: f64, delta: f64) -> ModelParams {
        ModelParams::new(g, delta).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() < tol, "{a} vs {b}");
    }

    #[test]
    fn rabi_frequency_examples() {
        assert_eq!(rabi_frequency(&params(1.0, 0.0), 4), 2.0);
        assert_eq!(rabi_frequency(&params(0.0, 2.0), 7), 1.0);
        // Half the eigenvalue gap of [[1/2, -0.1i], [0.1i, -1/2]]: sqrt(0.25 + 0.01).
        assert_abs_diff_eq!(rabi_frequency(&params(0.1, 1.0), 1), 0.509_901_951_359_278_5, epsilon = 1e-15);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(-0.1, 1.0).is_err());
        assert!(ModelParams::new(0.1, f64::INFINITY).is_err());
        assert!(ModelParams::new(0.0, -1.0).is_ok());
    }

    #[test]
    fn sin_over_limit() {
        assert_eq!(sin_over(0.0, 3.0), 3.0);
        assert_abs_diff_eq!(sin_over(1e-9, 2.0), 2.0, epsilon = 1e-15);
        // Both branches agree at the switch point.
        let x = 1e-4;
        assert_abs_diff_eq!(sin_over(x, 1.0), x.sin() / x, epsilon = 1e-16);
        assert_abs_diff_eq!(sin_over(2.0, 1.0), 2f64.sin() / 2.0, epsilon = 1e-16);
    }

    #[test]
    fn zero_time_is_identity() {
        let field = make_binomial(6, 0.4).unwrap();
        let qubit = QubitInit { theta: 0.3, phi: 1.1 };
        let evolved = evolve_joint(&params(0.7, 1.3), &field, &qubit, 0.0);
        assert_eq!(evolved, JointState::product(&field, &qubit));
    }

    #[test]
    fn resonant_vacuum_quarter_period() {
        let state = evolve_joint(&params(1.0, 0.0), &make_fock(0), &QubitInit::default(), PI / 2.0);
        close(state.f_plus[0], ZERO, 1e-15);
        close(state.f_minus[0], Complex64::new(FRAC_1_SQRT_2, 0.0), 1e-15);
        close(state.f_minus[1], Complex64::new(FRAC_1_SQRT_2, 0.0), 1e-15);
    }

    #[test]
    fn uncoupled_qubit_precesses() {
        let t = 2.7;
        let state = evolve_joint(&params(0.0, 1.0), &make_fock(0), &QubitInit::default(), t);
        close(state.f_plus[0], Complex64::from_polar(FRAC_1_SQRT_2, -t / 2.0), 1e-15);
        close(state.f_minus[0], Complex64::from_polar(FRAC_1_SQRT_2, t / 2.0), 1e-15);
        close(state.f_minus[1], ZERO, 1e-15);
    }

    #[test]
    fn reduced_state_examples() {
        let rho = reduced_qubit(&JointState::product(&make_fock(3), &QubitInit::default()));
        assert_abs_diff_eq!(rho.rho11, 0.5, epsilon = 1e-15);
        close(rho.rho12, Complex64::new(0.5, 0.0), 1e-15);

        let p = params(1.0, 0.0);
        let rho = closed_form_rho(&p, &make_fock(0), &QubitInit::default(), PI);
        assert_abs_diff_eq!(rho.rho11, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.rho22, 0.5, epsilon = 1e-15);
        close(rho.rho12, Complex64::new(-0.5, 0.0), 1e-15);

        let rho = closed_form_rho(&p, &make_fock(0), &QubitInit::default(), PI / 2.0);
        assert_abs_diff_eq!(rho.rho11, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.rho22, 1.0, epsilon = 1e-15);
        close(rho.rho12, ZERO, 1e-15);
    }

    #[test]
    fn free_evolution_closed_form() {
        let fields = [make_fock(4), make_binomial(9, 0.3).unwrap()];
        for field in &fields {
            for t in [0.3, 5.0, 41.0] {
                let rho = closed_form_rho(&params(0.0, 1.7), field, &QubitInit::default(), t);
                assert_abs_diff_eq!(rho.rho11, 0.5, epsilon = 1e-12);
                assert_abs_diff_eq!(rho.rho22, 0.5, epsilon = 1e-12);
                close(rho.rho12, Complex64::from_polar(0.5, -1.7 * t), 1e-12);
            }
        }
    }

    #[test]
    fn explicit_fock_formula_matches_manifold() {
        let explicit = fock_rho_explicit(&params(0.3, 1.0), 2, 0.0);
        assert_abs_diff_eq!(explicit.rho11, 0.5, epsilon = 1e-15);
        close(explicit.rho12, Complex64::new(0.5, 0.0), 1e-15);

        for (g, delta, n, t) in [(0.1, 1.0, 1, 5.0), (1.0, 0.0, 0, PI), (0.5, 0.3, 5, 17.2), (0.1, 0.0, 1, 3.0)] {
            let p = params(g, delta);
            let manifold = closed_form_rho(&p, &make_fock(n), &QubitInit::default(), t);
            let explicit = fock_rho_explicit(&p, n, t);
            assert!(explicit.max_abs_diff(&manifold) < 1e-12, "{g} {delta} {n} {t}");
        }
    }

    #[test]
    fn explicit_binomial_formula_at_zero_time_is_doubled() {
        let check = binomial_rho_explicit(&params(0.01, 1.0), 10, 0.1, 0.0).unwrap();
        assert_abs_diff_eq!(check.rho11, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(check.rho22, 1.0, epsilon = 1e-12);
        close(check.rho12, Complex64::new(1.0, 0.0), 1e-12);
        assert_abs_diff_eq!(check.deviation, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn explicit_binomial_formula_vacuum_reduction() {
        // μ = 1, η = 0: diagonal elements are exactly twice the Fock n = 0 values;
        // the off-diagonal keeps an extra −g² √2 S₁ S₂ term that has no η factor.
        let p = params(0.2, 0.7);
        for t in [0.5, 3.0, 11.0] {
            let check = binomial_rho_explicit(&p, 1, 0.0, t).unwrap();
            let fock = fock_rho_explicit(&p, 0, t);
            assert_abs_diff_eq!(check.rho11, 2.0 * fock.rho11, epsilon = 1e-14);
            assert_abs_diff_eq!(check.rho22, 2.0 * fock.rho22, epsilon = 1e-14);
            let s1 = sin_over(rabi_frequency(&p, 1), t);
            let s2 = sin_over(rabi_frequency(&p, 2), t);
            let extra = -0.2f64.powi(2) * 2f64.sqrt() * s1 * s2;
            close(check.rho12, 2.0 * fock.rho12 + extra, 1e-14);
        }
    }

    #[test]
    fn explicit_binomial_rejects_eta_one() {
        assert!(binomial_rho_explicit(&params(0.1, 1.0), 3, 1.0, 1.0).is_err());
    }

    #[test]
    fn squared_convention_breaks_unitarity() {
        let p = params(0.5, 1.0);
        let field = make_fock(2);
        let state = evolve_joint_with(&p, &field, &QubitInit::default(), 3.0, RabiConvention::Squared);
        assert!((state.norm_sqr() - 1.0).abs() > 1e-3);
        let state = evolve_joint_with(&p, &field, &QubitInit::default(), 3.0, RabiConvention::SquareRoot);
        assert_abs_diff_eq!(state.norm_sqr(), 1.0, epsilon = 1e-14);
    }
}
