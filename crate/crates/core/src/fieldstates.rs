//! Initial states of the cavity mode as finite photon-number amplitude vectors.
//!
//! Three families are supported: Fock states, binomial states `|μ, η⟩` with
//! real `η ∈ [0, 1]`, and truncated coherent states. All constructors return
//! unit-norm vectors indexed by photon number.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Which family a [`FieldState`] was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldKind {
    Fock { n: usize },
    Binomial { mu: usize, eta: f64 },
    CoherentApprox { nbar: f64, tail_tol: f64 },
}

/// Normalized amplitudes `c_n` over photon numbers `0..=truncation`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    amplitudes: Vec<Complex64>,
    kind: FieldKind,
}

impl FieldState {
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// Largest photon number carried by the amplitude vector.
    pub fn truncation(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Photon-number probabilities `|c_n|²`.
    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }
}

/// Fock state `|n⟩`.
pub fn make_fock(n: usize) -> FieldState {
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n + 1];
    amplitudes[n] = Complex64::new(1.0, 0.0);
    FieldState {
        amplitudes,
        kind: FieldKind::Fock { n },
    }
}

/// `ln C(mu, m)` for every `m` in `0..=mu`, accumulated in log space so that
/// large `mu` cannot overflow.
fn ln_binomial_row(mu: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(mu + 1);
    let mut acc = 0.0;
    row.push(acc);
    for k in 1..=mu {
        acc += ((mu - k + 1) as f64).ln() - (k as f64).ln();
        row.push(acc);
    }
    row
}

/// Binomial state `Σ_m sqrt(C(μ,m)) η^m (1−η²)^{(μ−m)/2} |m⟩` for real `η ∈ [0, 1]`.
///
/// `mu = 0` is accepted and yields the vacuum, with a warning.
pub fn make_binomial(mu: usize, eta: f64) -> Result<FieldState> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Domain(format!("binomial eta must lie in [0, 1], got {eta}")));
    }
    if mu == 0 {
        log::warn!("binomial state with mu = 0 is the vacuum");
    }
    let kind = FieldKind::Binomial { mu, eta };
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); mu + 1];

    // The boundaries have a single nonzero amplitude; handle them exactly.
    if eta == 0.0 {
        amplitudes[0] = Complex64::new(1.0, 0.0);
        return Ok(FieldState { amplitudes, kind });
    }
    if eta == 1.0 {
        amplitudes[mu] = Complex64::new(1.0, 0.0);
        return Ok(FieldState { amplitudes, kind });
    }

    let ln_eta = eta.ln();
    let ln_rest = (-eta * eta).ln_1p();
    for (m, ln_kappa) in ln_binomial_row(mu).into_iter().enumerate() {
        let ln_prob = ln_kappa + 2.0 * m as f64 * ln_eta + (mu - m) as f64 * ln_rest;
        amplitudes[m] = Complex64::new((0.5 * ln_prob).exp(), 0.0);
    }
    let mut state = FieldState { amplitudes, kind };
    renormalize(&mut state.amplitudes);
    Ok(state)
}

/// Poissonian amplitudes `e^{−n̄/2} n̄^{n/2} / sqrt(n!)`, truncated at the
/// smallest `N` whose discarded tail mass is below `tail_tol`, then renormalized.
pub fn make_coherent_approx(nbar: f64, tail_tol: f64) -> Result<FieldState> {
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::Domain(format!("mean photon number must be finite and >= 0, got {nbar}")));
    }
    if !(tail_tol > 0.0 && tail_tol <= 1e-6) {
        return Err(Error::Domain(format!("tail tolerance must lie in (0, 1e-6], got {tail_tol}")));
    }
    let kind = FieldKind::CoherentApprox { nbar, tail_tol };
    if nbar == 0.0 {
        return Ok(FieldState {
            amplitudes: vec![Complex64::new(1.0, 0.0)],
            kind,
        });
    }

    // Generate the pmf well past the mode until terms are negligible against
    // the tolerance, then read off the tail from suffix sums.
    let ln_nbar = nbar.ln();
    let mut pmf = Vec::new();
    let mut ln_fact = 0.0;
    let mut n = 0usize;
    loop {
        if n > 0 {
            ln_fact += (n as f64).ln();
        }
        let p = (-nbar + n as f64 * ln_nbar - ln_fact).exp();
        pmf.push(p);
        if n as f64 > nbar && p < tail_tol * 1e-6 {
            break;
        }
        n += 1;
    }
    let mut tail = 0.0;
    let mut cutoff = pmf.len() - 1;
    for k in (0..pmf.len()).rev() {
        // `tail` holds the mass strictly above k.
        if tail >= tail_tol {
            break;
        }
        cutoff = k;
        tail += pmf[k];
    }
    let mut amplitudes: Vec<Complex64> = pmf[..=cutoff]
        .iter()
        .map(|p| Complex64::new(p.sqrt(), 0.0))
        .collect();
    renormalize(&mut amplitudes);
    Ok(FieldState { amplitudes, kind })
}

/// Mean photon number `Σ n |c_n|²`.
pub fn mean_photon(state: &FieldState) -> f64 {
    state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(n, c)| n as f64 * c.norm_sqr())
        .sum()
}

/// Largest amplitude difference between two states, padding the shorter with zeros.
pub fn max_amplitude_distance(a: &FieldState, b: &FieldState) -> f64 {
    let len = a.amplitudes.len().max(b.amplitudes.len());
    let zero = Complex64::new(0.0, 0.0);
    (0..len)
        .map(|n| {
            let x = a.amplitudes.get(n).copied().unwrap_or(zero);
            let y = b.amplitudes.get(n).copied().unwrap_or(zero);
            (x - y).norm()
        })
        .fold(0.0, f64::max)
}

fn renormalize(amplitudes: &mut [Complex64]) {
    let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in amplitudes.iter_mut() {
        *c /= norm;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn re(state: &FieldState) -> Vec<f64> {
        state.amplitudes().iter().map(|c| c.re).collect()
    }

    #[test]
    fn fock_states() {
        assert_eq!(re(&make_fock(0)), vec![1.0]);
        assert_eq!(re(&make_fock(1)), vec![0.0, 1.0]);
        let f = make_fock(20);
        assert_eq!(f.truncation(), 20);
        assert_eq!(f.amplitudes()[20].re, 1.0);
        assert!(f.amplitudes()[..20].iter().all(|c| c.norm() == 0.0));
        assert_eq!(f.norm_sqr(), 1.0);
        assert_eq!(mean_photon(&make_fock(5)), 5.0);
    }

    #[test]
    fn binomial_small_cases() {
        let b = make_binomial(1, 0.6).unwrap();
        assert_abs_diff_eq!(b.amplitudes()[0].re, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(b.amplitudes()[1].re, 0.6, epsilon = 1e-15);

        let b = make_binomial(2, 1.0).unwrap();
        assert_eq!(re(&b), vec![0.0, 0.0, 1.0]);

        let b = make_binomial(7, 0.0).unwrap();
        assert_eq!(b.amplitudes()[0].re, 1.0);
        assert_eq!(b.norm_sqr(), 1.0);
    }

    #[test]
    fn binomial_mu_zero_is_vacuum() {
        let b = make_binomial(0, 0.4).unwrap();
        assert_eq!(re(&b), vec![1.0]);
    }

    #[test]
    fn binomial_rejects_eta_out_of_range() {
        assert!(matches!(make_binomial(3, 1.2), Err(Error::Domain(_))));
        assert!(matches!(make_binomial(3, -0.1), Err(Error::Domain(_))));
        assert!(make_binomial(3, f64::NAN).is_err());
    }

    #[test]
    fn binomial_mean_direct_sum() {
        // Σ m |c_m|² against μη², both from direct products of factorials.
        for (mu, eta) in [(10usize, 0.1f64), (10, 0.5)] {
            let mut expected = 0.0;
            for m in 0..=mu {
                let kappa: f64 = (0..m).map(|k| (mu - k) as f64 / (k + 1) as f64).product();
                expected += m as f64 * kappa * eta.powi(2 * m as i32) * (1.0 - eta * eta).powi((mu - m) as i32);
            }
            let b = make_binomial(mu, eta).unwrap();
            assert_abs_diff_eq!(mean_photon(&b), expected, epsilon = 1e-12);
            assert_abs_diff_eq!(mean_photon(&b), mu as f64 * eta * eta, epsilon = 1e-10);
        }
    }

    #[test]
    fn binomial_large_mu_does_not_overflow() {
        let b = make_binomial(1000, 0.3).unwrap();
        assert!(b.amplitudes().iter().all(|c| c.re.is_finite()));
        assert_abs_diff_eq!(b.norm_sqr(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mean_photon(&b), 90.0, epsilon = 1e-9);
    }

    #[test]
    fn coherent_vacuum_and_truncation() {
        assert_eq!(re(&make_coherent_approx(0.0, 1e-12).unwrap()), vec![1.0]);

        let c = make_coherent_approx(1.0, 1e-12).unwrap();
        assert!(c.truncation() >= 12);
        assert_abs_diff_eq!(c.amplitudes()[0].norm_sqr(), (-1.0f64).exp(), epsilon = 1e-12);
        // Discarded tail mass below tolerance: Poisson pmf summed past N.
        let mut tail = 0.0;
        let mut p = (-1.0f64).exp();
        for n in 1..60 {
            p /= n as f64;
            if n > c.truncation() {
                tail += p;
            }
        }
        assert!(tail < 1e-12, "tail {tail}");
        // One fewer level would have left too much behind.
        let p_n: f64 = (-1.0f64).exp() / (1..=c.truncation()).map(|k| k as f64).product::<f64>();
        assert!(tail + p_n >= 1e-12);
    }

    #[test]
    fn coherent_mean() {
        let c = make_coherent_approx(2.0, 1e-12).unwrap();
        assert_abs_diff_eq!(mean_photon(&c), 2.0, epsilon = 1e-10);
    }

    #[test]
    fn coherent_argument_checks() {
        assert!(make_coherent_approx(-1.0, 1e-12).is_err());
        assert!(make_coherent_approx(1.0, 0.0).is_err());
        assert!(make_coherent_approx(1.0, 1e-3).is_err());
    }

    #[test]
    fn binomial_approaches_coherent() {
        let coherent = make_coherent_approx(1.0, 1e-12).unwrap();
        let distance = |mu: usize| {
            let b = make_binomial(mu, (1.0 / mu as f64).sqrt()).unwrap();
            max_amplitude_distance(&b, &coherent)
        };
        let d400 = max_amplitude_distance(&make_binomial(400, 0.05).unwrap(), &coherent);
        assert!(d400 < 5e-3, "{d400}");
        let (d25, d100) = (distance(25), distance(100));
        assert!(d25 >= d100 && d100 >= distance(400), "{d25} {d100}");
    }
}
