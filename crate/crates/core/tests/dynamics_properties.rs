#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use orthospeed_core::oracle::Oracle;
use orthospeed_core::propagator::{closed_form_rho, evolve_joint, fock_rho_explicit};
use orthospeed_core::spectral::{eig2, overlap_sample, overlaps, InitialBasis};
use orthospeed_core::{make_binomial, make_coherent_approx, make_fock, mean_photon, FieldState, ModelParams, QubitInit};
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = FieldState> {
    prop_oneof![
        (0usize..=20).prop_map(make_fock),
        (1usize..=20, 0.0f64..=0.9).prop_map(|(mu, eta)| make_binomial(mu, eta).unwrap()),
    ]
}

fn qubit_strategy() -> impl Strategy<Value = QubitInit> {
    prop_oneof![
        Just(QubitInit::default()),
        (0.0f64..std::f64::consts::PI, 0.0f64..std::f64::consts::TAU).prop_map(|(theta, phi)| QubitInit { theta, phi }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_matches_oracle(
        g in 0.0f64..=1.0,
        delta in 0.0f64..=2.0,
        field in field_strategy(),
        qubit in qubit_strategy(),
        t in 0.0f64..=50.0,
    ) {
        let params = ModelParams::new(g, delta).unwrap();
        let oracle = Oracle::new(&params, &field, &qubit).unwrap();
        let closed = closed_form_rho(&params, &field, &qubit, t);
        prop_assert!(closed.max_abs_diff(&oracle.rho(t)) < 1e-9);
    }

    #[test]
    fn evolution_is_unitary_and_states_are_valid(
        g in 0.0f64..=1.0,
        delta in -2.0f64..=2.0,
        field in field_strategy(),
        qubit in qubit_strategy(),
        t in 0.0f64..=200.0,
    ) {
        let params = ModelParams::new(g, delta).unwrap();
        let state = evolve_joint(&params, &field, &qubit, t);
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
        let rho = orthospeed_core::reduced_qubit(&state);
        prop_assert!(rho.validate().is_ok(), "{:?}", rho);
    }

    #[test]
    fn explicit_fock_formula_equivalence(
        g in 0.0f64..=1.0,
        delta in 0.0f64..=2.0,
        n in 0usize..=20,
        t in 0.0f64..=50.0,
    ) {
        let params = ModelParams::new(g, delta).unwrap();
        let manifold = closed_form_rho(&params, &make_fock(n), &QubitInit::default(), t);
        prop_assert!(fock_rho_explicit(&params, n, t).max_abs_diff(&manifold) < 1e-12);
    }

    #[test]
    fn uncoupled_field_leaves_qubit_precessing(
        delta in -3.0f64..=3.0,
        field in field_strategy(),
        t in 0.0f64..=100.0,
    ) {
        let rho = closed_form_rho(&ModelParams::new(0.0, delta).unwrap(), &field, &QubitInit::default(), t);
        prop_assert!((rho.rho11 - 0.5).abs() < 1e-12);
        prop_assert!((rho.rho22 - 0.5).abs() < 1e-12);
        prop_assert!((rho.rho12 - Complex64::from_polar(0.5, -delta * t)).norm() < 1e-12);
    }

    #[test]
    fn spectral_reconstruction_and_overlap_normalization(
        g in 0.0f64..=1.0,
        delta in 0.0f64..=2.0,
        field in field_strategy(),
        t in 0.0f64..=50.0,
    ) {
        let rho = closed_form_rho(&ModelParams::new(g, delta).unwrap(), &field, &QubitInit::default(), t);
        let pair = eig2(&rho);
        prop_assert!((pair.lambda1 + pair.lambda2 - 1.0).abs() < 1e-12);
        prop_assert!(pair.lambda1 >= pair.lambda2);
        let m = rho.as_matrix();
        for r in 0..2 {
            for c in 0..2 {
                let rebuilt = pair.lambda1 * pair.u1[r] * pair.u1[c].conj() + pair.lambda2 * pair.u2[r] * pair.u2[c].conj();
                prop_assert!((rebuilt - m[r][c]).norm() < 1e-10);
            }
        }
        if !pair.degenerate {
            let sp = overlaps(&pair, &InitialBasis::default());
            for k in 0..2 {
                prop_assert!((sp[k][0].powi(2) + sp[k][1].powi(2) - 1.0).abs() < 1e-10);
                prop_assert!((sp[0][k].powi(2) + sp[1][k].powi(2) - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn binomial_mean_and_norm(mu in 0usize..=200, tenths in 0u32..=10) {
        let eta = tenths as f64 / 10.0;
        let b = make_binomial(mu, eta).unwrap();
        prop_assert!((b.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((mean_photon(&b) - mu as f64 * eta * eta).abs() < 1e-10);
    }

    #[test]
    fn coherent_states_are_normalized(nbar in 0.0f64..30.0) {
        let c = make_coherent_approx(nbar, 1e-12).unwrap();
        prop_assert!((c.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((mean_photon(&c) - nbar).abs() < 1e-9);
    }
}

#[test]
fn overlaps_are_continuous_on_fine_grids() {
    let cases = [(0.1, 1.0, make_fock(1)), (0.5, 0.3, make_fock(5)), (0.01, 0.3, make_binomial(10, 0.8).unwrap())];
    for (g, delta, field) in cases {
        let params = ModelParams::new(g, delta).unwrap();
        let basis = InitialBasis::default();
        let dt = 0.01;
        let samples: Vec<_> = (0..=4000)
            .map(|k| {
                let t = k as f64 * dt;
                overlap_sample(t, &closed_form_rho(&params, &field, &QubitInit::default(), t), &basis)
            })
            .collect();
        for w in samples.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            // away from degeneracies: demand a comfortable eigenvalue gap
            if a.0.lambda1 - a.0.lambda2 < 0.05 || b.0.lambda1 - b.0.lambda2 < 0.05 {
                continue;
            }
            for i in 0..2 {
                for j in 0..2 {
                    let jump = (a.1.sp[i][j] - b.1.sp[i][j]).abs();
                    assert!(jump < 0.1, "g={g} delta={delta} t={} jump={jump}", a.1.t);
                }
            }
        }
    }
}

#[test]
fn coherent_field_matches_oracle() {
    let field = make_coherent_approx(2.0, 1e-12).unwrap();
    let params = ModelParams::new(0.3, 0.4).unwrap();
    let oracle = Oracle::new(&params, &field, &QubitInit::default()).unwrap();
    for t in [0.0, 3.3, 17.0, 42.0] {
        assert!(closed_form_rho(&params, &field, &QubitInit::default(), t).max_abs_diff(&oracle.rho(t)) < 1e-9);
    }
}

#[test]
fn resonant_vacuum_has_no_singularity() {
    // Δ = 0, n = 0: the n = 0 frequency vanishes and the sinc limit takes over.
    let params = ModelParams::new(0.0, 0.0).unwrap();
    for t in [0.0, 1e-9, 1.0, 1e3] {
        let rho = closed_form_rho(&params, &make_fock(0), &QubitInit::default(), t);
        assert!(rho.is_finite());
        rho.validate().unwrap();
        assert!((rho.rho12 - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        let explicit = fock_rho_explicit(&params, 0, t);
        assert!(explicit.is_finite());
    }
}
