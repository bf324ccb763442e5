use proptest::prelude::*;

use zeno_core::channels::{
    attenuator, depolarizing, hs_embed, jaynes_cummings_generator, jaynes_cummings_stationary_state, qou_generator,
    qou_stationary_state, two_photon_generator, two_photon_invariant_states, validate_state, JcOrdering, JcParams,
    TruncationSpec,
};
use zeno_core::linalg::{
    contour_integral, eig, eigvals, mat_exp, resolvent, spectral_norm, trace_norm, unvec, vec, CMat, ContourSpec,
};
use zeno_core::random::{ginibre, random_cptp, random_density_matrix, random_gkls_normalized, random_kraus, rng};
use zeno_core::semigroup::{evolve, yosida, Superoperator};
use zeno_core::spectral::{peripheral_analysis, peripheral_power};
use zeno_core::zeno::{
    chernoff_check, perturbation_partial_sums, simplex_count, simplex_count_brute, survival_decomposition,
    zeno_limit_theorem1, zeno_product_apply, LimitMode, ZenoProblem,
};
use zeno_core::zeno::error_curve;
use zeno_core::{CMatrix, C64};

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

/// M = ½K + ½P with P the peripheral projector of a random channel K.
fn admissible_channel(seed: u64, d: usize) -> Superoperator {
    let k = random_cptp(d, 2, &mut rng(seed)).unwrap();
    let p = Superoperator::new(d, peripheral_analysis(&k).unwrap().peripheral_projector()).unwrap();
    k.scale_re(0.5).add(&p.scale_re(0.5))
}

fn generator(seed: u64, d: usize, norm: f64) -> Superoperator {
    random_gkls_normalized(d, 2, norm, &mut rng(seed)).unwrap().lindbladian().unwrap()
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn vec_unvec_round_trip(d in 1usize..6, entries in prop::collection::vec(-10.0f64..10.0, 72)) {
        let x = CMat::from_fn(d, d, |i, j| C64::new(entries[i * 6 + j], entries[36 + i * 6 + j]));
        let back = unvec(&vec(&x), d).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn simplex_closed_form_matches_enumeration(n in 0usize..40, k in 1usize..4, b in prop::collection::vec(0usize..4, 4)) {
        let bounds = &b[..=k];
        prop_assert_eq!(simplex_count(n, k, bounds).unwrap(), simplex_count_brute(n, k, bounds).unwrap());
    }
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn exp_is_multiplicative_on_commuting_pairs(seed in any::<u64>(), a in -1.0f64..1.0, b in -0.5f64..0.5) {
        let x = ginibre(4, 4, &mut rng(seed)).scale_re(0.5);
        let p = x.scale_re(a);
        let q = &x.scale_re(b) + &x.matmul(&x).scale_re(b * b);
        prop_assume!(p.commutator(&q).max_abs() <= 1e-12);
        let lhs = mat_exp(&(&p + &q)).unwrap();
        let rhs = mat_exp(&p).unwrap().matmul(&mat_exp(&q).unwrap());
        prop_assert!(lhs.approx_eq(&rhs, 1e-9));
    }

    #[test]
    fn resolvent_around_full_spectrum_is_identity(seed in any::<u64>()) {
        let a = ginibre(4, 4, &mut rng(seed));
        let radius = 1.5 * spectral_norm(&a).unwrap() + 0.1;
        let spec = ContourSpec::new(C64::new(0.0, 0.0), radius).unwrap();
        let i = contour_integral(|z| resolvent(&a, z), &spec).unwrap();
        prop_assert!(i.approx_eq(&CMat::identity(4), 1e-8));
    }

    #[test]
    fn eigenvalue_ordering_is_repeatable(seed in any::<u64>()) {
        let a = ginibre(5, 5, &mut rng(seed));
        prop_assert_eq!(eig(&a).unwrap().values, eig(&a).unwrap().values);
    }

    #[test]
    fn gkls_semigroup_is_cptp_and_contractive(seed in any::<u64>()) {
        let l = generator(seed, 3, 1.0);
        for t in [0.01, 0.1, 1.0, 10.0] {
            let e = evolve(&l, t).unwrap();
            prop_assert!(e.trace_preservation_defect() <= 1e-10);
            prop_assert!(e.choi_min_eigenvalue().unwrap() >= -1e-9);
            prop_assert!(e.induced_trace_norm_lb(64, seed).unwrap() <= 1.0 + 1e-8);
        }
    }

    #[test]
    fn yosida_resolvent_is_contractive_and_semigroups_commute(seed in any::<u64>()) {
        let l = generator(seed, 2, 1.0);
        let (yk, yj) = (yosida(&l, 3.0).unwrap(), yosida(&l, 11.0).unwrap());
        for y in [&yk, &yj] {
            prop_assert!(y.resolvent_bound_lb <= 1.0 + 1e-8);
        }
        let a = evolve(&yk.generator, 0.7).unwrap();
        let b = evolve(&yj.generator, 1.3).unwrap();
        prop_assert!(a.compose(&b).matrix().approx_eq(b.compose(&a).matrix(), 1e-9));
    }

    #[test]
    fn hs_embedding_preserves_spectrum(seed in any::<u64>()) {
        let mut g = rng(seed);
        let rho = random_density_matrix(4, &mut g);
        let t = random_cptp(4, 2, &mut g).unwrap();
        let mut a: Vec<C64> = eigvals(t.matrix()).unwrap();
        let mut b: Vec<C64> = eigvals(hs_embed(&t, &rho).unwrap().superop.matrix()).unwrap();
        let key = |z: &C64| (z.re * 1e6).round() as i64 * 1_000_000_000 + (z.im * 1e6).round() as i64;
        a.sort_by_key(key);
        b.sort_by_key(key);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).norm() <= 1e-7, "{} vs {}", x, y);
        }
    }

    #[test]
    fn peripheral_projectors_are_consistent(seed in any::<u64>()) {
        let m = admissible_channel(seed, 3);
        let r = peripheral_analysis(&m).unwrap();
        prop_assert!(r.admissible);
        prop_assert!(r.cross_check_ok);
        for p in &r.peripheral {
            if let Some(c) = p.cross_check {
                prop_assert!(c <= 1e-7);
            }
        }
        prop_assert!(r.resolution_defect.unwrap() <= 1e-8);
    }

    #[test]
    fn spectral_gap_bound_is_stable(seed in any::<u64>()) {
        let m = admissible_channel(seed, 3);
        let r = peripheral_analysis(&m).unwrap();
        let dt = r.gap_delta + 0.05;
        let err = |n: u64| spectral_norm(&(m.powi(n).matrix() - &peripheral_power(&r, n))).unwrap();
        // fitted once over an initial window: complex bulk eigenvalues make the ratio oscillate
        let c_hat = (5..=10u64).map(|n| err(n) / dt.powi(n as i32 + 1)).fold(0.0, f64::max);
        for n in 11..=60u64 {
            prop_assert!(err(n) <= c_hat * dt.powi(n as i32 + 1) + 1e-12, "n={}", n);
        }
    }

    #[test]
    fn admissibility_is_phase_invariant(seed in any::<u64>(), theta in 0.0f64..std::f64::consts::TAU) {
        let m = admissible_channel(seed, 3);
        let phase = C64::from_polar(1.0, theta);
        let r = peripheral_analysis(&m).unwrap();
        let rr = peripheral_analysis(&m.scale(phase)).unwrap();
        prop_assert_eq!(r.admissible, rr.admissible);
        prop_assert_eq!(r.peripheral.len(), rr.peripheral.len());
        for p in &r.peripheral {
            let rotated = p.value * phase;
            let q = rr.peripheral.iter().find(|q| (q.value - rotated).norm() < 1e-8);
            prop_assert!(q.is_some());
            prop_assert!((q.unwrap().nilpotent_norm - p.nilpotent_norm).abs() <= 1e-10);
        }
    }

    #[test]
    fn theorem1_limit_matches_composed_form(seed in any::<u64>()) {
        let m = admissible_channel(seed, 3);
        let l = generator(seed ^ 0x55, 3, 1.0);
        let r = peripheral_analysis(&m).unwrap();
        let lim = zeno_limit_theorem1(&m, &l, 1.0, &r).unwrap();
        let at5 = (lim.at(5).unwrap().matrix() - lim.composed(5).unwrap().matrix()).hs_norm();
        let c_hat = at5 / (r.gap_delta + 0.05).powi(5) + 1.0;
        for (n, diff) in lim.cross_check(&[5, 10, 20, 40]).unwrap() {
            prop_assert!(diff <= 1e-8 + c_hat * (r.gap_delta + 0.05).powi(n as i32), "n={}", n);
        }
    }

    #[test]
    fn zeno_product_preserves_trace(seed in any::<u64>(), n in 1usize..40) {
        let mut g = rng(seed);
        let m = random_cptp(3, 2, &mut g).unwrap();
        let l = generator(seed ^ 0xaa, 3, 2.0);
        let rho = random_density_matrix(3, &mut g);
        let out = zeno_product_apply(&m, &l, 1.0, n, &rho).unwrap();
        prop_assert!((out.state.trace().re - 1.0).abs() <= 1e-10);

        let kraus = random_kraus(3, 3, &mut g);
        let op = Superoperator::from_kraus(&kraus[..2]).unwrap();
        let out = zeno_product_apply(&op, &l, 1.0, n, &rho).unwrap();
        prop_assert!(out.state.trace().re <= 1.0 + 1e-10);
    }

    #[test]
    fn error_curve_is_eventually_monotone(seed in any::<u64>()) {
        let m = admissible_channel(seed, 3);
        let l = generator(seed ^ 0x77, 3, 1.0);
        let rho = random_density_matrix(3, &mut rng(seed ^ 0x99));
        let problem = ZenoProblem::new(m, l, 1.0, rho).unwrap();
        let grid: Vec<usize> = (2..=10).map(|k| 1usize << k).collect();
        let curve = error_curve(&problem, &grid, LimitMode::Theorem1).unwrap();
        let tail: Vec<f64> = curve.samples[curve.samples.len() - 5..].iter().map(|s| s.1).collect();
        prop_assert!(tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-6) + 1e-13), "{:?}", tail);
    }

    #[test]
    fn perturbation_series_within_remainder(seed in any::<u64>()) {
        let m = admissible_channel(seed, 3);
        let l = generator(seed ^ 0x33, 3, 0.3);
        let x = random_density_matrix(3, &mut rng(seed ^ 0x44));
        let r = perturbation_partial_sums(&m, &l, 64, &x, 3).unwrap();
        prop_assert!(r.holds);
        prop_assert!(r.residuals[3] <= r.remainder_bound);
    }

    #[test]
    fn survival_complement_decays_like_inverse_n(seed in any::<u64>()) {
        let pi = CMat::from_real_diag(&[1.0, 1.0, 0.0]);
        let l = generator(seed, 3, 1.0);
        let rho = CMat::from_real_diag(&[0.5, 0.5, 0.0]);
        let grid: Vec<usize> = (3..=9).map(|k| 1usize << k).collect();
        let r = survival_decomposition(&pi, &l, 1.0, &rho, &grid).unwrap();
        prop_assert!(r.holds, "{:?}", r);
        for &(n, _, pp) in &r.rows {
            prop_assert!(pp <= r.c_hat / n as f64 + 1e-15);
        }
    }

    #[test]
    fn chernoff_ratio_stays_below_one(seed in any::<u64>()) {
        let mut g = rng(seed);
        let k = random_cptp(3, 2, &mut g).unwrap();
        let x = random_density_matrix(3, &mut g);
        prop_assert!(chernoff_check(&k, &x, &[1, 2, 4, 8, 16, 32]).unwrap().max_ratio <= 1.0);
    }
}

proptest! {
    #![proptest_config(cases(8))]

    #[test]
    fn kraus_catalog_channels_are_cp_and_trace_non_increasing(t in 0.05f64..3.0, d in 2usize..10) {
        let ch = attenuator(t, &TruncationSpec::new(d).unwrap()).unwrap();
        let s = ch.superoperator();
        prop_assert!(s.choi_min_eigenvalue().unwrap() >= -1e-9);
        prop_assert!(s.trace_excess().unwrap() <= 1e-10);
    }

    #[test]
    fn attenuator_defect_shrinks_with_cutoff(t in 0.05f64..2.0) {
        let defects: Vec<f64> = [8usize, 16, 32]
            .iter()
            .map(|&d| attenuator(t, &TruncationSpec::new(d).unwrap()).unwrap().completeness_defect)
            .collect();
        let slack = 1e-14;
        prop_assert!(defects[1] <= defects[0] + slack && defects[2] <= defects[1] + slack, "{:?}", defects);
    }

    #[test]
    fn catalog_stationary_states_are_states(lambda in 0.1f64..0.8, r in 0.0f64..0.8, phi in 0.0f64..6.0) {
        let mu = 1.0;
        let d = 20;
        let trunc = TruncationSpec::new(d).unwrap();
        let q = qou_stationary_state(lambda, mu, d).unwrap();
        let jc = JcParams { mu, lambda, r, phi, ordering: JcOrdering::AntiNormal };
        let j = jaynes_cummings_stationary_state(&jc, d).unwrap();
        let (e, o) = two_photon_invariant_states(mu, lambda, d).unwrap();
        for s in [&q, &j, &e, &o] {
            prop_assert!(validate_state(s).is_ok());
        }
        let tail = 10.0 * (lambda / mu).powi(2).powi(d as i32 / 2) + 1e-13;
        let res = |l: Superoperator, s: &CMatrix| trace_norm(&l.apply(s)).unwrap();
        prop_assert!(res(qou_generator(lambda, mu, &trunc).unwrap().lindbladian().unwrap(), &q) <= 1e-8);
        prop_assert!(res(jaynes_cummings_generator(&jc, &trunc).unwrap().lindbladian().unwrap(), &j) <= 1e-7);
        let tp = two_photon_generator(0.3, mu, lambda, &trunc).unwrap().lindbladian().unwrap();
        prop_assert!(res(tp.clone(), &e) <= tail && res(tp, &o) <= tail);
    }
}

#[test]
fn depolarizing_is_admissible_for_every_listed_rate() {
    let sigma = random_density_matrix(3, &mut rng(9));
    for p in [0.1, 0.5, 0.9] {
        let r = peripheral_analysis(&depolarizing(p, &sigma).unwrap()).unwrap();
        assert!(r.admissible);
        assert!((r.gap_delta - (1.0 - p)).abs() < 1e-10);
    }
}
