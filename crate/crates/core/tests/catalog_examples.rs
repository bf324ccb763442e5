//! Worked examples from the catalog, checked against their stated closed forms.

use zeno_core::channels::{
    attenuator, coherent_state, fock_projector, hs_embed, ket, oscillator_conjugation, oscillator_eigenvalue,
    oscillator_mask_projector, qou_generator, qou_stationary_state, two_photon_generator, two_photon_limit,
    volterra_contraction, TruncationSpec,
};
use zeno_core::linalg::{trace_norm, CMat};
use zeno_core::random::{random_density_matrix, rng};
use zeno_core::semigroup::{evolve, GklsGenerator};
use zeno_core::spectral::peripheral_analysis;
use zeno_core::{CMatrix, C64};

fn pure(amps: &[C64]) -> CMatrix {
    CMat::outer(amps, amps)
}

#[test]
fn attenuator_is_a_semigroup() {
    let d = 16;
    let trunc = TruncationSpec::new(d).unwrap();
    let (s, t) = (0.2, 0.45);
    let lhs = attenuator(s, &trunc).unwrap().superoperator().compose(&attenuator(t, &trunc).unwrap().superoperator());
    let rhs = attenuator(s + t, &trunc).unwrap().superoperator();
    let mut g = rng(21);
    for _ in 0..5 {
        let low = random_density_matrix(d / 2, &mut g);
        let rho = CMat::from_fn(d, d, |i, j| if i < d / 2 && j < d / 2 { low[(i, j)] } else { C64::new(0.0, 0.0) });
        assert!(trace_norm(&(&lhs.apply(&rho) - &rhs.apply(&rho))).unwrap() <= 1e-8);
    }
}

#[test]
fn attenuator_maps_coherent_states_to_coherent_states() {
    let d = 40;
    let t = 0.6;
    let alpha = C64::new(1.2, -0.9);
    assert!(alpha.norm_sqr() <= d as f64 / 4.0);
    let input = coherent_state(alpha, d);
    let output = coherent_state(alpha * (-t / 2.0f64).exp(), d);
    let image = attenuator(t, &TruncationSpec::new(d).unwrap()).unwrap().apply(&pure(&input.amplitudes));
    let err = trace_norm(&(&image - &pure(&output.amplitudes))).unwrap();
    assert!(err <= 1e-6 + input.tail_mass, "{err}");
}

#[test]
fn two_photon_flow_relaxes_onto_parity_states() {
    let (mu, lambda, d) = (1.0, 0.5, 24);
    let l = two_photon_generator(0.4, mu, lambda, &TruncationSpec::new(d).unwrap()).unwrap().lindbladian().unwrap();
    let mut psi = vec![C64::new(0.0, 0.0); d];
    psi[1] = C64::new(0.6, 0.0);
    psi[4] = C64::new(0.0, 0.8);
    let x = pure(&psi);
    let late = evolve(&l, 60.0).unwrap().apply(&x);
    let limit = two_photon_limit(&x, mu, lambda).unwrap();
    assert!(trace_norm(&(&late - &limit)).unwrap() <= 1e-5);
}

#[test]
fn qou_embedded_generator_is_self_adjoint() {
    let (lambda, mu, d) = (0.5, 1.0, 20);
    let l = qou_generator(lambda, mu, &TruncationSpec::new(d).unwrap()).unwrap().lindbladian().unwrap();
    let e = hs_embed(&l.adjoint(), &qou_stationary_state(lambda, mu, d).unwrap()).unwrap();
    assert!(e.self_adjoint_defect <= 1e-8, "{}", e.self_adjoint_defect);
    assert!(e.dissipativity <= 1e-8);
}

#[test]
fn volterra_norm_approaches_one() {
    for g in [64usize, 256, 1024] {
        let demo = volterra_contraction(g).unwrap();
        assert!((demo.norm - 1.0).abs() <= 10.0 * demo.h, "g={g} norm={}", demo.norm);
    }
}

#[test]
fn qubit_effective_generator_loses_trace() {
    let k = CMat::identity(2).scale_re(-0.5);
    let l0 = fock_projector(0, 2);
    let l1 = CMat::outer(&ket(0, 2), &ket(1, 2));
    let g = GklsGenerator::from_k(k, vec![l0, l1]).unwrap();
    assert!(g.constraint_residual() <= 1e-15);
    let l = g.lindbladian().unwrap();
    let pi = fock_projector(1, 2);
    let p = zeno_core::semigroup::Superoperator::sandwich(&pi, &pi).unwrap();
    let eff = p.compose(&l).compose(&p);
    assert!((eff.apply(&pi).trace().re + 1.0).abs() <= 1e-15);
}

#[test]
fn oscillator_masks_at_k4() {
    let d = 8;
    let m = oscillator_conjugation(4, 1.0, &TruncationSpec::new(d).unwrap()).unwrap();
    let r = peripheral_analysis(&m).unwrap();
    assert_eq!(r.peripheral.len(), 4);
    for j in 0..4 {
        let lambda = oscillator_eigenvalue(4, j);
        let idx = r.peripheral.iter().position(|p| (p.value - lambda).norm() < 1e-12).unwrap();
        let mask = oscillator_mask_projector(4, j, d);
        assert!(r.projector(idx).unwrap().matrix().max_diff(mask.matrix()) <= 1e-12);
        assert!(r.peripheral[idx].nilpotent_norm <= 1e-10);
    }
}
