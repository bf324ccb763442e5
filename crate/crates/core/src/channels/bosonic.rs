//! Bosonic GKLS generators on a truncated Fock space and their invariant states.

use serde::{Deserialize, Serialize};

use super::fock::{annihilation, creation, diag_fn, diagonal_state, TruncationSpec};
use crate::error::{Result, ZenoError};
use crate::semigroup::GklsGenerator;
use crate::CMatrix;

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ZenoError::Parameter(format!("{name} must be finite, got {v}")))
    }
}

fn rates_below(lambda: f64, mu: f64) -> Result<()> {
    finite("lambda", lambda)?;
    finite("mu", mu)?;
    if !(lambda >= 0.0 && lambda < mu) {
        return Err(ZenoError::Parameter(format!(
            "rates must satisfy 0 <= lambda < mu for a faithful invariant state, got lambda = {lambda}, mu = {mu}"
        )));
    }
    Ok(())
}

/// Quantum Ornstein-Uhlenbeck: L = {μa, λa†}, H = 0.
pub fn qou_generator(lambda: f64, mu: f64, trunc: &TruncationSpec) -> Result<GklsGenerator> {
    rates_below(lambda, mu)?;
    if lambda <= 0.0 {
        return Err(ZenoError::Parameter("qOU requires lambda > 0".into()));
    }
    trunc.validate()?;
    let a = trunc.build(annihilation).scale_re(mu);
    let ad = trunc.build(creation).scale_re(lambda);
    GklsGenerator::dissipative(vec![a, ad])
}

/// (1−ν) Σ νⁿ |n⟩⟨n| with ν = λ²/μ², renormalized on D levels.
pub fn qou_stationary_state(lambda: f64, mu: f64, d: usize) -> Result<CMatrix> {
    rates_below(lambda, mu)?;
    let nu = (lambda / mu).powi(2);
    Ok(diagonal_state(&(0..d).map(|n| nu.powi(n as i32)).collect::<Vec<_>>()))
}

/// Mass of the geometric law with ratio ν beyond the first D levels.
pub fn geometric_tail(nu: f64, d: usize) -> f64 {
    nu.powi(d as i32)
}

/// Operator ordering inside the sine coupling of the Jaynes-Cummings reservoir.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JcOrdering {
    /// R a† sin(φ√(aa†))/√(aa†)
    #[default]
    AntiNormal,
    /// R a† sin(φ√(a†a))/√(a†a), with value φ at the vacuum.
    Normal,
}

/// sin(φ√x)/√x with its limit φ at x = 0.
pub fn sinc_sqrt(phi: f64, x: f64) -> f64 {
    if x == 0.0 {
        phi
    } else {
        (phi * x.sqrt()).sin() / x.sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JcParams {
    pub mu: f64,
    pub lambda: f64,
    pub r: f64,
    pub phi: f64,
    #[serde(default)]
    pub ordering: JcOrdering,
}

impl JcParams {
    pub fn validate(&self) -> Result<()> {
        rates_below(self.lambda, self.mu)?;
        finite("R", self.r)?;
        finite("phi", self.phi)
    }
}

/// Jaynes-Cummings reservoir: L = {μa, λa†, R cos(φ√(aa†)), R a† sin(φ√·)/√·}.
pub fn jaynes_cummings_generator(p: &JcParams, trunc: &TruncationSpec) -> Result<GklsGenerator> {
    p.validate()?;
    trunc.validate()?;
    let (mu, lambda, r, phi) = (p.mu, p.lambda, p.r, p.phi);
    let a = trunc.build(annihilation).scale_re(mu);
    let ad = trunc.build(creation).scale_re(lambda);
    let cos = trunc.build(|n| diag_fn(n, |k| r * (phi * ((k + 1) as f64).sqrt()).cos()));
    let sin = trunc.build(|n| {
        let f = match p.ordering {
            JcOrdering::AntiNormal => diag_fn(n, |k| r * sinc_sqrt(phi, (k + 1) as f64)),
            JcOrdering::Normal => diag_fn(n, |k| r * sinc_sqrt(phi, k as f64)),
        };
        creation(n).matmul(&f)
    });
    GklsGenerator::dissipative(vec![a, ad, cos, sin])
}

/// π_n ∝ Π_{k≤n} (λ²k + R² sin²(φ√k)) / (μ²k).
pub fn jaynes_cummings_stationary_state(p: &JcParams, d: usize) -> Result<CMatrix> {
    p.validate()?;
    if p.ordering != JcOrdering::AntiNormal {
        return Err(ZenoError::Parameter("the product formula holds for the anti-normal ordering".into()));
    }
    let mut w = Vec::with_capacity(d);
    let mut acc = 1.0;
    w.push(acc);
    for k in 1..d {
        let kf = k as f64;
        acc *= (p.lambda.powi(2) * kf + (p.r * (p.phi * kf.sqrt()).sin()).powi(2)) / (p.mu.powi(2) * kf);
        w.push(acc);
    }
    Ok(diagonal_state(&w))
}

/// Emission-absorption: L = {ν a†a, μ a}, H = ξ(a + a†).
pub fn emission_absorption_generator(nu: f64, mu: f64, xi: f64, trunc: &TruncationSpec) -> Result<GklsGenerator> {
    finite("nu", nu)?;
    finite("mu", mu)?;
    finite("xi", xi)?;
    trunc.validate()?;
    let n = trunc.build(|k| creation(k).matmul(&annihilation(k))).scale_re(nu);
    let a = trunc.build(annihilation);
    let h = (&a + &a.adjoint()).scale_re(xi);
    GklsGenerator::new(h, vec![n, a.scale_re(mu)])
}

/// Two-photon exchange with b = a²: L = {μb, λb†}, H = κ b†b.
pub fn two_photon_generator(kappa: f64, mu: f64, lambda: f64, trunc: &TruncationSpec) -> Result<GklsGenerator> {
    finite("kappa", kappa)?;
    rates_below(lambda, mu)?;
    trunc.validate()?;
    let b = trunc.build(|k| annihilation(k).matmul(&annihilation(k)));
    let bd = trunc.build(|k| creation(k).matmul(&creation(k)));
    let h = trunc.build(|k| {
        let b = annihilation(k).matmul(&annihilation(k));
        b.adjoint().matmul(&b)
    });
    GklsGenerator::new(h.scale_re(kappa), vec![b.scale_re(mu), bd.scale_re(lambda)])
}

/// Even and odd invariant states, geometric in ν² = (λ/μ)² on each parity sector.
pub fn two_photon_invariant_states(mu: f64, lambda: f64, d: usize) -> Result<(CMatrix, CMatrix)> {
    rates_below(lambda, mu)?;
    let nu2 = (lambda / mu).powi(2);
    let sector = |parity: usize| -> Vec<f64> {
        (0..d)
            .map(|n| if n % 2 == parity { nu2.powi((n / 2) as i32) } else { 0.0 })
            .collect()
    };
    Ok((diagonal_state(&sector(0)), diagonal_state(&sector(1))))
}

/// Projector onto even (`parity` = 0) or odd Fock levels.
pub fn parity_projector(parity: usize, d: usize) -> CMatrix {
    diag_fn(d, |n| if n % 2 == parity % 2 { 1.0 } else { 0.0 })
}

/// tr(Π_e x) ρ_e + tr(Π_o x) ρ_o
pub fn two_photon_limit(x: &CMatrix, mu: f64, lambda: f64) -> Result<CMatrix> {
    let d = x.require_square("input")?;
    let (re, ro) = two_photon_invariant_states(mu, lambda, d)?;
    let pe = parity_projector(0, d).matmul(x).trace();
    let po = parity_projector(1, d).matmul(x).trace();
    Ok(&re.scale(pe) + &ro.scale(po))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace_norm;

    #[test]
    fn qou_rejects_lambda_above_mu() {
        let t = TruncationSpec::new(10).unwrap();
        assert!(matches!(qou_generator(1.0, 0.5, &t), Err(ZenoError::Parameter(_))));
        assert!(qou_generator(0.5, 0.5, &t).is_err());
    }

    #[test]
    fn qou_geometric_state_is_stationary() {
        let d = 12;
        let l = qou_generator(0.5, 1.0, &TruncationSpec::new(d).unwrap()).unwrap().lindbladian().unwrap();
        let rho = qou_stationary_state(0.5, 1.0, d).unwrap();
        assert!(trace_norm(&l.apply(&rho)).unwrap() < 1e-12);
    }

    #[test]
    fn vacuum_limit_of_sine_coupling() {
        assert_eq!(sinc_sqrt(0.7, 0.0), 0.7);
        assert!((sinc_sqrt(0.7, 1e-12) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn jc_state_is_stationary() {
        let p = JcParams { mu: 1.0, lambda: 0.5, r: 0.3, phi: 1.0, ordering: JcOrdering::AntiNormal };
        let d = 14;
        let l = jaynes_cummings_generator(&p, &TruncationSpec::new(d).unwrap()).unwrap().lindbladian().unwrap();
        let rho = jaynes_cummings_stationary_state(&p, d).unwrap();
        assert!(trace_norm(&l.apply(&rho)).unwrap() < 1e-12);
    }

    #[test]
    fn two_photon_parity_states_are_stationary() {
        let d = 10;
        let l = two_photon_generator(0.4, 1.0, 0.5, &TruncationSpec::new(d).unwrap())
            .unwrap()
            .lindbladian()
            .unwrap();
        let (re, ro) = two_photon_invariant_states(1.0, 0.5, d).unwrap();
        assert!(trace_norm(&l.apply(&re)).unwrap() < 1e-12);
        assert!(trace_norm(&l.apply(&ro)).unwrap() < 1e-12);
    }

    #[test]
    fn emission_absorption_is_trace_preserving() {
        let l = emission_absorption_generator(1.0, 1.0, 0.01, &TruncationSpec::new(8).unwrap())
            .unwrap()
            .lindbladian()
            .unwrap();
        assert!(l.dual_identity().max_abs() < 1e-12);
    }
}
