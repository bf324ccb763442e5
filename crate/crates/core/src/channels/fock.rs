//! Single-mode Fock-space operators on the lowest D number states.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};
use crate::linalg::CMat;
use crate::{CMatrix, C64};

/// Extra levels used while building operators before cropping to D.
pub const PADDING: usize = 4;
pub const DEFAULT_LEAKAGE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub dim: usize,
    #[serde(default = "default_leakage")]
    pub leakage_tol: f64,
}

fn default_leakage() -> f64 {
    DEFAULT_LEAKAGE_TOL
}

impl TruncationSpec {
    pub fn new(dim: usize) -> Result<Self> {
        Self::with_leakage(dim, DEFAULT_LEAKAGE_TOL)
    }

    pub fn with_leakage(dim: usize, leakage_tol: f64) -> Result<Self> {
        let t = Self { dim, leakage_tol };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(ZenoError::Parameter(format!("Fock cutoff must be at least 2, got {}", self.dim)));
        }
        if !(self.leakage_tol >= 0.0) {
            return Err(ZenoError::Parameter("leakage tolerance must be nonnegative".into()));
        }
        Ok(())
    }

    /// Builds at D + padding and crops to D.
    pub fn build(&self, f: impl Fn(usize) -> CMatrix) -> CMatrix {
        f(self.dim + PADDING).crop(self.dim)
    }
}

/// a|n⟩ = √n |n−1⟩
pub fn annihilation(d: usize) -> CMatrix {
    let mut a = CMat::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

pub fn creation(d: usize) -> CMatrix {
    annihilation(d).adjoint()
}

pub fn number(d: usize) -> CMatrix {
    diag_fn(d, |n| n as f64)
}

pub fn diag_fn(d: usize, f: impl Fn(usize) -> f64) -> CMatrix {
    let v: Vec<f64> = (0..d).map(f).collect();
    CMat::from_real_diag(&v)
}

pub fn ket(n: usize, d: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); d];
    v[n] = C64::new(1.0, 0.0);
    v
}

/// |n⟩⟨n|
pub fn fock_projector(n: usize, d: usize) -> CMatrix {
    CMat::unit(d, n, n)
}

/// Diagonal state from (unnormalized) populations, normalized to unit trace.
pub fn diagonal_state(weights: &[f64]) -> CMatrix {
    let total: f64 = weights.iter().sum();
    CMat::from_real_diag(&weights.iter().map(|w| w / total).collect::<Vec<_>>())
}

/// Coherent-state vector e^{−|α|²/2} Σ αᵐ/√(m!) |m⟩ with its tail mass beyond D.
#[derive(Clone, Debug)]
pub struct CoherentState {
    pub amplitudes: Vec<C64>,
    pub tail_mass: f64,
    pub renormalized: bool,
}

pub const COHERENT_TAIL_TOL: f64 = 1e-12;

pub fn coherent_state(alpha: C64, d: usize) -> CoherentState {
    let mut amps = Vec::with_capacity(d);
    let mut term = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for m in 0..d {
        if m > 0 {
            term = term * alpha / (m as f64).sqrt();
        }
        amps.push(term);
    }
    let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let tail_mass = (1.0 - kept).max(0.0);
    let renormalized = tail_mass > COHERENT_TAIL_TOL;
    if renormalized {
        let s = kept.sqrt();
        for z in amps.iter_mut() {
            *z /= s;
        }
    }
    CoherentState {
        amplitudes: amps,
        tail_mass,
        renormalized,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_commutator_away_from_the_edge() {
        let d = 8;
        let a = annihilation(d);
        let comm = a.commutator(&creation(d));
        for n in 0..d - 1 {
            assert!((comm[(n, n)].re - 1.0).abs() < 1e-14);
        }
        assert!(a.adjoint().matmul(&a).approx_eq(&number(d), 1e-14));
    }

    #[test]
    fn padding_fixes_the_top_level_of_products() {
        let t = TruncationSpec::new(5).unwrap();
        let aad = t.build(|n| annihilation(n).matmul(&creation(n)));
        assert!((aad[(4, 4)].re - 5.0).abs() < 1e-14);
        let naive = annihilation(5).matmul(&creation(5));
        assert_eq!(naive[(4, 4)].re, 0.0);
    }

    #[test]
    fn coherent_state_is_an_eigenvector_of_a() {
        let alpha = C64::new(0.7, -0.4);
        let d = 40;
        let psi = coherent_state(alpha, d);
        assert!(!psi.renormalized);
        let apsi = annihilation(d).mul_vec(&psi.amplitudes);
        for m in 0..d - 1 {
            assert!((apsi[m] - alpha * psi.amplitudes[m]).norm() < 1e-12);
        }
    }

    #[test]
    fn truncated_coherent_state_is_renormalized() {
        let psi = coherent_state(C64::new(3.0, 0.0), 6);
        assert!(psi.renormalized && psi.tail_mass > 0.1);
        let n: f64 = psi.amplitudes.iter().map(|z| z.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cutoff_below_two_is_rejected() {
        assert!(TruncationSpec::new(1).is_err());
    }
}
