use std::f64::consts::PI;

use super::fock::TruncationSpec;
use crate::error::{Result, ZenoError};
use crate::linalg::{hermitian_eigvals, vec, vec_index, CMat};
use crate::semigroup::{GklsGenerator, Superoperator};
use crate::{CMatrix, C64};

pub const STATE_TOL: f64 = 1e-10;

/// Checks that `rho` is a density matrix: Hermitian, PSD and unit trace to 1e-10.
pub fn validate_state(rho: &CMatrix) -> Result<()> {
    if !rho.is_square() {
        return Err(ZenoError::State(format!("state must be square, got {}x{}", rho.rows(), rho.cols())));
    }
    let herm = rho.hermitian_defect();
    if herm > STATE_TOL {
        return Err(ZenoError::State(format!("state is not Hermitian (defect {herm:.3e})")));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(ZenoError::State(format!("state trace must be 1, got {:.12}", tr.re)));
    }
    let min = hermitian_eigvals(rho)?.first().copied().unwrap_or(0.0);
    if min < -STATE_TOL {
        return Err(ZenoError::State(format!("state is not positive semidefinite (min eigenvalue {min:.3e})")));
    }
    Ok(())
}

/// ρ ↦ tr(ρ)σ
pub fn trace_replacement(sigma: &CMatrix) -> Result<Superoperator> {
    let d = sigma.require_square("replacement state")?;
    let s = vec(sigma);
    let mut m = CMat::zeros(d * d, d * d);
    for k in 0..d {
        let c = vec_index(d, k, k);
        for (r, v) in s.iter().enumerate() {
            m[(r, c)] = *v;
        }
    }
    Superoperator::new(d, m)
}

/// Φ_p(ρ) = (1−p)ρ + p·tr(ρ)σ
pub fn depolarizing(p: f64, sigma: &CMatrix) -> Result<Superoperator> {
    if !(0.0..1.0).contains(&p) {
        return Err(ZenoError::Parameter(format!("depolarizing parameter must lie in [0, 1), got {p}")));
    }
    validate_state(sigma)?;
    let d = sigma.rows();
    let repl = trace_replacement(sigma)?;
    Superoperator::new(d, &CMat::identity(d * d).scale_re(1.0 - p) + &repl.matrix().scale_re(p))
}

/// The spectral projector of Φ_p at eigenvalue 1.
pub fn depolarizing_limit_projector(sigma: &CMatrix) -> Result<Superoperator> {
    validate_state(sigma)?;
    trace_replacement(sigma)
}

/// γ(Φ_p − id)
pub fn depolarizing_generator(gamma: f64, p: f64, sigma: &CMatrix) -> Result<Superoperator> {
    let phi = depolarizing(p, sigma)?;
    Ok(phi.sub(&Superoperator::identity(sigma.rows())).scale_re(gamma))
}

/// Maximally mixed state I/d.
pub fn maximally_mixed(d: usize) -> CMatrix {
    CMat::identity(d).scale_re(1.0 / d as f64)
}

/// Oscillator energies ω(n + ½) on the diagonal.
pub fn oscillator_hamiltonian(omega: f64, d: usize) -> CMatrix {
    super::fock::diag_fn(d, |n| omega * (n as f64 + 0.5))
}

/// ρ ↦ UρU† with U = e^{−itH}, H the truncated oscillator and t = 2π/(kω).
pub fn oscillator_conjugation(k: u32, omega: f64, trunc: &TruncationSpec) -> Result<Superoperator> {
    if k == 0 {
        return Err(ZenoError::Parameter("k must be a positive integer".into()));
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(ZenoError::Parameter(format!("frequency must be positive, got {omega}")));
    }
    trunc.validate()?;
    let t = 2.0 * PI / (k as f64 * omega);
    let phases: Vec<C64> = (0..trunc.dim)
        .map(|n| C64::from_polar(1.0, -t * omega * (n as f64 + 0.5)))
        .collect();
    Superoperator::conjugation(&CMat::diag(&phases))
}

/// Mask superoperator keeping ⟨n|ρ|m⟩ with n − m ≡ j (mod k).
pub fn oscillator_mask_projector(k: u32, j: u32, d: usize) -> Superoperator {
    let k = k as i64;
    let mut m = CMat::zeros(d * d, d * d);
    for col in 0..d {
        for row in 0..d {
            if (row as i64 - col as i64).rem_euclid(k) == j as i64 % k {
                let idx = vec_index(d, row, col);
                m[(idx, idx)] = C64::new(1.0, 0.0);
            }
        }
    }
    Superoperator::new(d, m).expect("square by construction")
}

/// e^{−2πij/k}, the eigenvalue carried by the mask with index j.
pub fn oscillator_eigenvalue(k: u32, j: u32) -> C64 {
    C64::from_polar(1.0, -2.0 * PI * j as f64 / k as f64)
}

/// 𝓛ρ = −i[H, ρ]
pub fn hamiltonian_generator(h: &CMatrix) -> Result<Superoperator> {
    GklsGenerator::new(h.clone(), vec![])?.lindbladian()
}

/// ρ ↦ πρπ for the projector onto the listed basis levels.
pub fn level_projection(levels: &[usize], d: usize) -> Result<Superoperator> {
    if levels.iter().any(|&l| l >= d) {
        return Err(ZenoError::Parameter(format!("projection level out of range for dimension {d}")));
    }
    let mut pi = CMat::zeros(d, d);
    for &l in levels {
        pi[(l, l)] = C64::new(1.0, 0.0);
    }
    Superoperator::sandwich(&pi, &pi)
}
