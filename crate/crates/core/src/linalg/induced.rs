//! Estimates of the trace-norm induced norm of a superoperator matrix.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::matrix::{vnorm, CMat};
use super::norms::trace_norm;
use super::svd::svd;
use super::vectorize::{unvec, vec};
use crate::error::{Result, ZenoError};
use crate::scalar::{czero, Real};

pub const DEFAULT_SAMPLES: usize = 512;
pub const ASCENT_STEPS: usize = 50;

/// Result of the pure-state search.
#[derive(Clone, Debug)]
pub struct InducedEstimate<T: Real> {
    pub value: T,
    pub best_sample: T,
    pub witness: Vec<Complex<T>>,
}

fn check_shape<T: Real>(s: &CMat<T>, d: usize) -> Result<()> {
    if s.rows() != d * d || s.cols() != d * d {
        return Err(ZenoError::Dimension(format!(
            "superoperator matrix {}x{} does not act on {d}x{d} operators",
            s.rows(),
            s.cols()
        )));
    }
    Ok(())
}

fn apply<T: Real>(s: &CMat<T>, d: usize, x: &CMat<T>) -> CMat<T> {
    unvec(&s.mul_vec(&vec(x)), d).expect("shape checked")
}

fn objective<T: Real>(s: &CMat<T>, d: usize, psi: &[Complex<T>]) -> T {
    trace_norm(&apply(s, d, &CMat::outer(psi, psi))).unwrap_or_else(|_| T::zero())
}

/// Haar-distributed pure states from a seeded stream.
pub fn random_pure_states<T: Real>(d: usize, count: usize, seed: u64) -> Vec<Vec<Complex<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut v: Vec<Complex<T>> = (0..d)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex::new(T::lit(re), T::lit(im))
                })
                .collect();
            let n = vnorm(&v);
            for z in v.iter_mut() {
                *z = *z / n;
            }
            v
        })
        .collect()
}

/// Projected gradient ascent of ψ ↦ ‖S(|ψ⟩⟨ψ|)‖₁ from a starting state.
fn ascend<T: Real>(s: &CMat<T>, sh: &CMat<T>, d: usize, start: &[Complex<T>], steps: usize) -> (T, Vec<Complex<T>>) {
    let mut psi = start.to_vec();
    let mut best = objective(s, d, &psi);
    let mut eta = T::lit(0.5);
    for _ in 0..steps {
        let y = apply(s, d, &CMat::outer(&psi, &psi));
        let Ok(dec) = svd(&y) else { break };
        let w = dec.u.matmul(&dec.v.submatrix(&(0..d).collect::<Vec<_>>(), &(0..dec.s.len()).collect::<Vec<_>>()).adjoint());
        let g = apply(sh, d, &w);
        let herm = &g + &g.adjoint();
        let grad = herm.mul_vec(&psi);
        if vnorm(&grad) == T::zero() {
            break;
        }
        let mut improved = false;
        for _ in 0..8 {
            let mut cand: Vec<Complex<T>> = psi.iter().zip(&grad).map(|(p, g)| *p + *g * eta).collect();
            let n = vnorm(&cand);
            for z in cand.iter_mut() {
                *z = *z / n;
            }
            let val = objective(s, d, &cand);
            if val > best {
                best = val;
                psi = cand;
                eta = eta * T::lit(1.5);
                improved = true;
                break;
            }
            eta = eta * T::lit(0.5);
        }
        if !improved {
            break;
        }
    }
    (best, psi)
}

/// Lower bound on sup ‖S(ρ)‖₁ over pure ρ; exact on the evaluated states and seed-deterministic.
pub fn induced_trace_norm_estimate<T: Real>(s: &CMat<T>, d: usize, sample_count: usize, seed: u64) -> Result<InducedEstimate<T>> {
    check_shape(s, d)?;
    if d == 0 {
        return Ok(InducedEstimate {
            value: T::zero(),
            best_sample: T::zero(),
            witness: Vec::new(),
        });
    }
    let states = random_pure_states::<T>(d, sample_count.max(1), seed);
    let values: Vec<T> = states.par_iter().map(|psi| objective(s, d, psi)).collect();
    let mut best_idx = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best_idx] {
            best_idx = i;
        }
    }
    let best_sample = values[best_idx];
    if best_sample == T::zero() {
        return Ok(InducedEstimate {
            value: T::zero(),
            best_sample,
            witness: vec![czero(); d],
        });
    }
    let sh = s.adjoint();
    let (value, witness) = ascend(s, &sh, d, &states[best_idx], ASCENT_STEPS);
    Ok(InducedEstimate {
        value: value.max(best_sample),
        best_sample,
        witness,
    })
}

pub fn induced_trace_norm_lb<T: Real>(s: &CMat<T>, d: usize, sample_count: usize, seed: u64) -> Result<T> {
    Ok(induced_trace_norm_estimate(s, d, sample_count, seed)?.value)
}

/// Rigorous upper bound √d·‖S‖_{2→2} on the trace-norm induced norm.
pub fn induced_trace_norm_ub<T: Real>(s: &CMat<T>, d: usize) -> Result<T> {
    check_shape(s, d)?;
    Ok(T::from_usize_lossy(d).sqrt() * super::norms::spectral_norm(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn identity_has_unit_norm() {
        let s = CMat::<f64>::identity(9);
        let v = induced_trace_norm_lb(&s, 3, 64, 1).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_map_has_zero_norm() {
        assert_eq!(induced_trace_norm_lb(&CMat::<f64>::zeros(4, 4), 2, 16, 1).unwrap(), 0.0);
    }

    #[test]
    fn deterministic_given_seed() {
        let s = CMat::<f64>::from_fn(4, 4, |i, j| c((i as f64 - j as f64) * 0.3, (i * j) as f64 * 0.1));
        let a = induced_trace_norm_lb(&s, 2, 100, 42).unwrap();
        let b = induced_trace_norm_lb(&s, 2, 100, 42).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!(a <= induced_trace_norm_ub(&s, 2).unwrap() + 1e-12);
    }

    #[test]
    fn ascent_reaches_transpose_maximum() {
        // X ↦ Xᵀ has induced 1→1 norm 1 on pure states.
        let mut s = CMat::<f64>::zeros(9, 9);
        for i in 0..3 {
            for j in 0..3 {
                s[(i * 3 + j, j * 3 + i)] = c(1.0, 0.0);
            }
        }
        let v = induced_trace_norm_lb(&s, 3, 8, 3).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }
}
