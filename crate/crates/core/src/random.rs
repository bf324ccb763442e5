//! Seeded random operators, states, channels and generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::linalg::{hermitian_eig, svd, vnorm, CMat};
use crate::semigroup::{GklsGenerator, Superoperator};
use crate::{CMatrix, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Complex Gaussian matrix with unit-variance entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMat::from_fn(rows, cols, |_, _| gauss(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    ginibre(d, d, rng).hermitian_part()
}

pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..d).map(|_| gauss(rng)).collect();
    let n = vnorm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// G G† / tr(G G†) for a square Ginibre G.
pub fn random_density_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(d, d, rng);
    let p = g.matmul(&g.adjoint());
    let t = p.trace().re;
    p.scale_re(1.0 / t).hermitian_part()
}

/// Columns orthonormalized by modified Gram-Schmidt.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(rows >= cols, "an isometry needs rows >= cols");
    let g = ginibre(rows, cols, rng);
    let mut q = CMat::zeros(rows, cols);
    for j in 0..cols {
        let mut v = g.column(j);
        for _ in 0..2 {
            for k in 0..j {
                let qk = q.column(k);
                let d = crate::linalg::dot(&qk, &v);
                for (vi, qi) in v.iter_mut().zip(&qk) {
                    *vi -= qi * d;
                }
            }
        }
        let n = vnorm(&v);
        let col: Vec<C64> = v.iter().map(|z| z / n).collect();
        q.set_column(j, &col);
    }
    q
}

pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    random_isometry(d, d, rng)
}

/// Kraus operators from a random Stinespring isometry ℂ^d → ℂ^d ⊗ ℂ^r.
pub fn random_kraus<R: Rng + ?Sized>(d: usize, kraus_count: usize, rng: &mut R) -> Vec<CMatrix> {
    let v = random_isometry(d * kraus_count, d, rng);
    (0..kraus_count)
        .map(|l| CMat::from_fn(d, d, |i, j| v[(l * d + i, j)]))
        .collect()
}

pub fn random_cptp<R: Rng + ?Sized>(d: usize, kraus_count: usize, rng: &mut R) -> Result<Superoperator> {
    Superoperator::from_kraus(&random_kraus(d, kraus_count, rng))
}

/// Random matrix with singular values clipped to at most one.
pub fn random_contraction<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<CMatrix> {
    let g = ginibre(d, d, rng);
    let dec = svd(&g)?;
    let s: Vec<f64> = dec.s.iter().map(|x| x.min(1.0)).collect();
    Ok(dec.u.matmul(&CMat::from_real_diag(&s)).matmul(&dec.v.adjoint()))
}

/// Random GKLS data with Gaussian H and Lindblad operators.
pub fn random_gkls<R: Rng + ?Sized>(d: usize, lindblad_count: usize, rng: &mut R) -> Result<GklsGenerator> {
    let h = random_hermitian(d, rng);
    let ls = (0..lindblad_count).map(|_| ginibre(d, d, rng)).collect();
    GklsGenerator::new(h, ls)
}

/// Random GKLS generator rescaled so the spectral norm proxy of 𝓛 equals `norm`.
pub fn random_gkls_normalized<R: Rng + ?Sized>(d: usize, lindblad_count: usize, norm: f64, rng: &mut R) -> Result<GklsGenerator> {
    let g = random_gkls(d, lindblad_count, rng)?;
    let current = g.lindbladian()?.spectral_norm_proxy()?;
    g.scaled(norm / current)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    Ok(hermitian_eig(m)?.values.first().copied().unwrap_or(0.0))
}
