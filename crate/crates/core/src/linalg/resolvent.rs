use num_complex::Complex;

use super::blocks::Blocks;
use super::lu::Lu;
use super::matrix::CMat;
use super::svd::singular_values;
use crate::error::{Result, ZenoError};
use crate::scalar::Real;

/// Distance to the spectrum below which `z − A` is treated as singular.
pub const SINGULAR_MARGIN: f64 = 1e-12;

/// Precomputed block structure of `A` for repeated resolvent solves.
#[derive(Clone, Debug)]
pub struct ResolventSolver<T: Real> {
    blocks: Blocks,
    parts: Vec<CMat<T>>,
}

impl<T: Real> ResolventSolver<T> {
    pub fn new(a: &CMat<T>) -> Result<Self> {
        a.require_square("resolvent")?;
        let blocks = Blocks::of(a);
        let parts = blocks.split(a);
        Ok(Self { blocks, parts })
    }

    /// (z − A)⁻¹
    pub fn at(&self, z: Complex<T>) -> Result<CMat<T>> {
        let mut out = Vec::with_capacity(self.parts.len());
        for b in &self.parts {
            out.push(block_resolvent(b, z)?);
        }
        Ok(self.blocks.assemble(&out))
    }
}

fn block_resolvent<T: Real>(a: &CMat<T>, z: Complex<T>) -> Result<CMat<T>> {
    let m = a.rows();
    let shifted = CMat::from_fn(m, m, |i, j| if i == j { z - a[(i, j)] } else { -a[(i, j)] });
    if m == 1 {
        let d = shifted[(0, 0)];
        if d.norm() <= T::lit(SINGULAR_MARGIN) {
            return Err(singular_err(z, d.norm()));
        }
        return Ok(CMat::diag(&[Complex::new(T::one(), T::zero()) / d]));
    }
    let lu = Lu::new(&shifted)?;
    if lu.pivot_ratio() < T::lit(1e-10) {
        let smin = singular_values(&shifted)?.last().copied().unwrap_or_else(T::zero);
        if smin <= T::lit(SINGULAR_MARGIN) {
            return Err(singular_err(z, smin));
        }
    }
    let r = lu.inverse();
    if !r.is_finite() {
        return Err(singular_err(z, T::zero()));
    }
    Ok(r)
}

fn singular_err<T: Real>(z: Complex<T>, smin: T) -> ZenoError {
    ZenoError::ResolventSingular {
        z: Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy()),
        min_singular_value: smin.to_f64_lossy(),
    }
}

/// (z − A)⁻¹ with singularity detection.
pub fn resolvent<T: Real>(a: &CMat<T>, z: Complex<T>) -> Result<CMat<T>> {
    ResolventSolver::new(a)?.at(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn zero_matrix() {
        let r = resolvent(&CMat::<f64>::zeros(3, 3), c(2.0, 0.0)).unwrap();
        assert!(r.approx_eq(&CMat::identity(3).scale_re(0.5), 1e-15));
    }

    #[test]
    fn diagonal_matrix() {
        let a = CMat::<f64>::from_real_diag(&[1.0, 0.5]);
        let r = resolvent(&a, c(2.0, 0.0)).unwrap();
        assert!(r.approx_eq(&CMat::from_real_diag(&[1.0, 2.0 / 3.0]), 1e-15));
    }

    #[test]
    fn spectrum_point_is_rejected_with_singular_value() {
        let a = CMat::<f64>::from_real_rows(&[&[1.0, 1.0], &[0.0, 2.0]]);
        match resolvent(&a, c(2.0, 0.0)) {
            Err(ZenoError::ResolventSingular { min_singular_value, .. }) => assert!(min_singular_value < 1e-12),
            other => panic!("expected singular error, got {other:?}"),
        }
    }
}
