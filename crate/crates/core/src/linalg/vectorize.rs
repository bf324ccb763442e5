//! Column-stacking vectorization: |i⟩⟨j| ↦ e_{j·d + i}, so vec(AXB) = (Bᵀ ⊗ A) vec(X).

use num_complex::Complex;

use super::matrix::CMat;
use crate::error::{Result, ZenoError};
use crate::scalar::Real;

/// Index of the matrix unit |i⟩⟨j| in the stacked vector.
#[inline]
pub fn vec_index(d: usize, i: usize, j: usize) -> usize {
    j * d + i
}

pub fn vec<T: Real>(x: &CMat<T>) -> Vec<Complex<T>> {
    let (r, c) = x.shape();
    let mut out = Vec::with_capacity(r * c);
    for j in 0..c {
        for i in 0..r {
            out.push(x[(i, j)]);
        }
    }
    out
}

/// Inverse of [`vec`] for a square `d×d` target.
pub fn unvec<T: Real>(v: &[Complex<T>], d: usize) -> Result<CMat<T>> {
    if v.len() != d * d {
        return Err(ZenoError::Dimension(format!(
            "vector of length {} is not a {d}x{d} matrix",
            v.len()
        )));
    }
    Ok(CMat::from_fn(d, d, |i, j| v[vec_index(d, i, j)]))
}

/// Matrix of X ↦ A·X·B.
pub fn sandwich<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    b.transpose().kron(a)
}

/// Matrix of X ↦ A·X.
pub fn left_mul<T: Real>(a: &CMat<T>) -> CMat<T> {
    CMat::identity(a.cols()).kron(a)
}

/// Matrix of X ↦ X·B.
pub fn right_mul<T: Real>(b: &CMat<T>) -> CMat<T> {
    b.transpose().kron(&CMat::identity(b.rows()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn sample(r: usize, cc: usize, seed: f64) -> CMat<f64> {
        CMat::from_fn(r, cc, |i, j| c((seed * (i as f64 + 1.3) * (j as f64 + 0.7)).sin(), (seed + i as f64 - 2.0 * j as f64).cos()))
    }

    #[test]
    fn unit_maps_to_column_stacked_index() {
        let x = CMat::<f64>::unit(3, 2, 1);
        let v = vec(&x);
        assert_eq!(v.iter().position(|z| z.re == 1.0), Some(vec_index(3, 2, 1)));
        assert_eq!(vec_index(3, 2, 1), 5);
    }

    #[test]
    fn sandwich_identity_holds() {
        let (a, x, b) = (sample(3, 3, 0.3), sample(3, 3, 1.1), sample(3, 3, 2.7));
        let lhs = vec(&a.matmul(&x).matmul(&b));
        let rhs = sandwich(&a, &b).mul_vec(&vec(&x));
        for (l, r) in lhs.iter().zip(&rhs) {
            assert!((l - r).norm() < 1e-13);
        }
        let lx = left_mul(&a).mul_vec(&vec(&x));
        let xr = right_mul(&b).mul_vec(&vec(&x));
        assert!(unvec(&lx, 3).unwrap().approx_eq(&a.matmul(&x), 1e-13));
        assert!(unvec(&xr, 3).unwrap().approx_eq(&x.matmul(&b), 1e-13));
    }

    #[test]
    fn unvec_rejects_bad_length() {
        assert!(unvec::<f64>(&[Complex::new(1.0, 0.0); 5], 2).is_err());
    }
}
