use super::hermitian::hermitian_eigvals;
use super::matrix::CMat;
use super::svd::singular_values;
use crate::error::Result;
use crate::scalar::Real;

/// Schatten norms of a single matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Norms<T> {
    pub spectral: T,
    pub trace: T,
    pub hs: T,
}

pub fn norms<T: Real>(a: &CMat<T>) -> Result<Norms<T>> {
    let s = singular_values(a)?;
    Ok(Norms {
        spectral: s.first().copied().unwrap_or_else(T::zero),
        trace: s.iter().copied().sum(),
        hs: a.hs_norm(),
    })
}

fn numerically_hermitian<T: Real>(a: &CMat<T>) -> bool {
    a.is_square() && a.hermitian_defect() <= T::lit(16.0) * T::epsilon() * a.max_abs()
}

pub fn spectral_norm<T: Real>(a: &CMat<T>) -> Result<T> {
    if numerically_hermitian(a) && a.rows() > 0 {
        let v = hermitian_eigvals(a)?;
        return Ok(v[0].abs().max(v[v.len() - 1].abs()));
    }
    Ok(singular_values(a)?.first().copied().unwrap_or_else(T::zero))
}

/// Sum of singular values; Hermitian input goes through the eigensolver.
pub fn trace_norm<T: Real>(a: &CMat<T>) -> Result<T> {
    if numerically_hermitian(a) {
        return Ok(hermitian_eigvals(a)?.iter().map(|x| x.abs()).sum());
    }
    Ok(singular_values(a)?.iter().copied().sum())
}

/// Largest singular value by power iteration on A†A; useful for large structured matrices.
pub fn spectral_norm_power<T: Real>(a: &CMat<T>, rel_tol: T, max_iter: usize) -> T {
    let n = a.cols();
    if n == 0 {
        return T::zero();
    }
    let ah = a.adjoint();
    let mut v: Vec<_> = (0..n)
        .map(|i| num_complex::Complex::new(T::one() + T::lit(0.01) * T::from_usize_lossy(i % 7), T::lit(0.001) * T::from_usize_lossy(i % 3)))
        .collect();
    let mut prev = T::zero();
    for _ in 0..max_iter {
        let nv = super::matrix::vnorm(&v);
        if nv == T::zero() {
            return T::zero();
        }
        for z in v.iter_mut() {
            *z = *z / nv;
        }
        let w = ah.mul_vec(&a.mul_vec(&v));
        let est = super::matrix::vnorm(&w).sqrt();
        v = w;
        if (est - prev).abs() <= rel_tol * est {
            return est;
        }
        prev = est;
    }
    prev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn identity_norms() {
        let n = norms(&CMat::<f64>::identity(3)).unwrap();
        assert!((n.spectral - 1.0).abs() < 1e-15);
        assert!((n.trace - 3.0).abs() < 1e-14);
        assert!((n.hs - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rank_one_norms() {
        let n = norms(&CMat::<f64>::unit(2, 0, 1)).unwrap();
        assert_eq!((n.spectral, n.trace, n.hs), (1.0, 1.0, 1.0));
    }

    #[test]
    fn hermitian_shortcut_agrees_with_svd() {
        let a = CMat::<f64>::from_rows(&[
            vec![c(1.0, 0.0), c(0.5, -0.2), c(0.0, 0.3)],
            vec![c(0.5, 0.2), c(-2.0, 0.0), c(0.1, 0.0)],
            vec![c(0.0, -0.3), c(0.1, 0.0), c(0.25, 0.0)],
        ])
        .unwrap();
        let via_svd: f64 = singular_values(&a).unwrap().iter().sum();
        assert!((trace_norm(&a).unwrap() - via_svd).abs() < 1e-13);
        let s = singular_values(&a).unwrap()[0];
        assert!((spectral_norm(&a).unwrap() - s).abs() < 1e-13);
    }

    #[test]
    fn power_iteration_tracks_top_singular_value() {
        let a = CMat::<f64>::from_fn(12, 12, |i, j| c(1.0 / (1.0 + i as f64 + j as f64), 0.0));
        let s = singular_values(&a).unwrap()[0];
        assert!((spectral_norm_power(&a, 1e-14, 10_000) - s).abs() < 1e-10);
    }
}
