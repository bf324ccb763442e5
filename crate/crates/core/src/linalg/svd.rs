//! One-sided Jacobi singular value decomposition.

use num_complex::Complex;

use super::blocks::Blocks;
use super::matrix::CMat;
use crate::error::{Result, ZenoError};
use crate::scalar::{czero, Real};

/// Thin SVD `A = U·diag(s)·V†`, singular values descending.
///
/// `V` is always a full unitary of size `cols×cols`. Columns of `U` that belong
/// to exactly zero singular values are left zero.
#[derive(Clone, Debug)]
pub struct Svd<T: Real> {
    pub u: CMat<T>,
    pub s: Vec<T>,
    pub v: CMat<T>,
}

const MAX_SWEEPS: usize = 80;

fn col_dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(czero(), |acc, (x, y)| acc + x.conj() * y)
}

fn col_sqr<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum()
}

fn rotate<T: Real>(p: &mut [Complex<T>], q: &mut [Complex<T>], c: T, s: T, phase: Complex<T>) {
    for (x, y) in p.iter_mut().zip(q.iter_mut()) {
        let yq = *y * phase;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

type Columns<T> = Vec<Vec<Complex<T>>>;

/// Returns (columns of W = A·V, columns of V or empty).
fn jacobi_columns<T: Real>(a: &CMat<T>, want_v: bool) -> Result<(Columns<T>, Columns<T>)> {
    let (m, n) = a.shape();
    let mut w: Columns<T> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Columns<T> = if want_v {
        (0..n)
            .map(|j| {
                let mut e = vec![czero(); n];
                e[j] = Complex::new(T::one(), T::zero());
                e
            })
            .collect()
    } else {
        Vec::new()
    };
    let tol = T::epsilon() * T::from_usize_lossy(m.max(1)).sqrt();
    let mut norms: Vec<T> = w.iter().map(|c| col_sqr(c)).collect();
    for sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        let mut worst = T::zero();
        // columns at rounding level of the whole matrix count as zero
        let total: T = norms.iter().copied().fold(T::zero(), |a, b| a + b);
        let floor = T::epsilon() * T::epsilon() * total;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha <= floor || beta <= floor {
                    continue;
                }
                let gamma = col_dot(&w[p], &w[q]);
                let g = gamma.norm();
                let scale = (alpha * beta).sqrt();
                if g <= tol * scale {
                    continue;
                }
                worst = worst.max(g / scale);
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let t = if zeta == T::zero() {
                    T::one()
                } else {
                    zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = w.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s, phase);
                norms[p] = col_sqr(&lo[p]);
                norms[q] = col_sqr(&hi[0]);
                if want_v {
                    let (lo, hi) = v.split_at_mut(q);
                    rotate(&mut lo[p], &mut hi[0], c, s, phase);
                }
            }
        }
        if !rotated {
            return Ok((w, v));
        }
        if sweep + 1 == MAX_SWEEPS {
            return Err(ZenoError::NoConvergence {
                algorithm: "Jacobi SVD",
                iterations: MAX_SWEEPS,
                residual: worst.to_f64_lossy(),
            });
        }
    }
    Ok((w, v))
}

pub fn svd<T: Real>(a: &CMat<T>) -> Result<Svd<T>> {
    if !a.is_finite() {
        return Err(ZenoError::Dimension("SVD of non-finite input".into()));
    }
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.adjoint())?;
        return Ok(Svd {
            u: t.v.submatrix(&(0..m).collect::<Vec<_>>(), &(0..t.s.len()).collect::<Vec<_>>()),
            s: t.s,
            v: full_from_thin(&t.u, n),
        });
    }
    let (w, v) = jacobi_columns(a, true)?;
    let s: Vec<T> = w.iter().map(|c| col_sqr(c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[j].partial_cmp(&s[i]).unwrap_or(std::cmp::Ordering::Equal));
    let mut u = CMat::zeros(m, n);
    let mut vm = CMat::zeros(n, n);
    let mut sv = Vec::with_capacity(n);
    for (c, &k) in order.iter().enumerate() {
        sv.push(s[k]);
        if s[k] > T::zero() {
            let col: Vec<_> = w[k].iter().map(|z| *z / s[k]).collect();
            u.set_column(c, &col);
        }
        vm.set_column(c, &v[k]);
    }
    Ok(Svd { u, s: sv, v: vm })
}

/// Completes orthonormal columns to a full unitary by Gram-Schmidt on unit vectors.
fn full_from_thin<T: Real>(thin: &CMat<T>, n: usize) -> CMat<T> {
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
    for j in 0..thin.cols() {
        let c = thin.column(j);
        if col_sqr(&c) > T::lit(0.5) {
            cols.push(c);
        }
    }
    let mut e = 0;
    while cols.len() < n && e < n {
        let mut x = vec![czero::<T>(); n];
        x[e] = Complex::new(T::one(), T::zero());
        for _ in 0..2 {
            for c in &cols {
                let d = col_dot(c, &x);
                for (xi, ci) in x.iter_mut().zip(c) {
                    *xi = *xi - *ci * d;
                }
            }
        }
        let nrm = col_sqr(&x).sqrt();
        if nrm > T::lit(1e-3) {
            cols.push(x.iter().map(|z| *z / nrm).collect());
        }
        e += 1;
    }
    let mut out = CMat::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}

/// Singular values in descending order; decoupled blocks are handled separately.
pub fn singular_values<T: Real>(a: &CMat<T>) -> Result<Vec<T>> {
    if !a.is_finite() {
        return Err(ZenoError::Dimension("SVD of non-finite input".into()));
    }
    let mut out = Vec::new();
    if a.is_square() && a.rows() > 0 {
        let blocks = Blocks::of(a);
        for b in blocks.split(a) {
            out.extend(dense_singular_values(&b)?);
        }
    } else {
        out = dense_singular_values(a)?;
    }
    out.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

fn dense_singular_values<T: Real>(a: &CMat<T>) -> Result<Vec<T>> {
    if a.rows() == 1 && a.cols() == 1 {
        return Ok(vec![a[(0, 0)].norm()]);
    }
    let src = if a.rows() < a.cols() { a.adjoint() } else { a.clone() };
    let (w, _) = jacobi_columns(&src, false)?;
    Ok(w.iter().map(|c| col_sqr(c).sqrt()).collect())
}
