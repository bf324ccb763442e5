//! Hermitian eigensolver: Householder tridiagonalization followed by implicit QL.

use num_complex::Complex;

use super::blocks::Blocks;
use super::matrix::CMat;
use crate::error::{Result, ZenoError};
use crate::scalar::{cone, cr, czero, Real};

/// Eigenvalues ascending with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: CMat<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// V·f(Λ)·V†
    pub fn apply_fn(&self, f: impl Fn(T) -> T) -> CMat<T> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let fj = f(self.values[j]);
            for i in 0..n {
                scaled[(i, j)] = scaled[(i, j)] * fj;
            }
        }
        scaled.matmul(&self.vectors.adjoint())
    }
}

/// Eigendecomposition of a Hermitian matrix; the strictly lower triangle is ignored.
pub fn hermitian_eig<T: Real>(a: &CMat<T>) -> Result<HermitianEigen<T>> {
    let n = a.require_square("Hermitian eigensolver")?;
    if !a.is_finite() {
        return Err(ZenoError::Dimension("Hermitian eigensolver on non-finite input".into()));
    }
    let blocks = Blocks::of(a);
    if blocks.is_trivial() {
        return dense_hermitian_eig(a, n);
    }
    let parts = blocks
        .split(a)
        .iter()
        .map(|b| dense_hermitian_eig(b, b.rows()))
        .collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(n);
    let mut columns = Vec::with_capacity(n);
    for (g, part) in blocks.groups().iter().zip(&parts) {
        for (c, &v) in part.values.iter().enumerate() {
            let mut col = vec![czero::<T>(); n];
            for (r, &i) in g.iter().enumerate() {
                col[i] = part.vectors[(r, c)];
            }
            values.push(v);
            columns.push(col);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(std::cmp::Ordering::Equal));
    let mut vectors = CMat::zeros(n, n);
    for (c, &k) in order.iter().enumerate() {
        vectors.set_column(c, &columns[k]);
    }
    Ok(HermitianEigen {
        values: order.iter().map(|&k| values[k]).collect(),
        vectors,
    })
}

fn dense_hermitian_eig<T: Real>(a: &CMat<T>, n: usize) -> Result<HermitianEigen<T>> {
    let mut h = CMat::from_fn(n, n, |i, j| {
        if i == j {
            cr(a[(i, i)].re)
        } else if i < j {
            a[(i, j)]
        } else {
            a[(j, i)].conj()
        }
    });
    let mut z = CMat::identity(n);
    tridiagonalize(&mut h, &mut z);

    let mut d: Vec<T> = (0..n).map(|i| h[(i, i)].re).collect();
    let mut e = vec![T::zero(); n];
    let mut phase = cone::<T>();
    for k in 0..n.saturating_sub(1) {
        let sub = h[(k + 1, k)];
        let m = sub.norm();
        e[k] = m;
        let next = if m > T::zero() { phase * sub / m } else { phase };
        for i in 0..n {
            z[(i, k + 1)] = z[(i, k + 1)] * next;
        }
        phase = next;
    }
    tql(&mut d, &mut e, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(std::cmp::Ordering::Equal));
    let mut vectors = CMat::zeros(n, n);
    for (c, &k) in order.iter().enumerate() {
        vectors.set_column(c, &z.column(k));
    }
    Ok(HermitianEigen {
        values: order.iter().map(|&k| d[k]).collect(),
        vectors,
    })
}

pub fn hermitian_eigvals<T: Real>(a: &CMat<T>) -> Result<Vec<T>> {
    Ok(hermitian_eig(a)?.values)
}

fn tridiagonalize<T: Real>(h: &mut CMat<T>, q: &mut CMat<T>) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    let two = T::lit(2.0);
    for k in 0..n - 2 {
        let mut v: Vec<Complex<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let tail: T = v[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == T::zero() {
            continue;
        }
        let xnorm = (tail + v[0].norm_sqr()).sqrt();
        let ph = if v[0].norm() == T::zero() {
            cone()
        } else {
            v[0] / v[0].norm()
        };
        v[0] = v[0] + ph * xnorm;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        for x in v.iter_mut() {
            *x = *x / vn;
        }
        let off = k + 1;
        let m = n - off;
        // p = H22 v, w = 2p − 2(v†p) v ... rank-two update H22 −= v w† + w v†
        let mut p = vec![czero::<T>(); m];
        for (r, pr) in p.iter_mut().enumerate() {
            let mut s = czero::<T>();
            for (c, vc) in v.iter().enumerate() {
                s = s + h[(off + r, off + c)] * *vc;
            }
            *pr = s * two;
        }
        let vp = v.iter().zip(&p).fold(czero::<T>(), |acc, (a, b)| acc + a.conj() * b);
        let w: Vec<Complex<T>> = p.iter().zip(&v).map(|(pi, vi)| *pi - *vi * vp).collect();
        for r in 0..m {
            for c in 0..m {
                let idx = (off + r, off + c);
                h[idx] = h[idx] - v[r] * w[c].conj() - w[r] * v[c].conj();
            }
        }
        let newsub = -ph * xnorm;
        h[(off, k)] = newsub;
        h[(k, off)] = newsub.conj();
        for r in 1..m {
            h[(off + r, k)] = czero();
            h[(k, off + r)] = czero();
        }
        for i in 0..n {
            let mut s = czero::<T>();
            for (c, vc) in v.iter().enumerate() {
                s = s + q[(i, off + c)] * *vc;
            }
            s = s * two;
            for (c, vc) in v.iter().enumerate() {
                let idx = (i, off + c);
                q[idx] = q[idx] - s * vc.conj();
            }
        }
    }
}

fn tql<T: Real>(d: &mut [T], e: &mut [T], z: &mut CMat<T>) -> Result<()> {
    let n = d.len();
    let eps = T::epsilon();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(ZenoError::NoConvergence {
                    algorithm: "tridiagonal QL",
                    iterations: iter,
                    residual: e[l].abs().to_f64_lossy(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (T::lit(2.0) * e[l]);
            let mut r = g.hypot(T::one());
            let sg = if g >= T::zero() { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sg);
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::lit(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let fz = z[(k, i + 1)];
                    let zi = z[(k, i)];
                    z[(k, i + 1)] = zi * s + fz * c;
                    z[(k, i)] = zi * c - fz * s;
                }
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}
