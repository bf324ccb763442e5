//! Complex Schur factorization and eigendecomposition.

use num_complex::Complex;

use super::blocks::Blocks;
use super::matrix::CMat;
use crate::error::{Result, ZenoError};
use crate::scalar::{cone, cr, czero, Real};

/// `A = Q·T·Q†` with `Q` unitary and `T` upper triangular.
#[derive(Clone, Debug)]
pub struct Schur<T: Real> {
    pub q: CMat<T>,
    pub t: CMat<T>,
    /// Total QR sweeps spent.
    pub sweeps: usize,
}

/// Eigenvalues in canonical order with matching unit right eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigen<T: Real> {
    pub values: Vec<Complex<T>>,
    pub vectors: CMat<T>,
    pub schur: Schur<T>,
}

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

pub fn schur<T: Real>(a: &CMat<T>) -> Result<Schur<T>> {
    let n = a.require_square("Schur factorization")?;
    if !a.is_finite() {
        return Err(ZenoError::Dimension("Schur factorization of non-finite input".into()));
    }
    let blocks = Blocks::of(a);
    if blocks.is_trivial() {
        return schur_block(a);
    }
    let mut q = CMat::zeros(n, n);
    let mut t = CMat::zeros(n, n);
    let mut offset = 0;
    let mut sweeps = 0;
    for (g, b) in blocks.groups().iter().zip(blocks.split(a)) {
        let s = schur_block(&b)?;
        sweeps += s.sweeps;
        let m = g.len();
        for r in 0..m {
            for c in 0..m {
                q[(g[r], offset + c)] = s.q[(r, c)];
                t[(offset + r, offset + c)] = s.t[(r, c)];
            }
        }
        offset += m;
    }
    Ok(Schur { q, t, sweeps })
}

fn schur_block<T: Real>(a: &CMat<T>) -> Result<Schur<T>> {
    let n = a.rows();
    if a.is_upper_triangular() {
        return Ok(Schur {
            q: CMat::identity(n),
            t: a.clone(),
            sweeps: 0,
        });
    }
    if a.is_lower_triangular() {
        let j = CMat::from_fn(n, n, |r, c| if r + c + 1 == n { cone() } else { czero() });
        return Ok(Schur {
            t: j.matmul(a).matmul(&j),
            q: j,
            sweeps: 0,
        });
    }
    let (mut h, mut q) = hessenberg(a);
    let sweeps = qr_iterate(&mut h, &mut q)?;
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = czero();
        }
    }
    Ok(Schur { q, t: h, sweeps })
}

/// Householder reduction `A = Q·H·Q†`.
fn hessenberg<T: Real>(a: &CMat<T>) -> (CMat<T>, CMat<T>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = CMat::identity(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let mut v: Vec<Complex<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        let tail = v[1..].iter().map(|z| z.norm_sqr()).sum::<T>();
        if xnorm == T::zero() || tail == T::zero() {
            continue;
        }
        let phase = if v[0].norm() == T::zero() {
            cone()
        } else {
            v[0] / v[0].norm()
        };
        let alpha = -phase * xnorm;
        v[0] = v[0] - alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        for z in v.iter_mut() {
            *z = *z / vn;
        }
        let two = T::lit(2.0);
        // H ← (I − 2vv†) H
        for j in 0..n {
            let mut s = czero::<T>();
            for (r, vr) in v.iter().enumerate() {
                s = s + vr.conj() * h[(k + 1 + r, j)];
            }
            s = s * two;
            for (r, vr) in v.iter().enumerate() {
                let idx = (k + 1 + r, j);
                h[idx] = h[idx] - *vr * s;
            }
        }
        // H ← H (I − 2vv†), Q ← Q (I − 2vv†)
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let mut s = czero::<T>();
                for (r, vr) in v.iter().enumerate() {
                    s = s + m[(i, k + 1 + r)] * *vr;
                }
                s = s * two;
                for (r, vr) in v.iter().enumerate() {
                    let idx = (i, k + 1 + r);
                    m[idx] = m[idx] - s * vr.conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = czero();
        }
    }
    (h, q)
}

/// Rotation `G = [[c, s], [−s̄, c]]` with `G·[x; y] = [r; 0]`.
fn givens<T: Real>(x: Complex<T>, y: Complex<T>) -> (T, Complex<T>) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == T::zero() {
        return (T::one(), czero());
    }
    if ax == T::zero() {
        return (T::zero(), y.conj() / ay);
    }
    let nrm = ax.hypot(ay);
    let alpha = x / ax;
    (ax / nrm, alpha * y.conj() / nrm)
}

fn wilkinson<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    let m = (a + d) * half;
    let disc = ((a - d) * (a - d) * T::lit(0.25) + b * c).sqrt();
    let l1 = m + disc;
    let l2 = m - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn qr_iterate<T: Real>(h: &mut CMat<T>, q: &mut CMat<T>) -> Result<usize> {
    let n = h.rows();
    if n < 2 {
        return Ok(0);
    }
    let eps = T::epsilon();
    let hnorm = h.hs_norm().max(T::min_positive_value());
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == T::zero() {
                s = hnorm;
            }
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = czero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(ZenoError::NoConvergence {
                algorithm: "shifted QR",
                iterations: total,
                residual: h[(hi, hi - 1)].norm().to_f64_lossy(),
            });
        }
        let mu = if iter % 10 == 0 {
            let sub = h[(hi, hi - 1)].norm();
            h[(hi, hi)] + Complex::new(T::lit(0.75) * sub, T::lit(0.4375) * sub)
        } else {
            wilkinson(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        let mut x = h[(l, l)] - mu;
        let mut y = h[(l + 1, l)];
        for k in l..hi {
            let (c, s) = givens(x, y);
            let c = cr::<T>(c);
            let start = if k > l { k - 1 } else { k };
            for j in start..n {
                let u = h[(k, j)];
                let v = h[(k + 1, j)];
                h[(k, j)] = c * u + s * v;
                h[(k + 1, j)] = -s.conj() * u + c * v;
            }
            if k > l {
                h[(k + 1, k - 1)] = czero();
            }
            let rmax = (k + 2).min(hi);
            for i in 0..=rmax {
                let u = h[(i, k)];
                let v = h[(i, k + 1)];
                h[(i, k)] = u * c + v * s.conj();
                h[(i, k + 1)] = -u * s + v * c;
            }
            for i in 0..n {
                let u = q[(i, k)];
                let v = q[(i, k + 1)];
                q[(i, k)] = u * c + v * s.conj();
                q[(i, k + 1)] = -u * s + v * c;
            }
            if k + 1 < hi {
                x = h[(k + 1, k)];
                y = h[(k + 2, k)];
            }
        }
    }
    Ok(total)
}

/// Principal argument in (−π, π].
pub fn principal_arg<T: Real>(z: Complex<T>) -> T {
    let a = z.im.atan2(z.re);
    if a <= -T::PI() {
        T::PI()
    } else {
        a
    }
}

/// Canonical order: modulus descending, then argument ascending, then input position.
pub fn canonical_order<T: Real>(values: &[Complex<T>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| {
        let (a, b) = (values[i], values[j]);
        b.norm()
            .partial_cmp(&a.norm())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(
                principal_arg(a)
                    .partial_cmp(&principal_arg(b))
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
            .then(i.cmp(&j))
    });
    idx
}

pub fn eigvals<T: Real>(a: &CMat<T>) -> Result<Vec<Complex<T>>> {
    let s = schur(a)?;
    let diag: Vec<_> = (0..s.t.rows()).map(|i| s.t[(i, i)]).collect();
    Ok(canonical_order(&diag).into_iter().map(|i| diag[i]).collect())
}

/// Eigenvector of upper-triangular `t` for its `k`-th diagonal entry.
fn triangular_eigvec<T: Real>(t: &CMat<T>, k: usize, smin: T) -> Vec<Complex<T>> {
    let n = t.rows();
    let lambda = t[(k, k)];
    let mut x = vec![czero::<T>(); n];
    x[k] = cone();
    let big = T::max_value().sqrt() / T::from_usize_lossy(n.max(1));
    for i in (0..k).rev() {
        let mut s = czero::<T>();
        for j in i + 1..=k {
            s = s + t[(i, j)] * x[j];
        }
        let mut den = t[(i, i)] - lambda;
        if den.norm() < smin {
            den = cr(smin);
        }
        x[i] = -s / den;
        let m = x[i].norm();
        if m > big {
            for z in x.iter_mut().take(k + 1).skip(i) {
                *z = *z / m;
            }
        }
    }
    x
}

pub fn eig<T: Real>(a: &CMat<T>) -> Result<Eigen<T>> {
    let s = schur(a)?;
    let n = s.t.rows();
    let diag: Vec<_> = (0..n).map(|i| s.t[(i, i)]).collect();
    let order = canonical_order(&diag);
    let smin = (T::epsilon() * s.t.hs_norm()).max(T::min_positive_value());
    let mut vectors = CMat::zeros(n, n);
    let columns: Vec<Vec<Complex<T>>> = order
        .iter()
        .map(|&k| {
            let x = triangular_eigvec(&s.t, k, smin);
            let mut v = s.q.mul_vec(&x);
            let nrm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            if nrm > T::zero() {
                for z in v.iter_mut() {
                    *z = *z / nrm;
                }
            }
            v
        })
        .collect();
    for (c, v) in columns.iter().enumerate() {
        vectors.set_column(c, v);
    }
    Ok(Eigen {
        values: order.iter().map(|&k| diag[k]).collect(),
        vectors,
        schur: s,
    })
}
