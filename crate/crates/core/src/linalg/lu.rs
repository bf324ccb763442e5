use num_complex::Complex;

use super::blocks::Blocks;
use super::matrix::CMat;
use crate::error::{Result, ZenoError};
use crate::scalar::{cone, czero, Real};

/// LU factorization with partial pivoting, `P·A = L·U`.
#[derive(Clone, Debug)]
pub struct Lu<T: Real> {
    lu: CMat<T>,
    perm: Vec<usize>,
    odd: bool,
    min_pivot: T,
    max_pivot: T,
}

impl<T: Real> Lu<T> {
    pub fn new(a: &CMat<T>) -> Result<Self> {
        let n = a.require_square("LU")?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        let mut min_pivot = T::infinity();
        let mut max_pivot = T::zero();
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                odd = !odd;
            }
            min_pivot = min_pivot.min(best);
            max_pivot = max_pivot.max(best);
            if best == T::zero() {
                continue;
            }
            let inv = cone::<T>() / lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] * inv;
                if f == czero() {
                    continue;
                }
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - f * u;
                }
            }
        }
        if n == 0 {
            min_pivot = T::zero();
        }
        Ok(Self {
            lu,
            perm,
            odd,
            min_pivot,
            max_pivot,
        })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    /// Smallest pivot modulus relative to the largest.
    pub fn pivot_ratio(&self) -> T {
        if self.max_pivot == T::zero() {
            T::zero()
        } else {
            self.min_pivot / self.max_pivot
        }
    }

    pub fn min_pivot(&self) -> T {
        self.min_pivot
    }

    pub fn det(&self) -> Complex<T> {
        let n = self.dim();
        let mut d = (0..n).fold(cone::<T>(), |acc, i| acc * self.lu[(i, i)]);
        if self.odd {
            d = -d;
        }
        d
    }

    pub fn solve_vec(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.dim();
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in 0..i {
                s = s - row[j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in i + 1..n {
                s = s - row[j] * x[j];
            }
            x[i] = s / row[i];
        }
        x
    }

    pub fn solve(&self, b: &CMat<T>) -> CMat<T> {
        let n = self.dim();
        assert_eq!(b.rows(), n, "LU solve shape mismatch");
        let m = b.cols();
        let mut x = CMat::zeros(n, m);
        for i in 0..n {
            x.row_mut(i).copy_from_slice(b.row(self.perm[i]));
        }
        for i in 0..n {
            for j in 0..i {
                let f = self.lu[(i, j)];
                if f == czero() {
                    continue;
                }
                for c in 0..m {
                    let v = x[(j, c)];
                    x[(i, c)] = x[(i, c)] - f * v;
                }
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let f = self.lu[(i, j)];
                if f == czero() {
                    continue;
                }
                for c in 0..m {
                    let v = x[(j, c)];
                    x[(i, c)] = x[(i, c)] - f * v;
                }
            }
            let inv = cone::<T>() / self.lu[(i, i)];
            for c in 0..m {
                x[(i, c)] = x[(i, c)] * inv;
            }
        }
        x
    }

    pub fn inverse(&self) -> CMat<T> {
        self.solve(&CMat::identity(self.dim()))
    }
}

/// Solves `A·X = B`.
pub fn solve<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Result<CMat<T>> {
    let lu = Lu::new(a)?;
    if lu.min_pivot() == T::zero() {
        return Err(ZenoError::Dimension("singular system".into()));
    }
    Ok(lu.solve(b))
}

/// Inverse computed block by block over decoupled index groups.
pub fn inverse<T: Real>(a: &CMat<T>) -> Result<CMat<T>> {
    a.require_square("inverse")?;
    let blocks = Blocks::of(a);
    let parts = blocks
        .split(a)
        .iter()
        .map(|b| {
            let lu = Lu::new(b)?;
            if lu.min_pivot() == T::zero() {
                return Err(ZenoError::Dimension("singular matrix".into()));
            }
            Ok(lu.inverse())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.assemble(&parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn inverse_of_dense_matrix() {
        let a = CMat::<f64>::from_fn(5, 5, |i, j| {
            c(if i == j { 4.0 } else { ((i * 3 + j) % 4) as f64 * 0.3 }, (i as f64 - j as f64) * 0.1)
        });
        let inv = inverse(&a).unwrap();
        assert!(a.matmul(&inv).approx_eq(&CMat::identity(5), 1e-13));
    }

    #[test]
    fn determinant_tracks_row_swaps() {
        let a = CMat::<f64>::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let d = Lu::new(&a).unwrap().det();
        assert!((d - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_matrix_reports_zero_pivot() {
        let a = CMat::<f64>::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert_eq!(Lu::new(&a).unwrap().min_pivot(), 0.0);
        assert!(inverse(&a).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let a = CMat::<f32>::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0]]);
        let inv = inverse(&a).unwrap();
        assert!(a.matmul(&inv).approx_eq(&CMat::identity(2), 1e-6));
    }
}
