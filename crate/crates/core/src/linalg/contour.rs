//! Trapezoid-rule contour integrals (1/2πi)∮ f(z) dz over circles.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matrix::CMat;
use crate::error::{Result, ZenoError};
use crate::scalar::Real;

pub const DEFAULT_POINTS: usize = 256;
pub const MAX_POINTS: usize = 4096;
pub const MIN_POINTS: usize = 16;
pub const CONVERGENCE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec<T> {
    pub center: Complex<T>,
    pub radius: T,
    pub quadrature_points: usize,
}

impl<T: Real> ContourSpec<T> {
    pub fn new(center: Complex<T>, radius: T) -> Result<Self> {
        Self::with_points(center, radius, DEFAULT_POINTS)
    }

    pub fn with_points(center: Complex<T>, radius: T, quadrature_points: usize) -> Result<Self> {
        let spec = Self {
            center,
            radius,
            quadrature_points,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > T::zero()) || !self.radius.is_finite() {
            return Err(ZenoError::Parameter(format!("contour radius must be positive, got {}", self.radius)));
        }
        if self.quadrature_points < MIN_POINTS {
            return Err(ZenoError::Parameter(format!(
                "contour needs at least {MIN_POINTS} quadrature points, got {}",
                self.quadrature_points
            )));
        }
        Ok(())
    }

    pub fn node(&self, k: usize, count: usize) -> Complex<T> {
        let theta = T::lit(2.0) * T::PI() * T::from_usize_lossy(k) / T::from_usize_lossy(count);
        self.center + Complex::from_polar(self.radius, theta)
    }

    /// Signed distance from `z` to the circle (negative inside).
    pub fn distance(&self, z: Complex<T>) -> T {
        (z - self.center).norm() - self.radius
    }

    pub fn encloses(&self, z: Complex<T>) -> bool {
        self.distance(z) < T::zero()
    }
}

/// Quadrature result with convergence bookkeeping.
#[derive(Clone, Debug)]
pub struct ContourIntegral<T: Real> {
    pub value: CMat<T>,
    pub nodes_used: usize,
    /// HS-norm change between the last two node counts.
    pub last_change: T,
    pub converged: bool,
}

fn eval_nodes<T, F>(f: &F, spec: &ContourSpec<T>, idx: &[usize], count: usize) -> Result<Vec<CMat<T>>>
where
    T: Real,
    F: Fn(Complex<T>) -> Result<CMat<T>> + Sync,
{
    idx.par_iter()
        .map(|&k| {
            let z = spec.node(k, count);
            let wrap = |e: ZenoError| ZenoError::ContourNode {
                node: Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy()),
                source: Box::new(e),
            };
            let v = f(z).map_err(wrap)?;
            if !v.is_finite() {
                return Err(wrap(ZenoError::Dimension("non-finite integrand".into())));
            }
            Ok(v.scale(z - spec.center))
        })
        .collect()
}

fn sum_into<T: Real>(acc: &mut Option<CMat<T>>, terms: &[CMat<T>]) {
    for t in terms {
        match acc {
            Some(a) => *a += t,
            None => *acc = Some(t.clone()),
        }
    }
}

/// Adaptive integral: the node count doubles until successive estimates agree.
pub fn contour_integral_report<T, F>(f: F, spec: &ContourSpec<T>) -> Result<ContourIntegral<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Result<CMat<T>> + Sync,
{
    spec.validate()?;
    let mut count = spec.quadrature_points;
    let all: Vec<usize> = (0..count).collect();
    let terms = eval_nodes(&f, spec, &all, count)?;
    let mut even_sum: Option<CMat<T>> = None;
    let mut odd_sum: Option<CMat<T>> = None;
    for (k, t) in terms.iter().enumerate() {
        if k % 2 == 0 {
            sum_into(&mut even_sum, std::slice::from_ref(t));
        } else {
            sum_into(&mut odd_sum, std::slice::from_ref(t));
        }
    }
    let even = even_sum.expect("at least one node");
    let mut total = match &odd_sum {
        Some(o) => &even + o,
        None => even.clone(),
    };
    let mut prev = if count % 2 == 0 {
        Some(even.scale_re(T::one() / T::from_usize_lossy(count / 2)))
    } else {
        None
    };
    loop {
        let current = total.scale_re(T::one() / T::from_usize_lossy(count));
        let tol = T::lit(CONVERGENCE_TOL).max(T::lit(100.0) * T::epsilon() * current.hs_norm().max(T::one()));
        let change = prev.as_ref().map_or(T::infinity(), |p| (&current - p).hs_norm());
        if change < tol || count * 2 > MAX_POINTS {
            return Ok(ContourIntegral {
                value: current,
                nodes_used: count,
                last_change: change,
                converged: change < tol,
            });
        }
        let new_count = count * 2;
        let odd: Vec<usize> = (0..count).map(|k| 2 * k + 1).collect();
        let terms = eval_nodes(&f, spec, &odd, new_count)?;
        let mut acc = Some(total);
        sum_into(&mut acc, &terms);
        total = acc.expect("nonempty");
        prev = Some(current);
        count = new_count;
    }
}

pub fn contour_integral<T, F>(f: F, spec: &ContourSpec<T>) -> Result<CMat<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Result<CMat<T>> + Sync,
{
    Ok(contour_integral_report(f, spec)?.value)
}
