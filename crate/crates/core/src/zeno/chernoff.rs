use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};
use crate::linalg::{induced::DEFAULT_SAMPLES, mat_exp, trace_norm, unvec, vec, CMat};
use crate::semigroup::Superoperator;
use crate::CMatrix;

pub const CONTRACTION_SLACK: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernoffRow {
    pub n: usize,
    /// ‖Kⁿx − e^{n(K−1)}x‖₁
    pub lhs: f64,
    /// 2n^{1/3}‖(K−1)x‖₁
    pub rhs: f64,
    /// lhs/rhs, with 0/0 read as 0.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernoffReport {
    pub rows: Vec<ChernoffRow>,
    pub max_ratio: f64,
    pub contraction_lb: f64,
    /// First n at which the inequality fails.
    pub violation: Option<usize>,
}

impl ChernoffReport {
    pub fn into_result(self) -> Result<Self> {
        match self.violation {
            None => Ok(self),
            Some(n) => Err(ZenoError::InequalityViolation(format!(
                "Chernoff bound fails at n = {n} (ratio {:.6})",
                self.max_ratio
            ))),
        }
    }
}

pub fn chernoff_check(k: &Superoperator, x: &CMatrix, n_list: &[usize]) -> Result<ChernoffReport> {
    let d = k.dim();
    if x.shape() != (d, d) {
        return Err(ZenoError::Dimension(format!("x must be {d}x{d}")));
    }
    let lb = k.induced_trace_norm_lb(DEFAULT_SAMPLES / 4, 0xc4e7)?;
    if lb > 1.0 + CONTRACTION_SLACK {
        return Err(ZenoError::Parameter(format!("K is not a contraction: induced norm at least {lb:.9}")));
    }
    let gen = k.matrix() - &CMat::identity(d * d);
    let v = vec(x);
    let rhs_base = trace_norm(&unvec(&gen.mul_vec(&v), d)?)?;
    let mut sorted = n_list.to_vec();
    sorted.sort_unstable();
    let mut rows = Vec::with_capacity(sorted.len());
    let mut power = v.clone();
    let mut reached = 0usize;
    for &n in &sorted {
        while reached < n {
            power = k.matrix().mul_vec(&power);
            reached += 1;
        }
        let semigroup = mat_exp(&gen.scale_re(n as f64))?.mul_vec(&v);
        let diff: Vec<_> = power.iter().zip(&semigroup).map(|(a, b)| a - b).collect();
        let lhs = trace_norm(&unvec(&diff, d)?)?;
        let rhs = 2.0 * (n as f64).cbrt() * rhs_base;
        let ratio = if rhs > 0.0 { lhs / rhs } else if lhs <= 1e-14 { 0.0 } else { f64::INFINITY };
        rows.push(ChernoffRow { n, lhs, rhs, ratio });
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let violation = rows.iter().find(|r| r.ratio > 1.0).map(|r| r.n);
    Ok(ChernoffReport { rows, max_ratio, contraction_lb: lb, violation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::depolarizing;
    use crate::random::{random_cptp, random_density_matrix, rng};

    #[test]
    fn identity_has_both_sides_zero() {
        let r = chernoff_check(&Superoperator::identity(2), &CMat::unit(2, 0, 0), &[1, 5, 10]).unwrap();
        assert!(r.rows.iter().all(|row| row.lhs == 0.0 && row.rhs == 0.0));
        assert_eq!(r.max_ratio, 0.0);
    }

    #[test]
    fn depolarizing_ratio_is_small() {
        let sigma = CMat::from_real_diag(&[0.5, 0.5]);
        let k = depolarizing(0.9, &sigma).unwrap();
        let x = &CMat::unit(2, 0, 0) - &sigma;
        let r = chernoff_check(&k, &x, &(1..=64).collect::<Vec<_>>()).unwrap();
        assert!(r.max_ratio < 0.5, "{}", r.max_ratio);
        assert!(r.violation.is_none());
    }

    #[test]
    fn random_channels_satisfy_the_bound() {
        let mut g = rng(77);
        for _ in 0..5 {
            let k = random_cptp(3, 2, &mut g).unwrap();
            let x = random_density_matrix(3, &mut g);
            let r = chernoff_check(&k, &x, &(1..=32).collect::<Vec<_>>()).unwrap();
            assert!(r.max_ratio <= 1.0);
        }
    }

    #[test]
    fn expanding_map_is_rejected() {
        let k = Superoperator::identity(2).scale_re(1.5);
        assert!(chernoff_check(&k, &CMat::unit(2, 0, 0), &[1]).is_err());
    }
}
