use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};
use crate::C64;

pub const MIN_TERMS: usize = 10;
/// Samples at the end of the grid used for the oscillation diagnostic.
pub const TAIL_WINDOW: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DyadicReport {
    pub t: f64,
    pub terms: usize,
    pub samples: Vec<(usize, C64)>,
    /// max − min of |vₙ| over the last samples.
    pub amplitude_range: f64,
    /// max − min of the unwrapped arg vₙ over the last samples.
    pub phase_range: f64,
    pub amplitude_monotone: bool,
    /// (n, |vₙ(terms) − vₙ(2·terms)|, n·2^{−terms})
    pub tail_checks: Vec<(usize, f64, f64)>,
    pub tail_ok: bool,
}

/// Σ_{k=1}^{terms} 2^{−k} e^{i t 2^k / n}
pub fn dyadic_step(t: f64, n: usize, terms: usize) -> C64 {
    (1..=terms)
        .map(|k| {
            let w = 0.5f64.powi(k as i32);
            C64::from_polar(w, t * 2f64.powi(k as i32) / n as f64)
        })
        .sum()
}

pub fn dyadic_amplitude(t: f64, n: usize, terms: usize) -> C64 {
    dyadic_step(t, n, terms).powu(n as u32)
}

fn unwrap_phases(z: &[C64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(z.len());
    for v in z {
        let a = v.arg();
        let next = match out.last() {
            None => a,
            Some(&prev) => {
                let mut d = a - prev.rem_euclid(std::f64::consts::TAU);
                d = (d + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI;
                prev + d
            }
        };
        out.push(next);
    }
    out
}

fn range(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    if v.is_empty() {
        0.0
    } else {
        max - min
    }
}

pub fn dyadic_counterexample(t: f64, n_grid: &[usize], terms: usize) -> Result<DyadicReport> {
    if terms < MIN_TERMS {
        return Err(ZenoError::Parameter(format!("terms must be at least {MIN_TERMS}, got {terms}")));
    }
    if n_grid.is_empty() || n_grid.contains(&0) {
        return Err(ZenoError::Parameter("n_grid must be nonempty with entries >= 1".into()));
    }
    let samples: Vec<(usize, C64)> = n_grid.iter().map(|&n| (n, dyadic_amplitude(t, n, terms))).collect();
    let tail_start = samples.len().saturating_sub(TAIL_WINDOW);
    let tail: Vec<C64> = samples[tail_start..].iter().map(|s| s.1).collect();
    let amps: Vec<f64> = tail.iter().map(|z| z.norm()).collect();
    let all_amps: Vec<f64> = samples.iter().map(|s| s.1.norm()).collect();
    let amplitude_monotone = all_amps.windows(2).all(|w| w[1] <= w[0]) || all_amps.windows(2).all(|w| w[1] >= w[0]);
    let tail_checks: Vec<(usize, f64, f64)> = samples
        .iter()
        .map(|&(n, v)| {
            let doubled = dyadic_amplitude(t, n, 2 * terms);
            (n, (v - doubled).norm(), n as f64 * 0.5f64.powi(terms as i32))
        })
        .collect();
    let tail_ok = tail_checks.iter().all(|c| c.1 < c.2);
    Ok(DyadicReport {
        t,
        terms,
        amplitude_range: range(&amps),
        phase_range: range(&unwrap_phases(&tail)),
        amplitude_monotone,
        samples,
        tail_checks,
        tail_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_time_is_phase_free() {
        for n in [1usize, 10, 100] {
            let v = dyadic_amplitude(0.0, n, 20);
            let oracle = (1.0 - 0.5f64.powi(20)).powi(n as i32);
            assert!((v - C64::new(oracle, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn tail_bound_holds() {
        let grid: Vec<usize> = (4..15).map(|m| 1usize << m).collect();
        let r = dyadic_counterexample(1.0, &grid, 40).unwrap();
        assert!(r.tail_ok);
    }

    #[test]
    fn few_terms_rejected() {
        assert!(dyadic_counterexample(1.0, &[1], 5).is_err());
    }

    #[test]
    fn single_term_is_a_pure_phase_power() {
        let s = dyadic_step(1.0, 8, 10);
        let direct: C64 = (1..=10).map(|k| C64::from_polar(0.5f64.powi(k), 2f64.powi(k) / 8.0)).sum();
        assert!((s - direct).norm() < 1e-15);
    }
}
