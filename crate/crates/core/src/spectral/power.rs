use serde::{Deserialize, Serialize};

use super::peripheral::{peripheral_analysis, PeripheralReport};
use crate::error::{Result, ZenoError};
use crate::linalg::{induced::DEFAULT_SAMPLES, induced_trace_norm_lb, singular_values, trace_norm, CMat};
use crate::semigroup::Superoperator;
use crate::{CMatrix, C64};

/// Residuals below this are treated as converged to rounding.
pub const RESIDUAL_FLOOR: f64 = 1e-14;
/// Operator-level residual at n_max below which convergence counts as uniform.
pub const UNIFORM_TOL: f64 = 1e-8;
pub const RANK_TOL: f64 = 1e-8;
pub const IDEMPOTENT_TOL: f64 = 1e-8;
const MAX_SQUARINGS: usize = 40;

/// A_n x = (1/n) Σ_{k<n} M^k x
pub fn ergodic_average(m: &Superoperator, n: usize, x: &CMatrix) -> Result<CMatrix> {
    if n == 0 {
        return Err(ZenoError::Parameter("ergodic average needs n >= 1".into()));
    }
    if x.shape() != (m.dim(), m.dim()) {
        return Err(ZenoError::Dimension("input does not match the superoperator".into()));
    }
    let mut y = x.clone();
    let mut acc = x.clone();
    for _ in 1..n {
        y = m.apply(&y);
        acc += &y;
    }
    Ok(acc.scale_re(1.0 / n as f64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvergenceMode {
    Uniform,
    /// Convergence observed on the supplied states only.
    StrongOnSamples,
    Divergent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectorSource {
    Peripheral,
    Squaring,
    ErgodicAverage,
}

/// Estimate of lim Mⁿ with its provenance inside the algorithm.
#[derive(Clone, Debug)]
pub struct LimitEstimate {
    pub projector: Superoperator,
    pub source: ProjectorSource,
    pub rank: usize,
    /// Numerical ranks of the squaring iterates M^{2^k}.
    pub rank_history: Vec<usize>,
    pub idempotency_defect: f64,
    /// Rank settled over the last iterates.
    pub stable: bool,
}

fn numerical_rank(m: &CMatrix) -> Result<usize> {
    let s = singular_values(m)?;
    let top = s.first().copied().unwrap_or(0.0);
    Ok(s.iter().filter(|&&x| x > RANK_TOL * top.max(1.0)).count())
}

/// P̂: the peripheral projector when 1 is the only peripheral eigenvalue,
/// else the lower-rank idempotent among M^{2^k} and the ergodic average.
pub fn estimate_limit_projector(m: &Superoperator) -> Result<LimitEstimate> {
    if let Ok(report) = peripheral_analysis(m) {
        if let Some(est) = from_peripheral(&report)? {
            return Ok(est);
        }
    }
    let d = m.dim();
    let mut power = m.matrix().clone();
    // A_{2^k}: average of M^0..M^{2^k − 1}
    let mut average = &CMat::identity(d * d) + m.matrix();
    average = average.scale_re(0.5);
    power = power.matmul(&power);
    let mut rank_history = Vec::new();
    let mut squaring: Option<CMatrix> = None;
    for k in 1..MAX_SQUARINGS {
        let next = power.matmul(&power);
        rank_history.push(numerical_rank(&power)?);
        if (&next - &power).hs_norm() < 1e-12 * power.hs_norm().max(1.0) {
            squaring = Some(next);
            break;
        }
        average = (&average + &power.matmul(&average)).scale_re(0.5);
        power = next;
        if k + 1 == MAX_SQUARINGS {
            break;
        }
    }
    let stable = rank_history.len() >= 2 && rank_history[rank_history.len() - 1] == rank_history[rank_history.len() - 2];
    let mut candidates: Vec<(ProjectorSource, CMatrix)> = Vec::new();
    if let Some(s) = squaring {
        candidates.push((ProjectorSource::Squaring, s));
    }
    candidates.push((ProjectorSource::ErgodicAverage, average));
    let mut best: Option<LimitEstimate> = None;
    for (source, p) in candidates {
        let defect = (&p.matmul(&p) - &p).hs_norm();
        let rank = numerical_rank(&p)?;
        let better = match &best {
            None => true,
            Some(b) => {
                let ok_new = defect <= IDEMPOTENT_TOL;
                let ok_old = b.idempotency_defect <= IDEMPOTENT_TOL;
                (ok_new && !ok_old) || (ok_new == ok_old && rank < b.rank)
            }
        };
        if better {
            best = Some(LimitEstimate {
                projector: Superoperator::new(d, p)?,
                source,
                rank,
                rank_history: rank_history.clone(),
                idempotency_defect: defect,
                stable,
            });
        }
    }
    best.ok_or_else(|| ZenoError::Estimation("no limit projector candidate".into()))
}

fn from_peripheral(report: &PeripheralReport) -> Result<Option<LimitEstimate>> {
    let one = C64::new(1.0, 0.0);
    if report.peripheral.len() != 1 || (report.peripheral[0].value - one).norm() > report.cluster_tol || !report.admissible {
        return Ok(None);
    }
    let p = report.projector(0)?;
    let rank = report.peripheral[0].projector_rank.round() as usize;
    Ok(Some(LimitEstimate {
        idempotency_defect: p.idempotency_defect(),
        projector: p,
        source: ProjectorSource::Peripheral,
        rank,
        rank_history: vec![rank],
        stable: true,
    }))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PowerConvergenceReport {
    pub mode: ConvergenceMode,
    #[serde(skip)]
    pub limit_projector_estimate: Option<Superoperator>,
    pub projector_source: ProjectorSource,
    pub projector_rank: usize,
    /// (n, max over states of ‖Mⁿx − P̂x‖₁)
    pub residuals: Vec<(usize, f64)>,
    pub per_state_residuals: Vec<Vec<f64>>,
    /// (n, induced-norm lower bound of Mⁿ − P̂) on a dyadic grid.
    pub operator_residuals: Vec<(usize, f64)>,
}

impl PowerConvergenceReport {
    pub fn projector(&self) -> &Superoperator {
        self.limit_projector_estimate.as_ref().expect("set on construction")
    }
}

/// Ratio test over the last five samples, with residuals under the floor counted as converged.
pub fn decays(residuals: &[f64]) -> bool {
    let Some(&last) = residuals.last() else {
        return false;
    };
    if last <= RESIDUAL_FLOOR {
        return true;
    }
    if residuals.len() < 5 {
        return false;
    }
    let w = &residuals[residuals.len() - 5..];
    w[4] < w[0] && w.windows(2).all(|p| p[1] <= p[0] * (1.0 + 1e-9))
}

pub fn power_convergence(m: &Superoperator, test_states: &[CMatrix], n_max: usize) -> Result<PowerConvergenceReport> {
    if test_states.is_empty() {
        return Err(ZenoError::Parameter("no test states".into()));
    }
    if n_max == 0 {
        return Err(ZenoError::Parameter("n_max must be at least 1".into()));
    }
    let d = m.dim();
    for (i, x) in test_states.iter().enumerate() {
        if x.shape() != (d, d) {
            return Err(ZenoError::Dimension(format!("test state {i} has the wrong shape")));
        }
        let tn = trace_norm(x)?;
        if (tn - 1.0).abs() > 1e-10 {
            return Err(ZenoError::State(format!("test state {i} has trace norm {tn:.12}, expected 1")));
        }
    }
    let est = estimate_limit_projector(m)?;
    let p = &est.projector;
    let mut per_state = Vec::with_capacity(test_states.len());
    for x in test_states {
        let target = p.apply(x);
        let mut y = x.clone();
        let mut rs = Vec::with_capacity(n_max);
        for _ in 0..n_max {
            y = m.apply(&y);
            rs.push(trace_norm(&(&y - &target))?);
        }
        per_state.push(rs);
    }
    let residuals: Vec<(usize, f64)> = (0..n_max)
        .map(|k| (k + 1, per_state.iter().map(|r| r[k]).fold(0.0, f64::max)))
        .collect();

    let mut grid: Vec<usize> = std::iter::successors(Some(1usize), |&n| Some(n * 2)).take_while(|&n| n < n_max).collect();
    grid.push(n_max);
    let mut operator_residuals = Vec::with_capacity(grid.len());
    let mut power = Superoperator::identity(d);
    let mut reached = 0;
    for &n in &grid {
        power = power.compose(&m.powi((n - reached) as u64));
        reached = n;
        let diff = power.sub(p);
        operator_residuals.push((n, induced_trace_norm_lb(diff.matrix(), d, DEFAULT_SAMPLES / 4, 0x0b5e)?));
    }

    let sample_ok = per_state.iter().all(|r| decays(r));
    let op: Vec<f64> = operator_residuals.iter().map(|x| x.1).collect();
    let op_last = op.last().copied().unwrap_or(f64::INFINITY);
    let mode = if !sample_ok {
        ConvergenceMode::Divergent
    } else if op_last <= UNIFORM_TOL && (decays(&op) || op_last <= RESIDUAL_FLOOR) {
        ConvergenceMode::Uniform
    } else {
        ConvergenceMode::StrongOnSamples
    };
    Ok(PowerConvergenceReport {
        mode,
        projector_source: est.source,
        projector_rank: est.rank,
        limit_projector_estimate: Some(est.projector),
        residuals,
        per_state_residuals: per_state,
        operator_residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing, maximally_mixed};

    #[test]
    fn identity_average_is_identity() {
        let x = CMat::from_real_rows(&[&[0.3, 0.1], &[0.2, 0.7]]);
        let a = ergodic_average(&Superoperator::identity(2), 7, &x).unwrap();
        assert!(a.approx_eq(&x, 1e-15));
    }

    #[test]
    fn phase_average_vanishes_geometrically() {
        let theta = std::f64::consts::PI / 3.0;
        let lambda = C64::from_polar(1.0, theta);
        let m = Superoperator::identity(2).scale(lambda);
        let x = CMat::unit(2, 0, 0);
        for n in [10, 100, 1000] {
            let a = ergodic_average(&m, n, &x).unwrap();
            let bound = 2.0 / (n as f64 * (lambda - 1.0).norm());
            assert!(a.hs_norm() <= bound + 1e-12);
        }
    }

    #[test]
    fn depolarizing_is_uniform() {
        let m = depolarizing(0.5, &maximally_mixed(2)).unwrap();
        let r = power_convergence(&m, &[CMat::unit(2, 0, 0)], 40).unwrap();
        assert_eq!(r.mode, ConvergenceMode::Uniform);
        assert_eq!(r.projector_source, ProjectorSource::Peripheral);
        for &(n, res) in &r.residuals {
            assert!(res <= 2.0 * 0.5f64.powi(n as i32) + 1e-15);
        }
    }

    #[test]
    fn rotating_phase_diverges() {
        let m = Superoperator::identity(2).scale(C64::from_polar(1.0, 0.7));
        let r = power_convergence(&m, &[CMat::unit(2, 1, 1)], 30).unwrap();
        assert_eq!(r.mode, ConvergenceMode::Divergent);
        assert_eq!(r.projector_rank, 0);
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let m = Superoperator::identity(2);
        assert!(matches!(
            power_convergence(&m, &[CMat::unit(2, 0, 0).scale_re(2.0)], 5),
            Err(ZenoError::State(_))
        ));
    }
}
