use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};
use crate::linalg::{mat_exp_scaled, trace_norm, unvec, vec, CMat};
use crate::semigroup::Superoperator;
use crate::{CMatrix, C64};

/// First-exit decomposition of the survival probability for ρ ↦ πρπ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalReport {
    /// (n, pₙ, p′ₙ)
    pub rows: Vec<(usize, f64, f64)>,
    /// sup over the grid of n·p′ₙ.
    pub c_hat: f64,
    /// Log-log slope of p′ₙ over the second half of the grid.
    pub tail_slope: Option<f64>,
    /// The tail decays at least like n^{−0.9}.
    pub holds: bool,
}

/// pₙ = tr((Pe^{tL/n})ⁿρ) and p′ₙ = tr(((1−P)e^{tL/n})^{n−1} P e^{tL/n} ρ).
pub fn survival_decomposition(pi: &CMatrix, l: &Superoperator, t: f64, rho: &CMatrix, n_grid: &[usize]) -> Result<SurvivalReport> {
    let d = l.dim();
    if pi.shape() != (d, d) || rho.shape() != (d, d) {
        return Err(ZenoError::Dimension(format!("projector and state must be {d}x{d}")));
    }
    if (&pi.matmul(pi) - pi).hs_norm() > 1e-10 || pi.hermitian_defect() > 1e-12 {
        return Err(ZenoError::Projector { defect: (&pi.matmul(pi) - pi).hs_norm() });
    }
    if n_grid.len() < 2 || n_grid.contains(&0) {
        return Err(ZenoError::Parameter("need at least two grid points, all >= 1".into()));
    }
    let p = Superoperator::sandwich(pi, pi)?;
    let q = Superoperator::identity(d).sub(&p);
    let mut rows = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let step = mat_exp_scaled(l.matrix(), t / n as f64)?;
        let tr = |v: &[C64]| -> f64 { (0..d).map(|i| v[i * d + i].re).sum() };
        let mut v = vec(rho);
        for _ in 0..n {
            v = p.matrix().mul_vec(&step.mul_vec(&v));
        }
        let survival = tr(&v);
        let mut w = p.matrix().mul_vec(&step.mul_vec(&vec(rho)));
        for _ in 1..n {
            w = q.matrix().mul_vec(&step.mul_vec(&w));
        }
        rows.push((n, survival, tr(&w)));
    }
    rows.sort_by_key(|r| r.0);
    let c_hat = rows.iter().map(|r| r.2.abs() * r.0 as f64).fold(0.0, f64::max);
    let half: Vec<(usize, f64)> = rows[rows.len() / 2..].iter().map(|r| (r.0, r.2.abs())).collect();
    let tail_slope = if half.len() >= 2 {
        let (a, b) = (half[0], half[half.len() - 1]);
        Some((b.1.ln() - a.1.ln()) / ((b.0 as f64).ln() - (a.0 as f64).ln()))
    } else {
        None
    };
    let holds = c_hat.is_finite() && tail_slope.is_none_or(|s| s <= -0.9 || !s.is_finite());
    Ok(SurvivalReport { rows, c_hat, tail_slope, holds })
}

/// Perturbative expansion of (M e^{L/n})ⁿ x in powers of L.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReport {
    pub n: usize,
    pub order: usize,
    /// ‖(Me^{L/n})ⁿx − Σ_{k≤K} T_k x‖₁ for K = 0..=order.
    pub residuals: Vec<f64>,
    /// Trace norms of the individual orders T_k x.
    pub term_norms: Vec<f64>,
    pub c: f64,
    /// 2C^{order+1}/(order+1)!
    pub remainder_bound: f64,
    pub holds: bool,
}

pub fn perturbation_partial_sums(m: &Superoperator, l: &Superoperator, n: usize, x: &CMatrix, order: usize) -> Result<PerturbationReport> {
    let d = m.dim();
    if l.dim() != d || x.shape() != (d, d) {
        return Err(ZenoError::Dimension("M, L and x must share one space".into()));
    }
    if n == 0 {
        return Err(ZenoError::Parameter("n must be at least 1".into()));
    }
    let size = d * d;
    let ln = l.matrix().scale_re(1.0 / n as f64);
    // A_m = M (L/n)^m / m!
    let mut a = Vec::with_capacity(order + 1);
    let mut pow = CMat::identity(size);
    let mut fact = 1.0;
    for mm in 0..=order {
        if mm > 0 {
            pow = pow.matmul(&ln);
            fact *= mm as f64;
        }
        a.push(m.matrix().matmul(&pow).scale_re(1.0 / fact));
    }
    let zero = vec![C64::new(0.0, 0.0); size];
    let mut coeffs: Vec<Vec<C64>> = (0..=order).map(|k| if k == 0 { vec(x) } else { zero.clone() }).collect();
    for _ in 0..n {
        let mut next = vec![zero.clone(); order + 1];
        for (k, slot) in next.iter_mut().enumerate() {
            for mm in 0..=k {
                let contrib = a[mm].mul_vec(&coeffs[k - mm]);
                for (s, c) in slot.iter_mut().zip(contrib) {
                    *s += c;
                }
            }
        }
        coeffs = next;
    }
    let exact = {
        let step = m.matrix().matmul(&mat_exp_scaled(l.matrix(), 1.0 / n as f64)?);
        let mut v = vec(x);
        for _ in 0..n {
            v = step.mul_vec(&v);
        }
        v
    };
    let mut partial = zero.clone();
    let mut residuals = Vec::with_capacity(order + 1);
    let mut term_norms = Vec::with_capacity(order + 1);
    for c in &coeffs {
        term_norms.push(trace_norm(&unvec(c, d)?)?);
        for (p, v) in partial.iter_mut().zip(c) {
            *p += v;
        }
        let diff: Vec<C64> = exact.iter().zip(&partial).map(|(e, p)| e - p).collect();
        residuals.push(trace_norm(&unvec(&diff, d)?)?);
    }
    let c = l.induced_trace_norm_ub()? + 1.0;
    let k1 = order + 1;
    let k1_fact: f64 = (1..=k1).map(|i| i as f64).product();
    let remainder_bound = 2.0 * c.powi(k1 as i32) / k1_fact;
    let holds = residuals.last().is_some_and(|&r| r <= remainder_bound);
    Ok(PerturbationReport { n, order, residuals, term_norms, c, remainder_bound, holds })
}
