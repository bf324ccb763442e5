use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit_loglog, FitOutcome};
use super::limits::{zeno_limit_strong_estimated, zeno_limit_theorem1, Theorem1Limit};
use super::product::zeno_product_with_step;
use crate::channels::{ChannelSpec, GeneratorSpec, StateSpec, TruncationSpec};
use crate::error::{Result, ZenoError};
use crate::linalg::{mat_exp_scaled, trace_norm};
use crate::semigroup::{yosida_generator, Superoperator};
use crate::spectral::{peripheral_analysis_with, PeripheralOptions, PeripheralReport};
use crate::CMatrix;

/// ‖L‖ at or above which a truncated generator emulates an unbounded one.
pub const UNBOUNDED_NORM: f64 = 100.0;
pub const DEFAULT_BETA: f64 = 1.0 / 3.0;
pub const STATE_TOL: f64 = 1e-10;

fn default_beta() -> f64 {
    DEFAULT_BETA
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum LimitMode {
    /// Σ_j e^{tP_jLP_j} λ_jⁿ P_j
    #[default]
    Theorem1,
    /// e^{tPLP} P
    Theorem2,
    /// Peripheral limit with L replaced by its Yosida approximant at k = ⌈n^β⌉.
    Theorem3Yosida {
        #[serde(default = "default_beta")]
        beta: f64,
    },
}

impl LimitMode {
    pub fn name(&self) -> &'static str {
        match self {
            LimitMode::Theorem1 => "theorem1",
            LimitMode::Theorem2 => "theorem2",
            LimitMode::Theorem3Yosida { .. } => "theorem3_yosida",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZenoRunConfig {
    pub channel: ChannelSpec,
    pub generator: GeneratorSpec,
    pub truncation: TruncationSpec,
    pub total_time: f64,
    pub n_grid: Vec<usize>,
    pub initial_state: StateSpec,
    #[serde(default)]
    pub limit_mode: LimitMode,
    #[serde(default)]
    pub seed: u64,
}

impl ZenoRunConfig {
    pub fn validate(&self) -> Result<()> {
        self.truncation.validate()?;
        validate_grid(&self.n_grid)?;
        if !(self.total_time >= 0.0 && self.total_time.is_finite()) {
            return Err(ZenoError::Parameter(format!("total_time must be finite and nonnegative, got {}", self.total_time)));
        }
        if let LimitMode::Theorem3Yosida { beta } = self.limit_mode {
            if !(beta > 0.0 && beta.is_finite()) {
                return Err(ZenoError::Parameter(format!("beta must be positive, got {beta}")));
            }
        }
        self.initial_state.build(self.truncation.dim)?;
        Ok(())
    }

    pub fn problem(&self) -> Result<ZenoProblem> {
        self.validate()?;
        let m = self.channel.build(&self.truncation)?;
        let truncated = m.truncated;
        let m = m.superoperator()?;
        let l = self.generator.build(&self.truncation, self.seed)?;
        let rho0 = self.initial_state.build(self.truncation.dim)?;
        let mut p = ZenoProblem::new(m, l, self.total_time, rho0)?;
        p.truncated = truncated;
        Ok(p)
    }
}

pub fn validate_grid(n_grid: &[usize]) -> Result<()> {
    if n_grid.is_empty() {
        return Err(ZenoError::Parameter("n_grid is empty".into()));
    }
    if n_grid[0] == 0 {
        return Err(ZenoError::Parameter("n_grid entries must be at least 1".into()));
    }
    if n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ZenoError::Parameter("n_grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Built inputs of a Zeno run.
#[derive(Clone, Debug)]
pub struct ZenoProblem {
    pub m: Superoperator,
    pub l: Superoperator,
    pub t: f64,
    pub rho0: CMatrix,
    pub truncated: bool,
}

impl ZenoProblem {
    pub fn new(m: Superoperator, l: Superoperator, t: f64, rho0: CMatrix) -> Result<Self> {
        if m.dim() != l.dim() || rho0.shape() != (m.dim(), m.dim()) {
            return Err(ZenoError::Dimension("M, L and the initial state must share one space".into()));
        }
        crate::channels::validate_state(&rho0)?;
        Ok(Self { m, l, t, rho0, truncated: false })
    }

    pub fn peripheral(&self) -> Result<PeripheralReport> {
        let opts = PeripheralOptions { truncated: self.truncated, ..Default::default() };
        peripheral_analysis_with(self.m.matrix(), Some(self.m.dim()), &opts)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CurveDiagnostics {
    pub generator_norm: f64,
    /// ‖M∘L‖ and ‖L∘M‖ (spectral-norm proxies).
    pub ml_norm: f64,
    pub lm_norm: f64,
    pub unbounded_emulation: bool,
    pub yosida_k: Vec<(usize, u64)>,
    pub max_trace_drift: f64,
    pub max_trace_increase: f64,
    pub min_eigenvalue: Option<f64>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZenoErrorCurve {
    pub mode: LimitMode,
    /// (n, trace-norm error), sorted by n.
    pub samples: Vec<(usize, f64)>,
    #[serde(flatten)]
    pub fit: FitOutcome,
    pub diagnostics: CurveDiagnostics,
}

impl ZenoErrorCurve {
    pub fn fitted_slope(&self) -> Option<f64> {
        self.fit.fit.as_ref().map(|f| f.slope)
    }

    pub fn error_at(&self, n: usize) -> Option<f64> {
        self.samples.iter().find(|s| s.0 == n).map(|s| s.1)
    }
}

enum Limit {
    Theorem1(Theorem1Limit),
    Strong(Superoperator),
    Yosida { report: PeripheralReport, beta: f64 },
}

fn yosida_k(n: usize, beta: f64) -> u64 {
    ((n as f64).powf(beta) - 1e-12).ceil().max(1.0) as u64
}

impl Limit {
    fn apply(&self, problem: &ZenoProblem, n: usize) -> Result<CMatrix> {
        match self {
            Limit::Theorem1(lim) => lim.apply(n as u64, &problem.rho0),
            Limit::Strong(s) => Ok(s.apply(&problem.rho0)),
            Limit::Yosida { report, beta } => {
                let lk = yosida_generator(&problem.l, yosida_k(n, *beta) as f64)?;
                zeno_limit_theorem1(&problem.m, &lk, problem.t, report)?.apply(n as u64, &problem.rho0)
            }
        }
    }
}

/// Zeno error against the limit selected by `mode` at each n.
pub fn error_curve(problem: &ZenoProblem, n_grid: &[usize], mode: LimitMode) -> Result<ZenoErrorCurve> {
    validate_grid(n_grid)?;
    let limit = match mode {
        LimitMode::Theorem1 => Limit::Theorem1(zeno_limit_theorem1(&problem.m, &problem.l, problem.t, &problem.peripheral()?)?),
        LimitMode::Theorem2 => Limit::Strong(zeno_limit_strong_estimated(&problem.m, &problem.l, problem.t)?.0),
        LimitMode::Theorem3Yosida { beta } => {
            let report = problem.peripheral()?;
            if !report.admissible {
                return Err(ZenoError::NotAdmissible(report.reasons.join("; ")));
            }
            Limit::Yosida { report, beta }
        }
    };
    let rows: Vec<Result<(usize, f64, super::product::ZenoProduct)>> = n_grid
        .par_iter()
        .map(|&n| {
            let step = mat_exp_scaled(problem.l.matrix(), problem.t / n as f64)?;
            let prod = zeno_product_with_step(&problem.m, &step, n, &problem.rho0)?;
            let target = limit.apply(problem, n)?;
            let err = trace_norm(&(&prod.state - &target))?;
            Ok((n, err, prod))
        })
        .collect();
    let mut samples = Vec::with_capacity(rows.len());
    let mut diag = CurveDiagnostics::default();
    for r in rows {
        let (n, err, prod) = r?;
        samples.push((n, err));
        diag.max_trace_drift = diag.max_trace_drift.max(prod.trace_drift);
        diag.max_trace_increase = diag.max_trace_increase.max(prod.trace_increase);
        if let Some(e) = prod.min_eigenvalue {
            diag.min_eigenvalue = Some(diag.min_eigenvalue.map_or(e, |m: f64| m.min(e)));
        }
    }
    samples.sort_by_key(|s| s.0);
    diag.generator_norm = problem.l.spectral_norm_proxy()?;
    diag.ml_norm = problem.m.compose(&problem.l).spectral_norm_proxy()?;
    diag.lm_norm = problem.l.compose(&problem.m).spectral_norm_proxy()?;
    diag.unbounded_emulation = diag.generator_norm >= UNBOUNDED_NORM;
    if let LimitMode::Theorem3Yosida { beta } = mode {
        diag.yosida_k = n_grid.iter().map(|&n| (n, yosida_k(n, beta))).collect();
        if diag.unbounded_emulation {
            diag.notes.push("generator norm at truncation emulates an unbounded generator; truncation-level evidence only".into());
        }
    }
    if problem.truncated {
        diag.notes.push("operators built on a Fock truncation".into());
    }
    let fit = fit_loglog(&samples);
    if !fit.excluded.is_empty() {
        diag.notes.push(format!("zero error at n = {:?} excluded from the fit", fit.excluded));
    }
    Ok(ZenoErrorCurve { mode, samples, fit, diagnostics: diag })
}

pub fn zeno_error_curve(cfg: &ZenoRunConfig) -> Result<ZenoErrorCurve> {
    error_curve(&cfg.problem()?, &cfg.n_grid, cfg.limit_mode)
}

pub fn zeno_theorem3_yosida(cfg: &ZenoRunConfig, beta: f64) -> Result<ZenoErrorCurve> {
    let cfg = ZenoRunConfig { limit_mode: LimitMode::Theorem3Yosida { beta }, ..cfg.clone() };
    zeno_error_curve(&cfg)
}

/// Ĉ fitted at one n and the rate inequality checked at later n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub l_norm: f64,
    pub delta: f64,
    pub delta_tilde: f64,
    pub n_fit: usize,
    pub c_hat: f64,
    /// (n, error, Ĉ·bound)
    pub rows: Vec<(usize, f64, f64)>,
    pub holds: bool,
}

pub fn delta_tilde(delta: f64) -> f64 {
    (delta + 0.05).min(0.999)
}

/// ‖L‖n^{−2/3} + ‖L‖²n^{−1} + δ̃^{n+1}
pub fn theorem1_rate(l_norm: f64, delta_tilde: f64, n: usize) -> f64 {
    let nf = n as f64;
    l_norm * nf.powf(-2.0 / 3.0) + l_norm * l_norm / nf + delta_tilde.powi(n as i32 + 1)
}

pub fn fit_bound(errors: &[(usize, f64)], l_norm: f64, delta: f64, n_fit: usize) -> Result<BoundCheck> {
    let dt = delta_tilde(delta);
    let e_fit = errors
        .iter()
        .find(|e| e.0 == n_fit)
        .ok_or_else(|| ZenoError::Parameter(format!("no error sample at n = {n_fit}")))?
        .1;
    let c_hat = e_fit / theorem1_rate(l_norm, dt, n_fit);
    let rows: Vec<(usize, f64, f64)> = errors
        .iter()
        .filter(|e| e.0 > n_fit)
        .map(|&(n, e)| (n, e, c_hat * theorem1_rate(l_norm, dt, n)))
        .collect();
    let holds = rows.iter().all(|r| r.1 <= r.2);
    Ok(BoundCheck { l_norm, delta, delta_tilde: dt, n_fit, c_hat, rows, holds })
}

/// Operator-level errors of the peripheral limit: induced trace-norm lower bounds of (Me^{tL/n})ⁿ − limit(n).
pub fn theorem1_operator_errors(problem: &ZenoProblem, ns: &[usize], seed: u64) -> Result<Vec<(usize, f64)>> {
    let lim = zeno_limit_theorem1(&problem.m, &problem.l, problem.t, &problem.peripheral()?)?;
    ns.par_iter()
        .map(|&n| {
            let prod = super::product::zeno_product_superop(&problem.m, &problem.l, problem.t, n)?;
            let diff = prod.sub(&lim.at(n as u64)?);
            Ok((n, diff.induced_trace_norm_lb(crate::linalg::induced::DEFAULT_SAMPLES, seed)?))
        })
        .collect()
}

impl Default for ZenoRunConfig {
    fn default() -> Self {
        Self {
            channel: ChannelSpec::Identity,
            generator: GeneratorSpec::Zero,
            truncation: TruncationSpec { dim: 2, leakage_tol: crate::channels::fock::DEFAULT_LEAKAGE_TOL },
            total_time: 1.0,
            n_grid: vec![1],
            initial_state: StateSpec::Fock { n: 0 },
            limit_mode: LimitMode::Theorem1,
            seed: 0,
        }
    }
}
