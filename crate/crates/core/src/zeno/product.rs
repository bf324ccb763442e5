use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};
use crate::linalg::{hermitian_eigvals, mat_exp_scaled, unvec, vec, CMat};
use crate::semigroup::Superoperator;
use crate::{CMatrix, C64};

/// (M e^{tL/n})ⁿ x with drift diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZenoProduct {
    pub n: usize,
    #[serde(skip)]
    pub state: CMatrix,
    /// max over steps of |tr(x_k) − tr(x)|
    pub trace_drift: f64,
    /// Largest single-step increase of the trace.
    pub trace_increase: f64,
    /// Smallest eigenvalue of the output, when the input is Hermitian.
    pub min_eigenvalue: Option<f64>,
}

fn vec_trace(v: &[C64], d: usize) -> C64 {
    (0..d).map(|i| v[i * d + i]).sum()
}

/// Runs the product from a precomputed step e^{tL/n}.
pub fn zeno_product_with_step(m: &Superoperator, step: &CMatrix, n: usize, x: &CMatrix) -> Result<ZenoProduct> {
    let d = m.dim();
    if n == 0 {
        return Err(ZenoError::Parameter("Zeno product needs n >= 1".into()));
    }
    if x.shape() != (d, d) {
        return Err(ZenoError::Dimension(format!("input must be {d}x{d}")));
    }
    let mut v = vec(x);
    let tr0 = vec_trace(&v, d).re;
    let mut prev = tr0;
    let mut trace_drift: f64 = 0.0;
    let mut trace_increase: f64 = 0.0;
    for _ in 0..n {
        v = m.matrix().mul_vec(&step.mul_vec(&v));
        let tr = vec_trace(&v, d).re;
        trace_drift = trace_drift.max((tr - tr0).abs());
        trace_increase = trace_increase.max(tr - prev);
        prev = tr;
    }
    let state = unvec(&v, d)?;
    let min_eigenvalue = if x.hermitian_defect() <= 1e-12 {
        hermitian_eigvals(&state.hermitian_part())?.first().copied()
    } else {
        None
    };
    Ok(ZenoProduct {
        n,
        state,
        trace_drift,
        trace_increase,
        min_eigenvalue,
    })
}

pub fn zeno_product_apply(m: &Superoperator, l: &Superoperator, t: f64, n: usize, x: &CMatrix) -> Result<ZenoProduct> {
    if m.dim() != l.dim() {
        return Err(ZenoError::Dimension("M and L act on different spaces".into()));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(ZenoError::Parameter(format!("t must be finite and nonnegative, got {t}")));
    }
    if n == 0 {
        return Err(ZenoError::Parameter("Zeno product needs n >= 1".into()));
    }
    let step = mat_exp_scaled(l.matrix(), t / n as f64)?;
    zeno_product_with_step(m, &step, n, x)
}

/// (M e^{tL/n})ⁿ as a superoperator, built by n compositions.
pub fn zeno_product_superop(m: &Superoperator, l: &Superoperator, t: f64, n: usize) -> Result<Superoperator> {
    if n == 0 {
        return Err(ZenoError::Parameter("Zeno product needs n >= 1".into()));
    }
    let step = m.matrix().matmul(&mat_exp_scaled(l.matrix(), t / n as f64)?);
    let mut acc = CMat::identity(step.rows());
    for _ in 0..n {
        acc = step.matmul(&acc);
    }
    Superoperator::new(m.dim(), acc)
}
