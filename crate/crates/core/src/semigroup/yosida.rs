use serde::{Deserialize, Serialize};

use super::gkls::evolve;
use super::superop::Superoperator;
use crate::error::{Result, ZenoError};
use crate::linalg::{induced::DEFAULT_SAMPLES, resolvent};
use crate::C64;

/// Yosida approximant with its resolvent diagnostics.
#[derive(Clone, Debug)]
pub struct YosidaApproximant {
    pub k: f64,
    pub generator: Superoperator,
    /// Induced trace-norm lower bound of k(k − L)⁻¹.
    pub resolvent_bound_lb: f64,
    /// Spectral norm of the d²×d² matrix of k(k − L)⁻¹ (proxy).
    pub resolvent_bound_proxy: f64,
    /// Spectral norm proxy of 𝓛_k.
    pub generator_norm_proxy: f64,
}

fn scaled_resolvent(l: &Superoperator, k: f64) -> Result<Superoperator> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(ZenoError::Parameter(format!("Yosida parameter must be positive, got {k}")));
    }
    let r = resolvent(l.matrix(), C64::new(k, 0.0))?;
    Superoperator::new(l.dim(), r.scale_re(k))
}

/// 𝓛_k = k·L·(k − L)⁻¹ without diagnostics.
pub fn yosida_generator(l: &Superoperator, k: f64) -> Result<Superoperator> {
    let kr = scaled_resolvent(l, k)?;
    Ok(l.compose(&kr))
}

pub fn yosida(l: &Superoperator, k: f64) -> Result<YosidaApproximant> {
    let kr = scaled_resolvent(l, k)?;
    let generator = l.compose(&kr);
    Ok(YosidaApproximant {
        k,
        resolvent_bound_lb: kr.induced_trace_norm_lb(DEFAULT_SAMPLES, 0x5eed)?,
        resolvent_bound_proxy: kr.spectral_norm_proxy()?,
        generator_norm_proxy: generator.spectral_norm_proxy()?,
        generator,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YosidaLemmaReport {
    pub ks: Vec<f64>,
    /// ‖B𝓛B − B𝓛_kB‖ (spectral proxy).
    pub deviations: Vec<f64>,
    /// ‖B e^{𝓛} B − B e^{𝓛_k} B‖ (spectral proxy, t = 1).
    pub semigroup_deviations: Vec<f64>,
    /// Least-squares C in deviation ≈ C/k.
    pub fitted_constant: f64,
    pub fitted_semigroup_constant: f64,
    /// deviation·k grew by more than 10% across the list.
    pub violation: bool,
}

fn fit_inverse(ks: &[f64], devs: &[f64]) -> f64 {
    let num: f64 = ks.iter().zip(devs).map(|(k, d)| d / k).sum();
    let den: f64 = ks.iter().map(|k| 1.0 / (k * k)).sum();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn grows(ks: &[f64], devs: &[f64]) -> bool {
    let scaled: Vec<f64> = ks.iter().zip(devs).map(|(k, d)| k * d).collect();
    match (scaled.first(), scaled.last()) {
        (Some(&first), Some(&last)) if first > 0.0 => last > 1.1 * first,
        (Some(&first), Some(&last)) => first == 0.0 && last > 1e-12,
        _ => false,
    }
}

pub fn yosida_lemma_check(l: &Superoperator, b: &Superoperator, k_list: &[f64]) -> Result<YosidaLemmaReport> {
    if k_list.is_empty() {
        return Err(ZenoError::Parameter("k list is empty".into()));
    }
    if l.dim() != b.dim() {
        return Err(ZenoError::Dimension("generator and B act on different spaces".into()));
    }
    let blb = b.compose(l).compose(b);
    let bsb = b.compose(&evolve(l, 1.0)?).compose(b);
    let mut deviations = Vec::with_capacity(k_list.len());
    let mut semigroup_deviations = Vec::with_capacity(k_list.len());
    for &k in k_list {
        let lk = yosida_generator(l, k)?;
        deviations.push(blb.sub(&b.compose(&lk).compose(b)).spectral_norm_proxy()?);
        semigroup_deviations.push(bsb.sub(&b.compose(&evolve(&lk, 1.0)?).compose(b)).spectral_norm_proxy()?);
    }
    Ok(YosidaLemmaReport {
        ks: k_list.to_vec(),
        fitted_constant: fit_inverse(k_list, &deviations),
        fitted_semigroup_constant: fit_inverse(k_list, &semigroup_deviations),
        violation: grows(k_list, &deviations) || grows(k_list, &semigroup_deviations),
        deviations,
        semigroup_deviations,
    })
}
