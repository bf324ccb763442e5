use super::fock::TruncationSpec;
use crate::error::{Result, ZenoError};
use crate::linalg::{hermitian_eigvals, CMat};
use crate::semigroup::Superoperator;
use crate::{CMatrix, C64};

pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Quantum operation ρ ↦ Σ K ρ K†.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    pub dim: usize,
    pub kraus_ops: Vec<CMatrix>,
    /// ‖Σ K†K − I‖ in spectral norm.
    pub completeness_defect: f64,
    pub leakage_tol: f64,
    pub warning: Option<String>,
}

impl KrausChannel {
    /// Fails if Σ K†K exceeds I by more than 1e-10.
    pub fn new(kraus_ops: Vec<CMatrix>, leakage_tol: f64) -> Result<Self> {
        let dim = kraus_ops
            .first()
            .ok_or_else(|| ZenoError::Dimension("a Kraus channel needs at least one operator".into()))?
            .require_square("Kraus operator")?;
        let mut sum = CMat::zeros(dim, dim);
        for (i, k) in kraus_ops.iter().enumerate() {
            if k.shape() != (dim, dim) {
                return Err(ZenoError::Dimension(format!("Kraus operator {i} has shape {:?}", k.shape())));
            }
            sum += &k.adjoint().matmul(k);
        }
        let eigs = hermitian_eigvals(&(&sum - &CMat::identity(dim)).hermitian_part())?;
        let (lo, hi) = (eigs[0], eigs[dim - 1]);
        if hi > COMPLETENESS_TOL {
            return Err(ZenoError::Parameter(format!(
                "Kraus operators are not trace non-increasing (largest excess {hi:.3e})"
            )));
        }
        let completeness_defect = lo.abs().max(hi.abs());
        let warning = (completeness_defect > leakage_tol).then(|| {
            format!("truncation leakage {completeness_defect:.3e} exceeds tolerance {leakage_tol:.1e}")
        });
        Ok(Self {
            dim,
            kraus_ops,
            completeness_defect,
            leakage_tol,
            warning,
        })
    }

    pub fn superoperator(&self) -> Superoperator {
        Superoperator::from_kraus(&self.kraus_ops).expect("validated Kraus operators")
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMat::zeros(self.dim, self.dim);
        for k in &self.kraus_ops {
            out += &k.matmul(rho).matmul(&k.adjoint());
        }
        out
    }

    /// Trace lost from `rho`.
    pub fn leakage(&self, rho: &CMatrix) -> f64 {
        rho.trace().re - self.apply(rho).trace().re
    }
}

fn ln_binom(n: usize, k: usize) -> f64 {
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

/// Bosonic attenuator: K_l = Σ_m √C(m+l, m) (1−e^{−t})^{l/2} e^{−tm/2} |m⟩⟨m+l|.
pub fn attenuator(t: f64, trunc: &TruncationSpec) -> Result<KrausChannel> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(ZenoError::Parameter(format!("attenuation time must be positive, got {t}")));
    }
    trunc.validate()?;
    let d = trunc.dim;
    let ln_loss = (-(-t).exp_m1()).ln();
    let ops = (0..d)
        .map(|l| {
            let mut k = CMat::zeros(d, d);
            for m in 0..d - l {
                let ln = 0.5 * ln_binom(m + l, l) + 0.5 * l as f64 * ln_loss - 0.5 * t * m as f64;
                k[(m, m + l)] = C64::new(ln.exp(), 0.0);
            }
            k
        })
        .collect();
    KrausChannel::new(ops, trunc.leakage_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attenuator_is_complete() {
        for d in [8, 16, 32] {
            let ch = attenuator(0.3, &TruncationSpec::new(d).unwrap()).unwrap();
            assert!(ch.completeness_defect < 1e-12, "D = {d}: {}", ch.completeness_defect);
            assert!(ch.warning.is_none());
        }
    }

    #[test]
    fn attenuator_is_cp_and_tp() {
        let s = attenuator(0.7, &TruncationSpec::new(6).unwrap()).unwrap().superoperator().verified().unwrap();
        assert!(s.is_channel());
    }

    #[test]
    fn vacuum_is_fixed_and_one_photon_decays() {
        let t = 0.4;
        let ch = attenuator(t, &TruncationSpec::new(5).unwrap()).unwrap();
        assert!(ch.apply(&CMat::unit(5, 0, 0)).approx_eq(&CMat::unit(5, 0, 0), 1e-15));
        let out = ch.apply(&CMat::unit(5, 1, 1));
        assert!((out[(1, 1)].re - (-t).exp()).abs() < 1e-14);
        assert!((out[(0, 0)].re - (1.0 - (-t).exp())).abs() < 1e-14);
    }

    #[test]
    fn excess_completeness_is_rejected() {
        let k = CMat::identity(2).scale_re(1.1);
        assert!(KrausChannel::new(vec![k], 1e-6).is_err());
    }

    #[test]
    fn leaky_operators_carry_a_warning() {
        let k = CMat::identity(2).scale_re(0.9);
        let ch = KrausChannel::new(vec![k], 1e-6).unwrap();
        assert!(ch.warning.is_some());
        assert!((ch.leakage(&CMat::unit(2, 0, 0)) - 0.19).abs() < 1e-14);
    }
}
