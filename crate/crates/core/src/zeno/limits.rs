use crate::error::{Result, ZenoError};
use crate::linalg::{mat_exp, mat_exp_scaled, CMat};
use crate::semigroup::Superoperator;
use crate::spectral::{estimate_limit_projector, PeripheralReport, ProjectorSource};
use crate::{CMatrix, C64};

/// Idempotency defect above which a supplied projector is rejected.
pub const PROJECTOR_TOL: f64 = 1e-8;

/// n ↦ Σ_j e^{tP_jLP_j} λ_jⁿ P_j together with the composed form e^{tΣP_jLP_j} Mⁿ.
#[derive(Clone, Debug)]
pub struct Theorem1Limit {
    dim: usize,
    eigenvalues: Vec<C64>,
    /// e^{tP_jLP_j} P_j
    blocks: Vec<CMatrix>,
    composed_exp: CMatrix,
    m: CMatrix,
}

impl Theorem1Limit {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }

    pub fn at(&self, n: u64) -> Result<Superoperator> {
        let size = self.dim * self.dim;
        let mut sum = CMat::zeros(size, size);
        for (lambda, b) in self.eigenvalues.iter().zip(&self.blocks) {
            sum += &b.scale(lambda.powu(n as u32));
        }
        Superoperator::new(self.dim, sum)
    }

    pub fn apply(&self, n: u64, x: &CMatrix) -> Result<CMatrix> {
        Ok(self.at(n)?.apply(x))
    }

    /// e^{tΣP_jLP_j} Mⁿ
    pub fn composed(&self, n: u64) -> Result<Superoperator> {
        Superoperator::new(self.dim, self.composed_exp.matmul(&self.m.powi(n)))
    }

    /// HS distance between the two forms at each n.
    pub fn cross_check(&self, ns: &[u64]) -> Result<Vec<(u64, f64)>> {
        ns.iter()
            .map(|&n| Ok((n, (self.at(n)?.matrix() - self.composed(n)?.matrix()).hs_norm())))
            .collect()
    }
}

pub fn zeno_limit_theorem1(m: &Superoperator, l: &Superoperator, t: f64, report: &PeripheralReport) -> Result<Theorem1Limit> {
    if m.dim() != l.dim() {
        return Err(ZenoError::Dimension("M and L act on different spaces".into()));
    }
    if report.size != m.dim() * m.dim() {
        return Err(ZenoError::Dimension("peripheral report belongs to a different operator".into()));
    }
    if !report.admissible {
        return Err(ZenoError::NotAdmissible(report.reasons.join("; ")));
    }
    let size = m.dim() * m.dim();
    let mut blocks = Vec::with_capacity(report.peripheral.len());
    let mut generator = CMat::zeros(size, size);
    for p in &report.projectors {
        let plp = p.matmul(l.matrix()).matmul(p);
        blocks.push(mat_exp_scaled(&plp, t)?.matmul(p));
        generator += &plp;
    }
    Ok(Theorem1Limit {
        dim: m.dim(),
        eigenvalues: report.eigenvalues(),
        blocks,
        composed_exp: mat_exp(&generator.scale_re(t))?,
        m: m.matrix().clone(),
    })
}

/// e^{tPLP} P
pub fn zeno_limit_strong(m: &Superoperator, p: &Superoperator, l: &Superoperator, t: f64) -> Result<Superoperator> {
    if m.dim() != p.dim() || m.dim() != l.dim() {
        return Err(ZenoError::Dimension("M, P and L act on different spaces".into()));
    }
    let defect = p.idempotency_defect();
    if defect > PROJECTOR_TOL {
        return Err(ZenoError::Projector { defect });
    }
    let plp = p.matrix().matmul(l.matrix()).matmul(p.matrix());
    Superoperator::new(m.dim(), mat_exp_scaled(&plp, t)?.matmul(p.matrix()))
}

/// Strong limit with P̂ estimated from M; unstable estimates are rejected.
pub fn zeno_limit_strong_estimated(m: &Superoperator, l: &Superoperator, t: f64) -> Result<(Superoperator, Superoperator)> {
    let est = estimate_limit_projector(m)?;
    if est.source != ProjectorSource::Peripheral && !est.stable {
        return Err(ZenoError::Estimation(format!(
            "rank of M^(2^k) did not settle: history {:?}",
            est.rank_history
        )));
    }
    if est.idempotency_defect > PROJECTOR_TOL {
        return Err(ZenoError::Estimation(format!(
            "limit estimate is not idempotent (defect {:.3e})",
            est.idempotency_defect
        )));
    }
    let limit = zeno_limit_strong(m, &est.projector, l, t)?;
    Ok((limit, est.projector))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{
        depolarizing, depolarizing_limit_projector, hamiltonian_generator, oscillator_conjugation, TruncationSpec,
    };
    use crate::random::{random_gkls, rng};
    use crate::semigroup::evolve;
    use crate::spectral::peripheral_analysis;

    #[test]
    fn identity_channel_limit_is_the_semigroup() {
        let l = random_gkls(2, 2, &mut rng(3)).unwrap().lindbladian().unwrap();
        let m = Superoperator::identity(2);
        let r = peripheral_analysis(&m).unwrap();
        let lim = zeno_limit_theorem1(&m, &l, 0.7, &r).unwrap();
        assert!(lim.at(5).unwrap().matrix().approx_eq(evolve(&l, 0.7).unwrap().matrix(), 1e-9));
    }

    #[test]
    fn depolarizing_with_commutator_collapses_to_replacement() {
        let sigma = CMat::from_real_diag(&[0.5, 0.5]);
        let m = depolarizing(0.5, &sigma).unwrap();
        let l = hamiltonian_generator(&CMat::from_real_rows(&[&[0.3, 1.0], &[1.0, -0.3]])).unwrap();
        let r = peripheral_analysis(&m).unwrap();
        let lim = zeno_limit_theorem1(&m, &l, 1.0, &r).unwrap();
        let p = depolarizing_limit_projector(&sigma).unwrap();
        for n in [1, 10, 100] {
            assert!(lim.at(n).unwrap().matrix().approx_eq(p.matrix(), 1e-9));
        }
    }

    #[test]
    fn oscillator_blocks_cross_check() {
        let trunc = TruncationSpec::new(4).unwrap();
        let m = oscillator_conjugation(2, 1.0, &trunc).unwrap();
        let a = crate::channels::annihilation(4);
        let l = crate::semigroup::GklsGenerator::dissipative(vec![a.scale_re(0.3)]).unwrap().lindbladian().unwrap();
        let r = peripheral_analysis(&m).unwrap();
        let lim = zeno_limit_theorem1(&m, &l, 1.0, &r).unwrap();
        for (_, diff) in lim.cross_check(&[1, 2, 7, 20]).unwrap() {
            assert!(diff < 1e-8, "{diff}");
        }
    }

    #[test]
    fn strong_limit_of_zero_generator_is_projector() {
        let sigma = CMat::from_real_diag(&[0.7, 0.3]);
        let m = depolarizing(0.2, &sigma).unwrap();
        let (lim, p) = zeno_limit_strong_estimated(&m, &Superoperator::zero(2), 1.0).unwrap();
        assert!(lim.matrix().approx_eq(p.matrix(), 1e-12));
        assert!(p.matrix().approx_eq(depolarizing_limit_projector(&sigma).unwrap().matrix(), 1e-9));
    }

    #[test]
    fn non_projector_is_rejected() {
        let m = Superoperator::identity(2);
        let p = Superoperator::identity(2).scale_re(0.5);
        assert!(matches!(
            zeno_limit_strong(&m, &p, &Superoperator::zero(2), 1.0),
            Err(ZenoError::Projector { .. })
        ));
    }
}
