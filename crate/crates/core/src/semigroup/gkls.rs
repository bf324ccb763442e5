use super::superop::Superoperator;
use crate::error::{Result, ZenoError};
use crate::linalg::{mat_exp, CMat};
use crate::{CMatrix, C64};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// GKLS data (H, {L_l}); K = −iH − ½ Σ L†L is derived.
#[derive(Clone, Debug)]
pub struct GklsGenerator {
    dim: usize,
    hamiltonian: CMatrix,
    lindblads: Vec<CMatrix>,
}

fn scale_of(m: &CMatrix) -> f64 {
    m.max_abs().max(1.0)
}

impl GklsGenerator {
    pub fn new(hamiltonian: CMatrix, lindblads: Vec<CMatrix>) -> Result<Self> {
        let dim = hamiltonian.require_square("Hamiltonian")?;
        let defect = hamiltonian.hermitian_defect();
        if defect > HERMITIAN_TOL * scale_of(&hamiltonian) {
            return Err(ZenoError::Parameter(format!("Hamiltonian is not Hermitian (defect {defect:.3e})")));
        }
        for (i, l) in lindblads.iter().enumerate() {
            if l.shape() != (dim, dim) {
                return Err(ZenoError::Dimension(format!(
                    "Lindblad operator {i} is {}x{}, expected {dim}x{dim}",
                    l.rows(),
                    l.cols()
                )));
            }
            if !l.is_finite() {
                return Err(ZenoError::Parameter(format!("Lindblad operator {i} has non-finite entries")));
            }
        }
        Ok(Self {
            dim,
            hamiltonian: hamiltonian.hermitian_part(),
            lindblads,
        })
    }

    /// Pure dissipation with H = 0.
    pub fn dissipative(lindblads: Vec<CMatrix>) -> Result<Self> {
        let d = lindblads
            .first()
            .ok_or_else(|| ZenoError::Dimension("no Lindblad operators and no Hamiltonian".into()))?
            .rows();
        Self::new(CMat::zeros(d, d), lindblads)
    }

    /// From (K, {L_l}); fails unless K + K† + Σ L†L = 0.
    pub fn from_k(k: CMatrix, lindblads: Vec<CMatrix>) -> Result<Self> {
        let d = k.require_square("K")?;
        let mut sum = &k + &k.adjoint();
        for l in &lindblads {
            if l.shape() != (d, d) {
                return Err(ZenoError::Dimension("Lindblad operator size differs from K".into()));
            }
            sum += &l.adjoint().matmul(l);
        }
        let residual = sum.max_abs();
        if residual > CONSTRAINT_TOL * scale_of(&k) {
            return Err(ZenoError::Constraint { residual });
        }
        let h = (&k - &k.adjoint()).scale(C64::new(0.0, 0.5));
        Self::new(h, lindblads)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn lindblads(&self) -> &[CMatrix] {
        &self.lindblads
    }

    pub fn k(&self) -> CMatrix {
        let mut k = self.hamiltonian.scale(C64::new(0.0, -1.0));
        for l in &self.lindblads {
            k -= &l.adjoint().matmul(l).scale_re(0.5);
        }
        k
    }

    /// max |K + K† + Σ L†L|.
    pub fn constraint_residual(&self) -> f64 {
        let k = self.k();
        let mut sum = &k + &k.adjoint();
        for l in &self.lindblads {
            sum += &l.adjoint().matmul(l);
        }
        sum.max_abs()
    }

    /// Generator with H ↦ sH and L ↦ √s L, so 𝓛 ↦ s𝓛.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s >= 0.0) {
            return Err(ZenoError::Parameter(format!("generator scale must be nonnegative, got {s}")));
        }
        Self::new(
            self.hamiltonian.scale_re(s),
            self.lindblads.iter().map(|l| l.scale_re(s.sqrt())).collect(),
        )
    }

    pub fn lindbladian(&self) -> Result<Superoperator> {
        lindbladian(self)
    }
}

/// 𝓛(ρ) = Kρ + ρK† + Σ LρL†.
pub fn lindbladian(g: &GklsGenerator) -> Result<Superoperator> {
    let residual = g.constraint_residual();
    if residual > CONSTRAINT_TOL * scale_of(&g.k()) {
        return Err(ZenoError::Constraint { residual });
    }
    let d = g.dim;
    let k = g.k();
    let id = CMat::identity(d);
    let mut m = &id.kron(&k) + &k.conj().kron(&id);
    for l in &g.lindblads {
        m += &l.conj().kron(l);
    }
    let s = Superoperator::new(d, m)?.mark_gkls();
    let flow_defect = s.dual_identity().max_abs();
    if flow_defect > 1e-11 * scale_of(s.matrix()) {
        return Err(ZenoError::Constraint { residual: flow_defect });
    }
    Ok(s)
}

/// e^{tL}.
pub fn evolve(l: &Superoperator, t: f64) -> Result<Superoperator> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(ZenoError::Parameter(format!("evolution time must be finite and nonnegative, got {t}")));
    }
    Superoperator::new(l.dim(), mat_exp(&l.matrix().scale_re(t))?)
}

/// P∘L∘P for an idempotent P.
pub fn effective_zeno_generator(l: &Superoperator, p: &Superoperator) -> Result<Superoperator> {
    if l.dim() != p.dim() {
        return Err(ZenoError::Dimension("generator and projector act on different spaces".into()));
    }
    let defect = p.idempotency_defect();
    if defect > 1e-10 {
        return Err(ZenoError::Projector { defect });
    }
    Ok(p.compose(l).compose(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn qubit_example() -> GklsGenerator {
        let k = CMat::identity(2).scale_re(-0.5);
        let l0 = CMat::unit(2, 0, 0);
        let l1 = CMat::unit(2, 0, 1);
        GklsGenerator::from_k(k, vec![l0, l1]).unwrap()
    }

    #[test]
    fn empty_generator_is_zero() {
        let g = GklsGenerator::new(CMat::zeros(3, 3), vec![]).unwrap();
        let l = g.lindbladian().unwrap();
        assert_eq!(l.matrix().max_abs(), 0.0);
    }

    #[test]
    fn qubit_example_effective_generator_loses_trace() {
        let g = qubit_example();
        assert_eq!(g.constraint_residual(), 0.0);
        let l = g.lindbladian().unwrap();
        let pi = CMat::unit(2, 1, 1);
        let p = Superoperator::sandwich(&pi, &pi).unwrap();
        let eff = effective_zeno_generator(&l, &p).unwrap();
        let out = eff.apply(&pi);
        assert!((out.trace() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(out.approx_eq(&pi.scale_re(-1.0), 1e-15));
    }

    #[test]
    fn inconsistent_k_is_a_constraint_error() {
        let k = CMat::identity(2).scale_re(-0.25);
        let err = GklsGenerator::from_k(k, vec![CMat::unit(2, 0, 1)]).unwrap_err();
        assert!(matches!(err, ZenoError::Constraint { .. }));
    }

    #[test]
    fn non_hermitian_hamiltonian_is_rejected() {
        assert!(GklsGenerator::new(CMat::unit(2, 0, 1), vec![]).is_err());
    }

    #[test]
    fn identity_projector_returns_generator() {
        let l = qubit_example().lindbladian().unwrap();
        let eff = effective_zeno_generator(&l, &Superoperator::identity(2)).unwrap();
        assert!(eff.matrix().approx_eq(l.matrix(), 0.0));
    }

    #[test]
    fn non_idempotent_projector_is_rejected() {
        let l = qubit_example().lindbladian().unwrap();
        let err = effective_zeno_generator(&l, &Superoperator::identity(2).scale_re(0.5)).unwrap_err();
        assert!(matches!(err, ZenoError::Projector { .. }));
    }

    #[test]
    fn negative_time_is_rejected() {
        let l = qubit_example().lindbladian().unwrap();
        assert!(evolve(&l, -1.0).is_err());
        assert!(evolve(&l, 0.0).unwrap().matrix().approx_eq(&CMat::identity(4), 0.0));
    }
}
