use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};
use crate::linalg::{
    hermitian_eigvals, induced_trace_norm_lb, induced_trace_norm_ub, sandwich, spectral_norm, unvec, vec, vec_index, CMat,
};
use crate::{CMatrix, C64};

/// Tolerance used when verifying structural flags.
pub const FLAG_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Verified,
    Refuted,
    #[default]
    Unchecked,
}

impl Flag {
    fn from_check(ok: bool) -> Self {
        if ok {
            Flag::Verified
        } else {
            Flag::Refuted
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperopFlags {
    pub hermiticity_preserving: Flag,
    pub trace_preserving: Flag,
    pub trace_nonincreasing: Flag,
    pub completely_positive: Flag,
}

/// Linear map on d×d operators stored as its d²×d² column-stacking matrix.
#[derive(Clone, Debug)]
pub struct Superoperator {
    dim: usize,
    matrix: CMatrix,
    flags: SuperopFlags,
    gkls: bool,
}

impl Superoperator {
    pub fn new(dim: usize, matrix: CMatrix) -> Result<Self> {
        if matrix.rows() != dim * dim || matrix.cols() != dim * dim {
            return Err(ZenoError::Dimension(format!(
                "a superoperator on {dim}x{dim} operators needs a {0}x{0} matrix, got {1}x{2}",
                dim * dim,
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_finite() {
            return Err(ZenoError::Dimension("superoperator with non-finite entries".into()));
        }
        Ok(Self {
            dim,
            matrix,
            flags: SuperopFlags::default(),
            gkls: false,
        })
    }

    pub(crate) fn mark_gkls(mut self) -> Self {
        self.gkls = true;
        self
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(dim, CMat::identity(dim * dim)).expect("square by construction")
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(dim, CMat::zeros(dim * dim, dim * dim)).expect("square by construction")
    }

    /// X ↦ A·X·B
    pub fn sandwich(a: &CMatrix, b: &CMatrix) -> Result<Self> {
        let d = a.require_square("sandwich")?;
        if b.shape() != (d, d) {
            return Err(ZenoError::Dimension("sandwich factors differ in size".into()));
        }
        Self::new(d, sandwich(a, b))
    }

    /// X ↦ U·X·U†
    pub fn conjugation(u: &CMatrix) -> Result<Self> {
        Self::sandwich(u, &u.adjoint())
    }

    /// X ↦ Σ K X K†
    pub fn from_kraus(kraus: &[CMatrix]) -> Result<Self> {
        let d = kraus
            .first()
            .ok_or_else(|| ZenoError::Dimension("empty Kraus list".into()))?
            .require_square("Kraus operator")?;
        let mut m = CMat::zeros(d * d, d * d);
        for k in kraus {
            if k.shape() != (d, d) {
                return Err(ZenoError::Dimension("Kraus operators differ in size".into()));
            }
            m += &k.conj().kron(k);
        }
        Self::new(d, m)
    }

    /// Matrix of an arbitrary linear action, built column by column on matrix units.
    pub fn from_action(dim: usize, f: impl Fn(&CMatrix) -> CMatrix) -> Result<Self> {
        let n = dim * dim;
        let mut m = CMat::zeros(n, n);
        for j in 0..dim {
            for i in 0..dim {
                let col = vec(&f(&CMat::unit(dim, i, j)));
                m.set_column(vec_index(dim, i, j), &col);
            }
        }
        Self::new(dim, m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn flags(&self) -> SuperopFlags {
        self.flags
    }

    pub fn is_gkls_generator(&self) -> bool {
        self.gkls
    }

    fn derived(&self, matrix: CMatrix) -> Self {
        Self {
            dim: self.dim,
            matrix,
            flags: SuperopFlags::default(),
            gkls: false,
        }
    }

    fn same_dim(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "superoperators act on different spaces");
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        assert_eq!(x.shape(), (self.dim, self.dim), "operand does not match superoperator dimension");
        unvec(&self.matrix.mul_vec(&vec(x)), self.dim).expect("shape checked")
    }

    /// self ∘ other
    pub fn compose(&self, other: &Self) -> Self {
        self.same_dim(other);
        self.derived(self.matrix.matmul(&other.matrix))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_dim(other);
        self.derived(&self.matrix + &other.matrix)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_dim(other);
        self.derived(&self.matrix - &other.matrix)
    }

    pub fn scale(&self, s: C64) -> Self {
        self.derived(self.matrix.scale(s))
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.derived(self.matrix.scale_re(s))
    }

    pub fn powi(&self, n: u64) -> Self {
        self.derived(self.matrix.powi(n))
    }

    /// Hilbert-Schmidt adjoint (Heisenberg picture).
    pub fn adjoint(&self) -> Self {
        self.derived(self.matrix.adjoint())
    }

    /// C = Σ |i⟩⟨j| ⊗ S(|i⟩⟨j|).
    pub fn choi(&self) -> CMatrix {
        let d = self.dim;
        CMat::from_fn(d * d, d * d, |r, c| {
            let (i, a) = (r / d, r % d);
            let (j, b) = (c / d, c % d);
            self.matrix[(vec_index(d, a, b), vec_index(d, i, j))]
        })
    }

    /// Smallest Choi eigenvalue, or an error if the Choi matrix is not Hermitian.
    pub fn choi_min_eigenvalue(&self) -> Result<f64> {
        let choi = self.choi();
        let defect = choi.hermitian_defect();
        if defect > FLAG_TOL {
            return Err(ZenoError::State(format!("Choi matrix not Hermitian (defect {defect:.3e})")));
        }
        Ok(hermitian_eigvals(&choi)?.first().copied().unwrap_or(0.0))
    }

    /// S†(I) as a d×d operator.
    pub fn dual_identity(&self) -> CMatrix {
        let id = vec(&CMat::identity(self.dim));
        unvec(&self.matrix.adjoint().mul_vec(&id), self.dim).expect("shape checked")
    }

    /// max |S†(I) − I| entrywise.
    pub fn trace_preservation_defect(&self) -> f64 {
        self.dual_identity().max_diff(&CMat::identity(self.dim))
    }

    /// λ_max(S†(I)) − 1; positive values mean some state gains trace.
    pub fn trace_excess(&self) -> Result<f64> {
        let a = self.dual_identity();
        if a.hermitian_defect() > FLAG_TOL {
            return Ok(f64::INFINITY);
        }
        Ok(hermitian_eigvals(&a)?.last().copied().unwrap_or(0.0) - 1.0)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.choi().hermitian_defect()
    }

    /// Runs every structural check and records the outcome.
    pub fn verified(mut self) -> Result<Self> {
        let hp = self.hermiticity_defect() <= FLAG_TOL;
        self.flags.hermiticity_preserving = Flag::from_check(hp);
        self.flags.trace_preserving = Flag::from_check(self.trace_preservation_defect() <= FLAG_TOL);
        self.flags.trace_nonincreasing = Flag::from_check(self.trace_excess()? <= FLAG_TOL);
        self.flags.completely_positive = if hp {
            Flag::from_check(self.choi_min_eigenvalue()? >= -FLAG_TOL)
        } else {
            Flag::Refuted
        };
        Ok(self)
    }

    pub fn is_quantum_operation(&self) -> bool {
        self.flags.completely_positive == Flag::Verified && self.flags.trace_nonincreasing == Flag::Verified
    }

    pub fn is_channel(&self) -> bool {
        self.flags.completely_positive == Flag::Verified && self.flags.trace_preserving == Flag::Verified
    }

    /// ‖P∘P − P‖_HS of the matrix.
    pub fn idempotency_defect(&self) -> f64 {
        (&self.matrix.matmul(&self.matrix) - &self.matrix).hs_norm()
    }

    /// Spectral norm of the d²×d² matrix, a proxy for the induced trace norm.
    pub fn spectral_norm_proxy(&self) -> Result<f64> {
        spectral_norm(&self.matrix)
    }

    pub fn induced_trace_norm_lb(&self, sample_count: usize, seed: u64) -> Result<f64> {
        induced_trace_norm_lb(&self.matrix, self.dim, sample_count, seed)
    }

    pub fn induced_trace_norm_ub(&self) -> Result<f64> {
        induced_trace_norm_ub(&self.matrix, self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn amplitude_damping(g: f64) -> Superoperator {
        let k0 = CMat::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - g).sqrt()]]);
        let k1 = CMat::from_real_rows(&[&[0.0, g.sqrt()], &[0.0, 0.0]]);
        Superoperator::from_kraus(&[k0, k1]).unwrap()
    }

    #[test]
    fn kraus_channel_passes_all_checks() {
        let s = amplitude_damping(0.3).verified().unwrap();
        assert!(s.is_channel());
        assert_eq!(s.flags().hermiticity_preserving, Flag::Verified);
        let rho = CMat::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]);
        let out = s.apply(&rho);
        assert!((out[(0, 0)].re - 0.3).abs() < 1e-15);
    }

    #[test]
    fn transpose_is_positive_but_not_completely_positive() {
        let t = Superoperator::from_action(2, |x| x.transpose()).unwrap().verified().unwrap();
        assert_eq!(t.flags().completely_positive, Flag::Refuted);
        assert_eq!(t.flags().trace_preserving, Flag::Verified);
    }

    #[test]
    fn choi_of_identity_is_unnormalized_bell_projector() {
        let choi = Superoperator::identity(2).choi();
        assert_eq!(choi[(0, 0)], c(1.0, 0.0));
        assert_eq!(choi[(0, 3)], c(1.0, 0.0));
        assert_eq!(choi[(3, 0)], c(1.0, 0.0));
        assert_eq!(choi[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn from_action_matches_sandwich() {
        let a = CMat::from_fn(3, 3, |i, j| c(i as f64 - 0.5 * j as f64, 0.2 * (i * j) as f64));
        let b = CMat::from_fn(3, 3, |i, j| c(0.1 * j as f64, i as f64));
        let s1 = Superoperator::sandwich(&a, &b).unwrap();
        let s2 = Superoperator::from_action(3, |x| a.matmul(x).matmul(&b)).unwrap();
        assert!(s1.matrix().approx_eq(s2.matrix(), 1e-14));
    }

    #[test]
    fn scaled_channel_refutes_trace_preservation() {
        let s = amplitude_damping(0.2).scale_re(1.5).verified().unwrap();
        assert_eq!(s.flags().trace_preserving, Flag::Refuted);
        assert_eq!(s.flags().trace_nonincreasing, Flag::Refuted);
        assert_eq!(s.flags().completely_positive, Flag::Verified);
    }
}
