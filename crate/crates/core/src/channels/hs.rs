use crate::error::{Result, ZenoError};
use crate::linalg::{hermitian_eig, hermitian_eigvals, sandwich, spectral_norm, vec_index, CMat};
use crate::semigroup::Superoperator;
use crate::CMatrix;

/// Smallest eigenvalue accepted as strictly positive.
pub const FAITHFUL_TOL: f64 = f64::MIN_POSITIVE;

/// T^HS with T^HS ∘ i_ρ = i_ρ ∘ T, where i_ρ(x) = ρ^{1/4} x ρ^{1/4}.
#[derive(Clone, Debug)]
pub struct HsEmbedding {
    pub superop: Superoperator,
    /// Spectral norm of the embedded matrix.
    pub hs_norm: f64,
    /// Largest eigenvalue of the Hermitian part; ≤ 0 means dissipative.
    pub dissipativity: f64,
    /// ‖T^HS − (T^HS)†‖ in max entry.
    pub self_adjoint_defect: f64,
}

fn fourth_roots(rho: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    rho.require_square("reference state")?;
    if rho.hermitian_defect() > 1e-10 {
        return Err(ZenoError::State("reference state is not Hermitian".into()));
    }
    let eig = hermitian_eig(&rho.hermitian_part())?;
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min <= FAITHFUL_TOL {
        return Err(ZenoError::Faithfulness { min_eigenvalue: min });
    }
    Ok((eig.apply_fn(|x| x.powf(0.25)), eig.apply_fn(|x| x.powf(-0.25))))
}

/// i_ρ as a superoperator.
pub fn hs_inclusion(rho: &CMatrix) -> Result<Superoperator> {
    let (r, _) = fourth_roots(rho)?;
    Superoperator::sandwich(&r, &r)
}

fn is_diagonal(m: &CMatrix) -> bool {
    let n = m.rows();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)].norm() == 0.0))
}

pub fn hs_embed(t: &Superoperator, rho: &CMatrix) -> Result<HsEmbedding> {
    let d = t.dim();
    if rho.shape() != (d, d) {
        return Err(ZenoError::Dimension(format!("reference state must be {d}x{d}")));
    }
    let (r, rinv) = fourth_roots(rho)?;
    let m = if is_diagonal(rho) {
        let w: Vec<f64> = (0..d * d)
            .map(|k| {
                let (i, j) = (k % d, k / d);
                debug_assert_eq!(vec_index(d, i, j), k);
                r[(i, i)].re * r[(j, j)].re
            })
            .collect();
        CMat::from_fn(d * d, d * d, |a, b| t.matrix()[(a, b)] * (w[a] / w[b]))
    } else {
        sandwich(&r, &r).matmul(t.matrix()).matmul(&sandwich(&rinv, &rinv))
    };
    let herm = m.hermitian_part();
    let dissipativity = hermitian_eigvals(&herm)?.last().copied().unwrap_or(0.0);
    let self_adjoint_defect = m.max_diff(&m.adjoint());
    let hs_norm = spectral_norm(&m)?;
    Ok(HsEmbedding {
        superop: Superoperator::new(d, m)?,
        hs_norm,
        dissipativity,
        self_adjoint_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_cptp, random_density_matrix, rng};

    #[test]
    fn identity_embeds_to_identity() {
        let rho = random_density_matrix(3, &mut rng(1));
        let e = hs_embed(&Superoperator::identity(3), &rho).unwrap();
        assert!(e.superop.matrix().approx_eq(&CMat::identity(9), 1e-12));
    }

    #[test]
    fn intertwines_the_inclusion() {
        let mut g = rng(2);
        let rho = random_density_matrix(3, &mut g);
        let t = random_cptp(3, 2, &mut g).unwrap();
        let e = hs_embed(&t, &rho).unwrap();
        let i = hs_inclusion(&rho).unwrap();
        let lhs = e.superop.compose(&i);
        let rhs = i.compose(&t);
        assert!(lhs.matrix().approx_eq(rhs.matrix(), 1e-10));
    }

    #[test]
    fn singular_state_is_not_faithful() {
        let rho = CMat::from_real_diag(&[1.0, 0.0]);
        let err = hs_embed(&Superoperator::identity(2), &rho).unwrap_err();
        assert!(matches!(err, ZenoError::Faithfulness { .. }));
    }
}
