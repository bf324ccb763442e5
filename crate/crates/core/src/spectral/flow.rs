use serde::{Deserialize, Serialize};

use super::peripheral::contour_projector;
use crate::error::{Result, ZenoError};
use crate::linalg::{contour_integral_report, eigvals, mat_exp_scaled, ContourSpec, ResolventSolver};
use crate::semigroup::Superoperator;
use crate::CMatrix;

/// Eigenvalues closer than this to the circle count as crossing it.
pub const CROSSING_MARGIN: f64 = 1e-6;

/// P(t) for M e^{tL} against its first-order expansion around t = 0.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectorFlow {
    pub t: f64,
    #[serde(skip)]
    pub p_t: CMatrix,
    #[serde(skip)]
    pub p_0: CMatrix,
    #[serde(skip)]
    pub derivative: CMatrix,
    /// ‖(P(t) − P(0))/t − P′‖_HS
    pub finite_difference_defect: f64,
    /// ‖P(t) − P(0) − tP′‖_HS
    pub second_order_defect: f64,
    /// second_order_defect / t²
    pub fitted_constant: f64,
    /// ‖P(t)² − P(t)‖_HS
    pub idempotency_defect: f64,
    pub enclosed: usize,
    pub contour_nodes: usize,
}

fn enclosed_count(spectrum: &[crate::C64], contour: &ContourSpec<f64>) -> Result<usize> {
    let mut count = 0;
    for &z in spectrum {
        let dist = contour.distance(z);
        if dist.abs() < CROSSING_MARGIN * contour.radius.max(1.0) {
            return Err(ZenoError::ContourCrossed { eigenvalue: z, distance: dist.abs() });
        }
        if dist < 0.0 {
            count += 1;
        }
    }
    Ok(count)
}

/// P′ = (1/2πi)∮ (z − M)⁻¹ M L (z − M)⁻¹ dz
pub fn projector_derivative(m: &CMatrix, l: &CMatrix, contour: &ContourSpec<f64>) -> Result<(CMatrix, usize)> {
    let solver = ResolventSolver::new(m)?;
    let ml = m.matmul(l);
    let r = contour_integral_report(
        |z| {
            let rz = solver.at(z)?;
            Ok(rz.matmul(&ml).matmul(&rz))
        },
        contour,
    )?;
    Ok((r.value, r.nodes_used))
}

pub fn time_dependent_projector(
    m: &Superoperator,
    l: &Superoperator,
    t: f64,
    contour: &ContourSpec<f64>,
) -> Result<ProjectorFlow> {
    if m.dim() != l.dim() {
        return Err(ZenoError::Dimension("M and L act on different spaces".into()));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(ZenoError::Parameter(format!("t must be positive, got {t}")));
    }
    contour.validate()?;
    let mt = m.matrix().matmul(&mat_exp_scaled(l.matrix(), t)?);
    let k0 = enclosed_count(&eigvals(m.matrix())?, contour)?;
    let kt = enclosed_count(&eigvals(&mt)?, contour)?;
    if k0 != kt {
        return Err(ZenoError::ContourCrossed {
            eigenvalue: contour.center,
            distance: 0.0,
        });
    }
    let (p_0, n0) = contour_projector(m.matrix(), contour)?;
    let (p_t, nt) = contour_projector(&mt, contour)?;
    let (derivative, nd) = projector_derivative(m.matrix(), l.matrix(), contour)?;
    let delta = &p_t - &p_0;
    let finite_difference_defect = (&delta.scale_re(1.0 / t) - &derivative).hs_norm();
    let second_order_defect = (&delta - &derivative.scale_re(t)).hs_norm();
    let idempotency_defect = (&p_t.matmul(&p_t) - &p_t).hs_norm();
    Ok(ProjectorFlow {
        t,
        finite_difference_defect,
        second_order_defect,
        fitted_constant: second_order_defect / (t * t),
        idempotency_defect,
        enclosed: k0,
        contour_nodes: n0.max(nt).max(nd),
        p_t,
        p_0,
        derivative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing, depolarizing_limit_projector, hamiltonian_generator};
    use crate::linalg::CMat;
    use crate::C64;

    fn sigma() -> CMatrix {
        CMat::from_real_diag(&[0.8, 0.2])
    }

    fn setup() -> (Superoperator, Superoperator, ContourSpec<f64>) {
        let m = depolarizing(0.3, &sigma()).unwrap();
        let h = CMat::from_real_rows(&[&[1.0, 0.4], &[0.4, -1.0]]);
        let l = hamiltonian_generator(&h).unwrap();
        (m, l, ContourSpec::new(C64::new(1.0, 0.0), 0.15).unwrap())
    }

    #[test]
    fn base_projector_matches_closed_form() {
        let (m, l, c) = setup();
        let f = time_dependent_projector(&m, &l, 1e-3, &c).unwrap();
        let p = depolarizing_limit_projector(&sigma()).unwrap();
        assert!(f.p_0.approx_eq(p.matrix(), 1e-10));
        assert_eq!(f.enclosed, 1);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let (m, l, c) = setup();
        let h = 1e-5;
        let plus = time_dependent_projector(&m, &l, h, &c).unwrap();
        let minus = time_dependent_projector(&m, &l.scale_re(-1.0), h, &c).unwrap();
        let central = (&plus.p_t - &minus.p_t).scale_re(0.5 / h);
        assert!((&central - &plus.derivative).hs_norm() < 1e-6);
    }

    #[test]
    fn second_order_defect_scales_quadratically() {
        let (m, l, c) = setup();
        let a = time_dependent_projector(&m, &l, 1e-2, &c).unwrap();
        let b = time_dependent_projector(&m, &l, 5e-3, &c).unwrap();
        let ratio = a.second_order_defect / b.second_order_defect;
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn crossing_is_detected() {
        let (m, l, _) = setup();
        let c = ContourSpec::new(C64::new(0.0, 0.0), 0.7).unwrap();
        assert!(matches!(
            time_dependent_projector(&m, &l, 1e-3, &c),
            Err(ZenoError::ContourCrossed { .. })
        ));
    }
}
