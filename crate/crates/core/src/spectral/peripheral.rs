use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};
use crate::linalg::{
    contour_integral_report, eigvals, induced::DEFAULT_SAMPLES, induced_trace_norm_lb, inverse, spectral_norm,
    spectral_norm_power, svd, Blocks, CMat, ContourSpec, ResolventSolver,
};
use crate::semigroup::Superoperator;
use crate::{CMatrix, C64};

pub const PERIPHERAL_TOL: f64 = 1e-8;
pub const CLUSTER_TOL: f64 = 1e-7;
/// ‖N_j‖ below this counts as zero.
pub const NILPOTENT_ZERO: f64 = 1e-8;
pub const CROSS_CHECK_TOL: f64 = 1e-7;
pub const CONTRACTION_SLACK: f64 = 1e-6;
/// Radius used when a cluster holds the whole spectrum.
pub const LONE_CLUSTER_RADIUS: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeripheralOptions {
    pub peripheral_tol: f64,
    pub cluster_tol: f64,
    pub quadrature_points: usize,
    /// Estimate the induced norm and warn above 1 + 1e-6.
    pub check_contraction: bool,
    /// Compute the bulk projector Q and the resolution-of-identity defect.
    pub bulk_projector: bool,
    /// Recorded in the report when the operator comes from a Fock truncation.
    pub truncated: bool,
}

impl Default for PeripheralOptions {
    fn default() -> Self {
        Self {
            peripheral_tol: PERIPHERAL_TOL,
            cluster_tol: CLUSTER_TOL,
            quadrature_points: crate::linalg::contour::DEFAULT_POINTS,
            check_contraction: true,
            bulk_projector: true,
            truncated: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeripheralEigenvalue {
    pub value: C64,
    pub multiplicity: usize,
    pub contour: ContourSpec<f64>,
    pub contour_nodes: usize,
    /// tr P_j
    pub projector_rank: f64,
    pub nilpotent_norm: f64,
    /// ‖P_contour − P_eigenvector‖_HS, `None` when the eigenvector route is unavailable.
    pub cross_check: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeripheralReport {
    /// `Some(d)` when the operator acts on d×d matrices.
    pub dim: Option<usize>,
    pub size: usize,
    pub peripheral: Vec<PeripheralEigenvalue>,
    #[serde(skip)]
    pub projectors: Vec<CMatrix>,
    pub quasi_nilpotent_norms: Vec<f64>,
    /// Largest modulus of the non-peripheral spectrum.
    pub gap_delta: f64,
    pub admissible: bool,
    pub reasons: Vec<String>,
    pub cross_check_ok: bool,
    #[serde(skip)]
    pub bulk_projector: Option<CMatrix>,
    /// ‖Σ P_j + Q − I‖_HS
    pub resolution_defect: Option<f64>,
    pub contraction_estimate: Option<f64>,
    pub truncation_caveat: bool,
    pub warnings: Vec<String>,
    pub spectrum: Vec<C64>,
    pub peripheral_tol: f64,
    pub cluster_tol: f64,
}

impl PeripheralReport {
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.peripheral.iter().map(|p| p.value).collect()
    }

    pub fn projector(&self, j: usize) -> Result<Superoperator> {
        let d = self
            .dim
            .ok_or_else(|| ZenoError::Parameter("operator does not act on matrices".into()))?;
        Superoperator::new(d, self.projectors[j].clone())
    }

    pub fn projector_superops(&self) -> Result<Vec<Superoperator>> {
        (0..self.projectors.len()).map(|j| self.projector(j)).collect()
    }

    /// Σ_j P_j
    pub fn peripheral_projector(&self) -> CMatrix {
        let mut sum = CMat::zeros(self.size, self.size);
        for p in &self.projectors {
            sum += p;
        }
        sum
    }

    pub fn max_nilpotent_norm(&self) -> f64 {
        self.quasi_nilpotent_norms.iter().copied().fold(0.0, f64::max)
    }
}

struct Cluster {
    members: Vec<usize>,
    center: C64,
}

fn clusters(values: &[C64], candidates: &[usize], tol: f64) -> Vec<Cluster> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in candidates {
        let hits: Vec<usize> = groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.iter().any(|&k| (values[k] - values[i]).norm() <= tol))
            .map(|(gi, _)| gi)
            .collect();
        match hits.split_first() {
            None => groups.push(vec![i]),
            Some((&first, rest)) => {
                for &gi in rest.iter().rev() {
                    let moved = groups.remove(gi);
                    groups[first].extend(moved);
                }
                groups[first].push(i);
            }
        }
    }
    let mut out: Vec<Cluster> = groups
        .into_iter()
        .map(|members| {
            let center = members.iter().map(|&k| values[k]).sum::<C64>() / members.len() as f64;
            Cluster { members, center }
        })
        .collect();
    let centers: Vec<C64> = out.iter().map(|c| c.center).collect();
    let order = crate::linalg::canonical_order(&centers);
    let mut sorted = Vec::with_capacity(out.len());
    let mut slots: Vec<Option<Cluster>> = out.drain(..).map(Some).collect();
    for i in order {
        sorted.push(slots[i].take().expect("each index once"));
    }
    sorted
}

/// Spectral projector by the eigenvector route: R (L†R)⁻¹ L† from the `mult`
/// smallest singular triples of M − λ.
pub fn eigenvector_projector(m: &CMatrix, lambda: C64, mult: usize) -> Result<Option<CMatrix>> {
    let n = m.rows();
    let shifted = CMat::from_fn(n, n, |i, j| if i == j { m[(i, j)] - lambda } else { m[(i, j)] });
    let blocks = Blocks::of(&shifted);
    let mut triples: Vec<(f64, Vec<C64>, Vec<C64>)> = Vec::new();
    for (g, b) in blocks.groups().iter().zip(blocks.split(&shifted)) {
        let dec = svd(&b)?;
        let left = svd(&b.adjoint())?;
        for (c, &s) in dec.s.iter().enumerate() {
            let mut r = vec![C64::new(0.0, 0.0); n];
            let mut l = vec![C64::new(0.0, 0.0); n];
            for (k, &i) in g.iter().enumerate() {
                r[i] = dec.v[(k, c)];
                l[i] = left.v[(k, c)];
            }
            triples.push((s, r, l));
        }
    }
    triples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    if triples.len() < mult {
        return Ok(None);
    }
    let mut rm = CMat::zeros(n, mult);
    let mut lm = CMat::zeros(n, mult);
    for (c, (_, r, l)) in triples.iter().take(mult).enumerate() {
        rm.set_column(c, r);
        lm.set_column(c, l);
    }
    let gram = lm.adjoint().matmul(&rm);
    match inverse(&gram) {
        Ok(g) if g.is_finite() && g.max_abs() < 1e12 => Ok(Some(rm.matmul(&g).matmul(&lm.adjoint()))),
        _ => Ok(None),
    }
}

/// (1/2πi)∮ (z − M)⁻¹ dz on the given circle.
pub fn contour_projector(m: &CMatrix, contour: &ContourSpec<f64>) -> Result<(CMatrix, usize)> {
    let solver = ResolventSolver::new(m)?;
    let r = contour_integral_report(|z| solver.at(z), contour)?;
    Ok((r.value, r.nodes_used))
}

pub fn peripheral_analysis(m: &Superoperator) -> Result<PeripheralReport> {
    peripheral_analysis_with(m.matrix(), Some(m.dim()), &PeripheralOptions::default())
}

pub fn peripheral_analysis_with(m: &CMatrix, dim: Option<usize>, opts: &PeripheralOptions) -> Result<PeripheralReport> {
    let n = m.require_square("peripheral analysis")?;
    if !m.is_finite() {
        return Err(ZenoError::Dimension("operator has non-finite entries".into()));
    }
    let mut warnings = Vec::new();
    let contraction_estimate = if opts.check_contraction {
        let est = match dim {
            Some(d) => induced_trace_norm_lb(m, d, DEFAULT_SAMPLES, 0xc1a5)?,
            None => spectral_norm_power(m, 1e-12, 20_000),
        };
        if est > 1.0 + CONTRACTION_SLACK {
            warnings.push(format!("operator norm estimate {est:.6} exceeds 1; not a contraction"));
        }
        Some(est)
    } else {
        None
    };

    let spectrum = eigvals(m)?;
    let candidates: Vec<usize> = (0..n)
        .filter(|&i| spectrum[i].norm() >= 1.0 - opts.peripheral_tol)
        .collect();
    let groups = clusters(&spectrum, &candidates, opts.cluster_tol);
    let in_cluster: Vec<bool> = (0..n).map(|i| candidates.contains(&i)).collect();
    let gap_delta = (0..n)
        .filter(|&i| !in_cluster[i])
        .map(|i| spectrum[i].norm())
        .fold(0.0, f64::max);

    let mut peripheral = Vec::with_capacity(groups.len());
    let mut projectors = Vec::with_capacity(groups.len());
    let mut nilpotent = Vec::with_capacity(groups.len());
    let mut cross_check_ok = true;
    let floor = 10.0 * opts.cluster_tol;
    for g in &groups {
        let excluded = (0..n)
            .filter(|i| !g.members.contains(i))
            .map(|i| (spectrum[i] - g.center).norm())
            .fold(f64::INFINITY, f64::min);
        let spread = g
            .members
            .iter()
            .map(|&i| (spectrum[i] - g.center).norm())
            .fold(0.0, f64::max);
        let radius = if excluded.is_finite() { 0.5 * excluded } else { LONE_CLUSTER_RADIUS };
        if radius < floor || spread >= 0.5 * radius {
            return Err(ZenoError::NoGap(format!(
                "peripheral eigenvalue {:.6}{:+.6}i cannot be isolated: nearest excluded eigenvalue at distance {excluded:.3e}",
                g.center.re, g.center.im
            )));
        }
        let contour = ContourSpec::with_points(g.center, radius, opts.quadrature_points)?;
        let (p, nodes) = contour_projector(m, &contour)?;
        let cross_check = eigenvector_projector(m, g.center, g.members.len())?.map(|pe| (&p - &pe).hs_norm());
        if cross_check.is_none_or(|c| c > CROSS_CHECK_TOL) {
            cross_check_ok = false;
        }
        let shifted = CMat::from_fn(n, n, |i, j| if i == j { g.center - m[(i, j)] } else { -m[(i, j)] });
        let nil = spectral_norm(&shifted.matmul(&p))?;
        nilpotent.push(nil);
        peripheral.push(PeripheralEigenvalue {
            value: g.center,
            multiplicity: g.members.len(),
            contour,
            contour_nodes: nodes,
            projector_rank: p.trace().re,
            nilpotent_norm: nil,
            cross_check,
        });
        projectors.push(p);
    }
    if !cross_check_ok {
        warnings.push("contour and eigenvector projectors disagree; Jordan structure or clustering suspected".into());
    }

    let mut reasons = Vec::new();
    let gap_exists = gap_delta < 1.0 - opts.peripheral_tol;
    if !gap_exists {
        reasons.push(format!("no spectral gap: bulk reaches modulus {gap_delta:.6}"));
    }
    let max_nil = nilpotent.iter().copied().fold(0.0, f64::max);
    if max_nil > NILPOTENT_ZERO {
        reasons.push(format!("nonzero quasi-nilpotent part: max ‖N_j‖ = {max_nil:.3e}"));
    }
    let admissible = reasons.is_empty();

    let bulk_projector = if opts.bulk_projector && !groups.is_empty() && gap_exists {
        bulk_projector(m, &peripheral, &in_cluster, gap_delta, floor, opts.quadrature_points, &mut warnings)?
    } else {
        None
    };
    let resolution_defect = bulk_projector.as_ref().map(|q| {
        let mut sum = q.clone();
        for p in &projectors {
            sum += p;
        }
        (&sum - &CMat::identity(n)).hs_norm()
    });
    if opts.truncated {
        warnings.push("classification holds for the truncated operator only".into());
    }

    Ok(PeripheralReport {
        dim,
        size: n,
        peripheral,
        projectors,
        quasi_nilpotent_norms: nilpotent,
        gap_delta,
        admissible,
        reasons,
        cross_check_ok,
        bulk_projector,
        resolution_defect,
        contraction_estimate,
        truncation_caveat: opts.truncated,
        warnings,
        spectrum,
        peripheral_tol: opts.peripheral_tol,
        cluster_tol: opts.cluster_tol,
    })
}

/// Contour projector Q onto the bulk, on a circle between δ and the peripheral contours.
fn bulk_projector(
    m: &CMatrix,
    peripheral: &[PeripheralEigenvalue],
    in_cluster: &[bool],
    gap_delta: f64,
    floor: f64,
    points: usize,
    warnings: &mut Vec<String>,
) -> Result<Option<CMatrix>> {
    let n = m.rows();
    if in_cluster.iter().all(|&c| c) {
        return Ok(Some(CMat::zeros(n, n)));
    }
    let inner = peripheral
        .iter()
        .map(|p| p.value.norm() - p.contour.radius)
        .fold(f64::INFINITY, f64::min);
    let rb = 0.5 * (gap_delta + inner.max(gap_delta));
    if rb - gap_delta < floor {
        warnings.push("bulk contour too close to the spectrum; Q not computed".into());
        return Ok(None);
    }
    let spec = ContourSpec::with_points(C64::new(0.0, 0.0), rb, points)?;
    Ok(Some(contour_projector(m, &spec)?.0))
}

/// Σ_j λ_jⁿ P_j
pub fn peripheral_power(report: &PeripheralReport, n: u64) -> CMatrix {
    let mut sum = CMat::zeros(report.size, report.size);
    for (p, proj) in report.peripheral.iter().zip(&report.projectors) {
        sum += &proj.scale(p.value.powu(n as u32));
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing, maximally_mixed, oscillator_conjugation, TruncationSpec};

    #[test]
    fn depolarizing_has_one_peripheral_eigenvalue() {
        let sigma = maximally_mixed(2);
        let m = depolarizing(0.5, &sigma).unwrap();
        let r = peripheral_analysis(&m).unwrap();
        assert_eq!(r.peripheral.len(), 1);
        assert!((r.peripheral[0].value - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((r.gap_delta - 0.5).abs() < 1e-12);
        assert!(r.admissible && r.cross_check_ok);
        assert!(r.resolution_defect.unwrap() < 1e-8);
    }

    #[test]
    fn oscillator_has_three_roots() {
        let m = oscillator_conjugation(3, 1.0, &TruncationSpec::new(5).unwrap()).unwrap();
        let r = peripheral_analysis(&m).unwrap();
        assert_eq!(r.peripheral.len(), 3);
        assert!(r.admissible);
        assert!(r.max_nilpotent_norm() < 1e-10);
        assert_eq!(r.gap_delta, 0.0);
    }

    #[test]
    fn jordan_block_is_not_admissible() {
        let m = CMat::from_real_rows(&[&[1.0, 0.5], &[0.0, 1.0]]);
        let r = peripheral_analysis_with(&m, None, &PeripheralOptions { check_contraction: false, ..Default::default() })
            .unwrap();
        assert!(!r.admissible);
        assert!((r.quasi_nilpotent_norms[0] - 0.5).abs() < 1e-10);
    }

    #[test]
    fn nearly_peripheral_bulk_is_a_gap_error() {
        let m = CMat::from_real_diag(&[1.0, 1.0 - 5e-7]);
        let err = peripheral_analysis_with(&m, None, &PeripheralOptions { check_contraction: false, ..Default::default() })
            .unwrap_err();
        assert!(matches!(err, ZenoError::NoGap(_)));
    }

    #[test]
    fn strict_contraction_has_empty_periphery() {
        let m = CMat::from_real_diag(&[0.5, 0.2]);
        let r = peripheral_analysis_with(&m, None, &PeripheralOptions { check_contraction: false, ..Default::default() })
            .unwrap();
        assert!(r.peripheral.is_empty() && r.admissible);
        assert!((r.gap_delta - 0.5).abs() < 1e-15);
    }
}
