//! Discretized Volterra operator and the contraction M = (I + V)⁻¹.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};
use crate::linalg::{spectral_norm_power, CMat};
use crate::CMatrix;

pub const MIN_GRID: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolterraRule {
    /// Strictly lower triangular, hence nilpotent.
    #[default]
    LeftEndpoint,
    Trapezoid,
}

#[derive(Clone, Debug)]
pub struct VolterraDemo {
    pub grid_points: usize,
    pub rule: VolterraRule,
    pub h: f64,
    /// M = (I + V_h)⁻¹
    pub matrix: CMatrix,
    /// ‖M‖ in the discrete L² norm.
    pub norm: f64,
    /// ‖I − M‖
    pub nilpotent_norm: f64,
}

/// (V f)(x_i) ≈ ∫_0^{x_i} f, on the grid x_i = i·h.
pub fn volterra_matrix(grid_points: usize, rule: VolterraRule) -> Vec<Vec<f64>> {
    let g = grid_points;
    let h = 1.0 / g as f64;
    let mut v = vec![vec![0.0; g]; g];
    for (i, row) in v.iter_mut().enumerate() {
        match rule {
            VolterraRule::LeftEndpoint => row[..i].iter_mut().for_each(|x| *x = h),
            VolterraRule::Trapezoid if i > 0 => {
                row[..=i].iter_mut().for_each(|x| *x = h);
                row[0] = h / 2.0;
                row[i] = h / 2.0;
            }
            VolterraRule::Trapezoid => {}
        }
    }
    v
}

/// Inverse of a lower triangular real matrix with nonzero diagonal.
fn lower_inverse(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut x = vec![vec![0.0; n]; n];
    for j in 0..n {
        x[j][j] = 1.0 / a[j][j];
        for i in j + 1..n {
            let s: f64 = (j..i).map(|k| a[i][k] * x[k][j]).sum();
            x[i][j] = -s / a[i][i];
        }
    }
    x
}

pub fn volterra_contraction(grid_points: usize) -> Result<VolterraDemo> {
    volterra_contraction_with(grid_points, VolterraRule::LeftEndpoint)
}

pub fn volterra_contraction_with(grid_points: usize, rule: VolterraRule) -> Result<VolterraDemo> {
    if grid_points < MIN_GRID {
        return Err(ZenoError::Parameter(format!("grid needs at least {MIN_GRID} points, got {grid_points}")));
    }
    let mut a = volterra_matrix(grid_points, rule);
    for (i, row) in a.iter_mut().enumerate() {
        row[i] += 1.0;
    }
    let m = lower_inverse(&a);
    let matrix = CMat::from_fn(grid_points, grid_points, |i, j| crate::C64::new(m[i][j], 0.0));
    let nil = &CMat::identity(grid_points) - &matrix;
    Ok(VolterraDemo {
        grid_points,
        rule,
        h: 1.0 / grid_points as f64,
        norm: spectral_norm_power(&matrix, 1e-12, 20_000),
        nilpotent_norm: spectral_norm_power(&nil, 1e-12, 20_000),
        matrix,
    })
}
