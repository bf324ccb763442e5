//! Dense complex linear algebra generic over the real scalar type.

pub mod blocks;
pub mod contour;
pub mod eig;
pub mod expm;
pub mod hermitian;
pub mod induced;
pub mod lu;
pub mod matrix;
pub mod norms;
pub mod resolvent;
pub mod svd;
pub mod vectorize;

pub use blocks::Blocks;
pub use contour::{contour_integral, contour_integral_report, ContourIntegral, ContourSpec};
pub use eig::{canonical_order, eig, eigvals, principal_arg, schur, Eigen, Schur};
pub use expm::{mat_exp, mat_exp_scaled};
pub use hermitian::{hermitian_eig, hermitian_eigvals, HermitianEigen};
pub use induced::{induced_trace_norm_estimate, induced_trace_norm_lb, induced_trace_norm_ub, random_pure_states, InducedEstimate};
pub use lu::{inverse, solve, Lu};
pub use matrix::{dot, vnorm, CMat};
pub use norms::{norms, spectral_norm, spectral_norm_power, trace_norm, Norms};
pub use resolvent::{resolvent, ResolventSolver};
pub use svd::{singular_values, svd, Svd};
pub use vectorize::{left_mul, right_mul, sandwich, unvec, vec, vec_index};
