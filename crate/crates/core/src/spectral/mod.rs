//! Peripheral spectrum, spectral projectors and power convergence.

pub mod flow;
pub mod peripheral;
pub mod power;

pub use flow::{projector_derivative, time_dependent_projector, ProjectorFlow};
pub use peripheral::{
    contour_projector, eigenvector_projector, peripheral_analysis, peripheral_analysis_with, peripheral_power,
    PeripheralEigenvalue, PeripheralOptions, PeripheralReport,
};
pub use power::{
    ergodic_average, estimate_limit_projector, power_convergence, ConvergenceMode, LimitEstimate,
    PowerConvergenceReport, ProjectorSource,
};
