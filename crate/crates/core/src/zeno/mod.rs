//! Zeno products, their limits, error curves and the supporting inequalities.

pub mod chernoff;
pub mod curve;
pub mod dyadic;
pub mod fit;
pub mod limits;
pub mod perturbation;
pub mod product;
pub mod simplex;

pub use chernoff::{chernoff_check, ChernoffReport, ChernoffRow};
pub use curve::{
    delta_tilde, error_curve, fit_bound, theorem1_operator_errors, theorem1_rate, validate_grid, zeno_error_curve,
    zeno_theorem3_yosida, BoundCheck, CurveDiagnostics, LimitMode, ZenoErrorCurve, ZenoProblem, ZenoRunConfig,
};
pub use dyadic::{dyadic_amplitude, dyadic_counterexample, dyadic_step, DyadicReport};
pub use fit::{fit_loglog, DecayClass, FitOutcome, SlopeFit};
pub use limits::{zeno_limit_strong, zeno_limit_strong_estimated, zeno_limit_theorem1, Theorem1Limit};
pub use perturbation::{perturbation_partial_sums, survival_decomposition, PerturbationReport, SurvivalReport};
pub use product::{zeno_product_apply, zeno_product_superop, zeno_product_with_step, ZenoProduct};
pub use simplex::{simplex_count, simplex_count_brute, simplex_ratio};
