use num_complex::Complex;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZenoError {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("{algorithm} failed to converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        algorithm: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("resolvent singular at z = {z}: min singular value {min_singular_value:.3e}")]
    ResolventSingular {
        z: Complex<f64>,
        min_singular_value: f64,
    },

    #[error("integrand failed at contour node {node}: {source}")]
    ContourNode {
        node: Complex<f64>,
        source: Box<ZenoError>,
    },

    #[error("contour crossed by eigenvalue {eigenvalue} (distance {distance:.3e} to the circle)")]
    ContourCrossed {
        eigenvalue: Complex<f64>,
        distance: f64,
    },

    #[error("GKLS constraint violated: residual {residual:.3e}")]
    Constraint { residual: f64 },

    #[error("not a projector: idempotency defect {defect:.3e}")]
    Projector { defect: f64 },

    #[error("invalid state: {0}")]
    State(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("density matrix is not faithful: min eigenvalue {min_eigenvalue:.3e}")]
    Faithfulness { min_eigenvalue: f64 },

    #[error("no spectral gap: {0}")]
    NoGap(String),

    #[error("peripheral report is not admissible: {0}")]
    NotAdmissible(String),

    #[error("limit projector estimate unstable: {0}")]
    Estimation(String),

    #[error("inequality violated: {0}")]
    InequalityViolation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl ZenoError {
    /// True for errors caused by bad input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            ZenoError::Dimension(_)
                | ZenoError::Constraint { .. }
                | ZenoError::Projector { .. }
                | ZenoError::State(_)
                | ZenoError::Parameter(_)
                | ZenoError::Faithfulness { .. }
                | ZenoError::Config(_)
        )
    }
}

impl From<std::io::Error> for ZenoError {
    fn from(e: std::io::Error) -> Self {
        ZenoError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, ZenoError>;
