use thiserror::Error;

use crate::mesh::MeshError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors from geometry, surgery and flow.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("{what} must be positive and finite, got {value}")]
    NonPositiveInput { what: &'static str, value: f64 },
    #[error("{what} = {value} lies outside the admissible domain")]
    Domain { what: &'static str, value: f64 },
    #[error("{what} has {got} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("triangle inequality violated{} with slack {slack:e}", face_label(*.face))]
    TriangleInequalityViolated { face: Option<usize>, slack: f64 },
    #[error("Delaunay wall unreachable: denominator {denominator:e} is not positive")]
    NonpositiveDenominator { denominator: f64 },
    #[error("flip budget of {budget} exhausted before the packing became Delaunay")]
    FlipBudgetExceeded { budget: usize },
    #[error("edge {edge} violates the weighted Delaunay condition (slack {slack:e})")]
    NotDelaunay { edge: usize, slack: f64 },
    #[error("invalid target curvature: {reason}")]
    TargetInvalid { reason: String },
    #[error("no convergence after {iterations} iterations (max error {max_err:e})")]
    MaxIterations { iterations: usize, max_err: f64 },
    #[error("line search stalled at iteration {iteration} (max error {max_err:e})")]
    LineSearchFailed { iteration: usize, max_err: f64 },
    #[error("curvature Jacobian has {dim} null directions beyond the constants")]
    SingularBeyondKernel { dim: usize },
}

fn face_label(face: Option<usize>) -> String {
    face.map(|f| format!(" in face {f}")).unwrap_or_default()
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Mesh(m) => m.kind(),
            Error::NonPositiveInput { .. } => "NonPositiveInput",
            Error::Domain { .. } => "DomainError",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::TriangleInequalityViolated { .. } => "TriangleInequalityViolated",
            Error::NonpositiveDenominator { .. } => "NonpositiveDenominator",
            Error::FlipBudgetExceeded { .. } => "FlipBudgetExceeded",
            Error::NotDelaunay { .. } => "NotDelaunay",
            Error::TargetInvalid { .. } => "TargetInvalid",
            Error::MaxIterations { .. } => "MaxIterations",
            Error::LineSearchFailed { .. } => "LineSearchFailed",
            Error::SingularBeyondKernel { .. } => "SingularBeyondKernel",
        }
    }

    /// True for failures of the iterative solvers, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::FlipBudgetExceeded { .. }
                | Error::MaxIterations { .. }
                | Error::LineSearchFailed { .. }
                | Error::SingularBeyondKernel { .. }
        )
    }
}

pub(crate) fn check_positive(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositiveInput { what, value })
    }
}

pub(crate) fn check_above_one(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 1.0 {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}
