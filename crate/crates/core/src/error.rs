use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid potential: {field}: {reason}")]
    InvalidSpec { field: &'static str, reason: String },

    #[error("evaluation failed at x = {x}")]
    Evaluation { x: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not regularly varying: max log-ratio residual {residual:.3e}")]
    NotRegularlyVarying { residual: f64 },

    #[error("energy below single-well range: lambda = {lambda}")]
    EnergyBelowWell { lambda: f64 },

    #[error("turning-point geometry: {0}")]
    Geometry(String),

    #[error("quadrature did not converge (partial value {partial:.6e})")]
    Quadrature { partial: f64 },

    #[error("asymptotic regime not reached: J_K + J_W = {sum:.4}")]
    AsymptoticRegime { sum: f64 },

    #[error("grid resolution: {0}")]
    Resolution(String),

    #[error("eigensolver: {0}")]
    Solver(String),

    #[error("loss of orthogonality at degree {n}: drift {drift:.3e}")]
    Precision { n: usize, drift: f64 },

    #[error("mass deficit: measured mass {mass:.8}")]
    MassDeficit { mass: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
