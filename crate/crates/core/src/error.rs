use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} must be nonnegative, got {value}")]
    Negative { name: &'static str, value: f64 },

    #[error("beta must be a finite value in [0, 2], got {0}")]
    BetaOutOfRange(f64),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("operand defined on a different grid")]
    GridMismatch,

    #[error("divergence is not (sub)differentiable at v = 0 for beta = {beta}")]
    NotDifferentiable { beta: f64 },

    #[error("dual objective unbounded below at (y = {y}, lambda = {lambda}): no minimizer")]
    DualUnbounded { y: f64, lambda: f64 },

    #[error("cannot shift into the dual cone: node {node} has negative potential but zero row sum")]
    InfeasibleShift { node: usize },

    #[error("degenerate data: component {index} has (A mu)_i = 0 but y_i = {y} > 0")]
    DegenerateData { index: usize, y: f64 },

    #[error("degenerate update: node {node} carries positive mass but zero denominator")]
    DegenerateDenominator { node: usize },

    #[error("loss increased at iteration {iteration}: {previous} -> {current}")]
    MonotonicityViolated {
        iteration: usize,
        previous: f64,
        current: f64,
    },

    #[error("all rows vanish at node {node}")]
    ZeroColumn { node: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid observation: {0}")]
    InvalidObservation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
