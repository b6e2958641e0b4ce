//! Schur multiplier norms on `B(ℓp^n, ℓq^m)` for `1 ≤ q ≤ p ≤ ∞`.
//!
//! Three independent estimation routes are provided and cross-checked:
//!
//! - [`schur::multiplier_norm_lower`]: certified lower bounds from witness
//!   matrices (the defining ratio `‖m∘A‖/‖A‖`),
//! - [`schur::factorization_solve`]: upper bounds from discrete factorization
//!   certificates `m_ij = ⟨x_j, y_i⟩` over a weighted atom space,
//! - [`schur::lpq_lower`]: lower bounds from the dual trace-pairing formula
//!   over dominated operators.
//!
//! [`opnorm`] estimates the underlying mixed operator norms `‖A‖_{p→q}` and
//! [`discretize`] turns bounded kernels on rectangles into cell-averaged
//! multiplier matrices via interval partitions.

pub mod discretize;
pub mod exponent;
mod linalg;
pub mod matrix;
pub mod norms;
pub mod opnorm;
pub mod rng;
pub mod schur;

pub use exponent::{Exponent, ExponentPair};
pub use matrix::Matrix;
pub use opnorm::{Method, NormEstimate, SearchConfig};

/// Errors shared by all estimator modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("exponent must satisfy e >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("matrix entries must be finite and dimensions positive: {0}")]
    InvalidMatrix(String),
    #[error("shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("multiplier norms require q <= p in this artifact (got p={p}, q={q})")]
    RegimeViolation { p: String, q: String },
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partitions are not nested: {0}")]
    NonNestedPartitions(String),
    #[error("partition lies outside the kernel domain: {0}")]
    OutOfDomain(String),
    #[error("invalid grouping: {0}")]
    InvalidGrouping(String),
}

pub type Result<T> = std::result::Result<T, Error>;
