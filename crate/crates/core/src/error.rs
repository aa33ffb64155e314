use thiserror::Error;

use crate::metrics::MetricKind;

/// Library-wide error type. Variants that guard a numerical invariant carry
/// the measured residual so callers can report how badly it was violated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("matrix is not Hermitian: max |H - H^dag| = {residual:e}")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },
    #[error("trace is not one: Tr = {trace}")]
    TraceNotOne { trace: f64 },
    #[error("matrix is not unitary: max |U U^dag - I| = {residual:e}")]
    NotUnitary { residual: f64 },
    #[error("invalid spectrum: {reason}")]
    InvalidSpectrum { reason: String },
    #[error("invalid state: {reason}")]
    InvalidState { reason: String },
    #[error("invalid permutation mapping")]
    InvalidPermutation,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("iterative solver failed to converge")]
    NoConvergence,
    #[error("exponent must be positive, got {value}")]
    InvalidExponent { value: f64 },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("states are not deterministically discriminable")]
    NotDiscriminable,
    #[error("invalid POVM: {reason}")]
    InvalidPovm { reason: String },
    #[error("empty state set")]
    EmptySet,
    #[error("set of {size} states exceeds exact-search cap {cap}")]
    SetTooLarge { size: usize, cap: usize },
    #[error("metric {metric} is not supported here")]
    UnsupportedMetric { metric: MetricKind },
    #[error("invalid dimension {dim}")]
    InvalidDimension { dim: usize },
    #[error("orbit report invariant violated: {detail}")]
    ReportInvariantViolated { detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
