//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by the analysis routines.
///
/// Numerical failures are always surfaced; no routine silently degrades.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (got {got}, expected {expected})")]
    DimensionMismatch {
        context: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("operator is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("vectors are not orthonormal (deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("matrix is not antisymmetric (deviation {deviation:.3e} exceeds tolerance {tolerance:.3e})")]
    NotAntisymmetric { deviation: f64, tolerance: f64 },

    #[error("state has zero norm")]
    ZeroState,

    #[error("expected a two-particle state, got {got} particles")]
    NotAPairState { got: usize },

    #[error("projector pair is not orthogonal (|E1 E2| = {deviation:.3e})")]
    NotOrthogonalPair { deviation: f64 },

    #[error("operator fails the {property} predicate (deviation {deviation:.3e})")]
    PredicateFailed {
        property: &'static str,
        deviation: f64,
    },

    #[error("SVD failed to converge")]
    SvdFailed,

    #[error("canonical decomposition failed: {0}")]
    DecompositionFailed(String),

    #[error("state has Slater rank {rank}, but the operation requires rank >= {required}")]
    RankTooLow { rank: usize, required: usize },

    #[error("coefficient parameter xi = {xi} outside (0, 1]")]
    XiOutOfRange { xi: f64 },

    #[error("filter has zero probability on this state (norm {norm:.3e})")]
    ZeroProbabilityFilter { norm: f64 },

    #[error("state is not exhausted by the projector pair (residual {residual:.3e})")]
    NotExhausted { residual: f64 },

    #[error("triplet supports overlap (|E1 E2| = {deviation:.3e})")]
    SupportOverlap { deviation: f64 },

    #[error("state is not decomposable")]
    NotDecomposable,

    #[error("state lies outside the mapped subspace (residual {residual:.3e})")]
    OutsideSupport { residual: f64 },

    #[error("invalid permutation: {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("infeasible Slater rank {rank} for dimension {dim}")]
    InfeasibleRank { rank: usize, dim: usize },

    #[error("{0}")]
    Invalid(String),
}
