//! Named tolerances.
//!
//! All matrices handled here are tiny (dimension at most a few hundred), so
//! double precision leaves several digits of headroom over the default
//! tolerance. Comparisons are relative to the largest magnitude involved;
//! operations that accept a tolerance parameter treat it that way.

/// Global default tolerance, relative to the largest magnitude involved.
pub const DEFAULT: f64 = 1e-9;

/// Singular values below `RANK * s_max` count as zero when ranking.
pub const RANK: f64 = 1e-9;

/// Unitarity / orthogonality / projector predicates.
pub const UNITARY: f64 = 1e-10;

/// Exhaustion residual threshold for individuating projector pairs.
pub const EXHAUSTION: f64 = 1e-9;

/// A CHSH value must exceed `2 + CERT_MARGIN` to certify violation.
pub const CERT_MARGIN: f64 = 1e-9;

/// Two singular values closer than `DEGENERACY * s_max` are treated as one
/// degenerate group during canonical pair extraction.
pub const DEGENERACY: f64 = 1e-10;

/// Scale a relative tolerance by the magnitude of the data involved.
///
/// Uses `max(1, scale)` so that tolerances never collapse to zero for
/// near-zero data.
#[inline]
pub fn scaled(tol: f64, scale: f64) -> f64 {
    tol * scale.max(1.0)
}
