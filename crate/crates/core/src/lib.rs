//! Entanglement analysis for two-fermion pure states under permutation
//! invariance.
//!
//! The library decides whether a two-fermion state is entangled in the
//! Ghirardi–Marinatto–Weber (GMW) sense, i.e. whether it fails to be the
//! antisymmetrization of a product state, and certifies the answer
//! operationally through Bell/CHSH observables built from permutation-invariant
//! quantities only.
//!
//! Layout mirrors the analysis pipeline:
//!
//! * [`linalg`]: small dense complex linear algebra: kets, operators, tensor
//!   products, SVD/Hermitian-eigen contracts, Haar-random unitaries.
//! * [`exterior`]: wedge products, antisymmetrization, the correspondence
//!   between wedge expressions and antisymmetric tensors, decomposability.
//! * [`slater`]: the canonical (Slater) decomposition of an antisymmetric
//!   coefficient matrix by unitary congruence, Slater rank, GMW verdict.
//! * [`individuation`]: individuating projector pairs (orthogonality and
//!   exhaustion), permutation-invariant local operators and filters.
//! * [`bell`]: CHSH machinery for both the distinguishable regime (Gisin
//!   construction) and the permutation-invariant regime, with closed-form
//!   angle choices and a numeric optimizer, producing violation certificates.
//! * [`sampling`]: seeded random states and projector families used by the
//!   CLI corpus generator and the test suites.
//!
//! # Example
//!
//! The two-electron EPRB state `(|1,2⟩ − |3,4⟩)/√2` is GMW-entangled and
//! violates a permutation-invariant CHSH inequality at the Tsirelson value:
//!
//! ```
//! use fermibell::bell::{pipeline_certify, Verdict};
//! use fermibell::exterior::{FermionState, WedgeTerm};
//! use fermibell::linalg::c64;
//! use fermibell::slater::{is_gmw_entangled, slater_decompose, FermionPairState};
//!
//! let sqrt_half = std::f64::consts::FRAC_1_SQRT_2;
//! let state = FermionPairState::from_wedge_terms(&FermionState::new(4, 2, vec![
//!     WedgeTerm { coefficient: c64(sqrt_half, 0.0), indices: vec![0, 1] },
//!     WedgeTerm { coefficient: c64(-sqrt_half, 0.0), indices: vec![2, 3] },
//! ])?)?;
//!
//! assert!(is_gmw_entangled(&state)?);
//! assert_eq!(slater_decompose(&state)?.rank(), 2);
//!
//! let cert = pipeline_certify(&state)?;
//! assert_eq!(cert.verdict, Verdict::Violates);
//! assert!((cert.value - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-4);
//! # Ok::<(), fermibell::Error>(())
//! ```

pub mod bell;
pub mod error;
pub mod exterior;
pub mod individuation;
pub mod linalg;
pub mod sampling;
pub mod slater;
pub mod tol;

pub use error::Error;

/// Convenient result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
