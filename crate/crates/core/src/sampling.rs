//! Seeded random states, unitaries and projector families.
//!
//! Everything here is deterministic for a fixed seed (ChaCha stream plus
//! Box–Muller normals), so corpora regenerate bit-identically.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::individuation::ProjectorPair;
use crate::linalg::{c64, ginibre_matrix, haar_unitary_from_rng, C64, Ket, Operator};
use crate::slater::FermionPairState;
use crate::tol;
use crate::Result;

/// Random normalized ket with complex Gaussian amplitudes.
pub fn random_ket(dim: usize, rng: &mut ChaCha8Rng) -> Ket {
    let v = ginibre_matrix(dim, 1, rng).column(0).into_owned();
    Ket::from_vector(v)
        .expect("dim >= 1")
        .normalized()
        .expect("Gaussian vector is nonzero almost surely")
}

/// Random two-fermion state of exactly the requested Slater rank.
///
/// Coefficients are sampled with magnitudes bounded away from zero (so the
/// requested rank is numerically unambiguous), normalized, placed into the
/// canonical block matrix and rotated by a Haar unitary from the same stream.
pub fn random_fermion_pair(dim: usize, rank: usize, seed: u64) -> Result<FermionPairState> {
    if rank == 0 || 2 * rank > dim {
        return Err(Error::InfeasibleRank { rank, dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = random_coefficients(rank, &mut rng);
    let mut z = nalgebra::DMatrix::<C64>::zeros(dim, dim);
    for (i, &ci) in coeffs.iter().enumerate() {
        let entry = ci / c64(std::f64::consts::SQRT_2, 0.0);
        z[(2 * i, 2 * i + 1)] = entry;
        z[(2 * i + 1, 2 * i)] = -entry;
    }
    let u = haar_unitary_from_rng(dim, &mut rng);
    let a = u.mat() * z * u.mat().transpose();
    FermionPairState::from_matrix(a, tol::DEFAULT)
}

/// Normalized coefficients with magnitudes in [0.2, 1.0] and uniform phases.
pub fn random_coefficients(count: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let raw: Vec<C64> = (0..count)
        .map(|_| {
            let magnitude: f64 = rng.gen_range(0.2..1.0);
            let phase: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            c64(magnitude * phase.cos(), magnitude * phase.sin())
        })
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    raw.into_iter().map(|z| z / c64(norm, 0.0)).collect()
}

/// Generic random antisymmetric normalized state (no rank control).
pub fn random_antisymmetric_state(dim: usize, seed: u64) -> Result<FermionPairState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre_matrix(dim, dim, &mut rng);
    let a = (&g - g.transpose()) / c64(2.0, 0.0);
    FermionPairState::from_matrix(a, tol::DEFAULT)
}

/// Random orthogonal projector pair with the requested ranks, built from
/// disjoint column blocks of one Haar unitary.
pub fn random_projector_pair(
    dim: usize,
    rank1: usize,
    rank2: usize,
    rng: &mut ChaCha8Rng,
) -> Result<ProjectorPair> {
    if rank1 == 0 || rank2 == 0 || rank1 + rank2 > dim {
        return Err(Error::Invalid(format!(
            "cannot fit orthogonal projectors of ranks {rank1}, {rank2} in dimension {dim}"
        )));
    }
    let u = haar_unitary_from_rng(dim, rng);
    let block = |from: usize, count: usize| {
        let mut m = nalgebra::DMatrix::<C64>::zeros(dim, dim);
        for k in from..from + count {
            let col: DVector<C64> = u.mat().column(k).into_owned();
            m += &col * col.adjoint();
        }
        Operator::new(m)
    };
    ProjectorPair::new(block(0, rank1), block(rank1, rank2), tol::DEFAULT)
}
