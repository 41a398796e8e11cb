//! Canonical (Slater) decomposition of two-fermion states by unitary
//! congruence, Slater rank, and the GMW-entanglement decision.
//!
//! Every two-fermion pure state is a normalized antisymmetric coefficient
//! matrix `A`. There is always a unitary `U` with `A = U Z Uᵀ`, where `Z` is
//! block-diagonal with 2×2 antisymmetric blocks and a zero pad. In the basis
//! formed by the columns of `U` the state reads `Σ_i c_i φ_{2i-1} ∧ φ_{2i}`
//! with `Σ|c_i|² = 1`; the reported coefficients use this wedge normalization,
//! so the matrix blocks of `Z` carry `c_i/√2`. The number of nonzero blocks is
//! the Slater rank; rank 1 means the state is the antisymmetrization of a
//! product state, i.e. not GMW-entangled.
//!
//! Extraction is SVD-based. Singular values of an antisymmetric matrix come
//! in coincident pairs; for each pair the conjugation map `v ↦ (Av)∗/s` is an
//! antilinear square root of −1 on the singular subspace, which yields the
//! 2×2 block directly. Degenerate groups are handled by re-projecting onto
//! the singular subspace and seeding with canonical basis vectors, which
//! keeps the output deterministic and basis-friendly.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::exterior::{FermionState, WedgeTerm};
use crate::linalg::{c64, C64, JointKet, Ket, Operator};
use crate::tol;
use crate::Result;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// A normalized two-fermion pure state: a `d × d` complex coefficient matrix
/// that is exactly antisymmetric and has unit Frobenius norm (within
/// tolerance at construction; antisymmetry is made exact).
#[derive(Debug, Clone, PartialEq)]
pub struct FermionPairState {
    matrix: DMatrix<C64>,
}

impl FermionPairState {
    /// Build from a coefficient matrix over the product basis.
    ///
    /// The input is antisymmetrized exactly via `(M − Mᵀ)/2`; inputs farther
    /// than `tolerance` (relative) from antisymmetric are rejected, as are
    /// matrices of (numerically) zero norm. The result is normalized.
    pub fn from_matrix(m: DMatrix<C64>, tolerance: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() < 2 {
            return Err(Error::Invalid(
                "two fermions need single dimension >= 2".into(),
            ));
        }
        let anti = (&m - m.transpose()) / c64(2.0, 0.0);
        let deviation = (&m - &anti).norm();
        let scale = m.norm();
        if deviation > tol::scaled(tolerance, scale) {
            return Err(Error::NotAntisymmetric {
                deviation,
                tolerance: tol::scaled(tolerance, scale),
            });
        }
        let n = anti.norm();
        if n <= f64::EPSILON {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            matrix: anti / c64(n, 0.0),
        })
    }

    /// Build from a two-particle wedge expression: the term `(w, [i, j])`
    /// contributes `A_ij = w/√2` and `A_ji = −w/√2`.
    pub fn from_wedge_terms(state: &FermionState) -> Result<Self> {
        if state.n_particles() != 2 {
            return Err(Error::NotAPairState {
                got: state.n_particles(),
            });
        }
        if state.is_zero() {
            return Err(Error::ZeroState);
        }
        let d = state.single_dim();
        let mut m = DMatrix::<C64>::zeros(d, d);
        for WedgeTerm {
            coefficient,
            indices,
        } in state.terms()
        {
            let (i, j) = (indices[0], indices[1]);
            m[(i, j)] = coefficient / c64(SQRT_2, 0.0);
            m[(j, i)] = -m[(i, j)];
        }
        let n = m.norm();
        if n <= f64::EPSILON {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            matrix: m / c64(n, 0.0),
        })
    }

    pub fn single_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// The state as a joint two-factor vector (coefficients over the product
    /// basis are the matrix entries themselves).
    pub fn joint(&self) -> JointKet {
        JointKet::new(self.matrix.clone()).expect("square by construction")
    }

    /// Re-express as a sparse wedge expression (coefficients `√2 · A_ij` for
    /// `i < j`).
    pub fn to_wedge_state(&self) -> FermionState {
        let d = self.single_dim();
        let mut terms = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                let w = self.matrix[(i, j)] * c64(SQRT_2, 0.0);
                if w.norm() > 0.0 {
                    terms.push(WedgeTerm {
                        coefficient: w,
                        indices: vec![i, j],
                    });
                }
            }
        }
        FermionState::new(d, 2, terms).expect("valid terms by construction")
    }

    /// Overlap `⟨self|other⟩` over the product basis.
    pub fn inner(&self, other: &FermionPairState) -> Result<C64> {
        self.joint().inner(&other.joint())
    }
}

/// Result of [`slater_decompose`]: `A = U Z Uᵀ` with `Z` the block matrix of
/// `[[0, c_i/√2], [−c_i/√2, 0]]` blocks (descending `|c_i|`) and a zero pad.
#[derive(Debug, Clone)]
pub struct SlaterDecomposition {
    basis: Operator,
    coefficients: Vec<C64>,
    rank: usize,
}

impl SlaterDecomposition {
    /// The congruence unitary; column `k` is the canonical basis vector
    /// `φ_{k+1}` expressed in the input basis.
    pub fn basis_unitary(&self) -> &Operator {
        &self.basis
    }

    /// Wedge-normalized coefficients `c_i`, ordered by descending magnitude;
    /// `Σ|c_i|² = 1` and exactly `rank` of them are nonzero.
    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis_ket(&self, k: usize) -> Ket {
        self.basis.column(k)
    }

    /// The canonical block matrix `Z` (entries `c_i/√2`).
    pub fn canonical_matrix(&self) -> DMatrix<C64> {
        let d = self.basis.dim_out();
        let mut z = DMatrix::<C64>::zeros(d, d);
        for (i, &ci) in self.coefficients.iter().enumerate() {
            let entry = ci / c64(SQRT_2, 0.0);
            z[(2 * i, 2 * i + 1)] = entry;
            z[(2 * i + 1, 2 * i)] = -entry;
        }
        z
    }

    /// `U Z Uᵀ`, for reconstruction checks.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let u = self.basis.mat();
        u * self.canonical_matrix() * u.transpose()
    }

    pub fn reconstruction_error(&self, state: &FermionPairState) -> f64 {
        (state.matrix() - self.reconstruct()).norm()
    }

    /// Shape parameters of the two leading blocks; requires rank ≥ 2.
    pub fn two_block_params(&self) -> Result<TwoBlockParams> {
        if self.rank < 2 {
            return Err(Error::RankTooLow {
                rank: self.rank,
                required: 2,
            });
        }
        TwoBlockParams::from_coefficients(self.coefficients[0], self.coefficients[1])
    }
}

/// The two parameters of a two-block state that control its achievable CHSH
/// value: `xi = 2|c₁c₂|/(|c₁|² + |c₂|²)` and `gamma = arg(c₁ c₂∗)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBlockParams {
    pub xi: f64,
    pub gamma: f64,
}

impl TwoBlockParams {
    pub fn from_coefficients(c1: C64, c2: C64) -> Result<Self> {
        let denom = c1.norm_sqr() + c2.norm_sqr();
        if denom <= f64::EPSILON || c1.norm() <= f64::EPSILON || c2.norm() <= f64::EPSILON {
            return Err(Error::Invalid(
                "two-block parameters need two nonzero coefficients".into(),
            ));
        }
        let xi = 2.0 * c1.norm() * c2.norm() / denom;
        // keep gamma in (−π, π]: atan2 maps a negative-zero imaginary part
        // on the negative real axis to −π
        let mut gamma = (c1 * c2.conj()).arg();
        if gamma == -std::f64::consts::PI {
            gamma = std::f64::consts::PI;
        }
        Ok(Self { xi, gamma })
    }

    pub fn validated(xi: f64, gamma: f64) -> Result<Self> {
        if !(xi > 0.0 && xi <= 1.0 + 1e-12) {
            return Err(Error::XiOutOfRange { xi });
        }
        Ok(Self {
            xi: xi.min(1.0),
            gamma,
        })
    }
}

/// Number of nonzero canonical coefficients (half the numerical rank of the
/// coefficient matrix).
pub fn slater_rank(state: &FermionPairState) -> Result<usize> {
    Ok(slater_decompose(state)?.rank())
}

/// A state is GMW-entangled iff it is not the antisymmetrization of a product
/// state, i.e. iff its Slater rank is at least 2.
pub fn is_gmw_entangled(state: &FermionPairState) -> Result<bool> {
    Ok(slater_rank(state)? >= 2)
}

/// Compute the canonical decomposition `A = U Z Uᵀ`.
///
/// Deterministic: degenerate singular groups are entered through canonical
/// basis seeds, column phases are fixed by making the first significant
/// component of each column real positive, and coefficient ties are broken
/// by phase then extraction order.
pub fn slater_decompose(state: &FermionPairState) -> Result<SlaterDecomposition> {
    let a = state.matrix();
    let d = state.single_dim();

    let s_max = Operator::new(a.clone()).svd()?.singular_values[0].max(f64::EPSILON);
    let rank_cutoff = tol::RANK * s_max;

    // Right-singular pair vectors (v_i, w_i); U columns are their conjugates.
    let mut pair_vectors: Vec<DVector<C64>> = Vec::new();
    let mut deflated = a.clone();

    for _ in 0..(d / 2) {
        let svd = Operator::new(deflated.clone()).svd()?;
        let s_top = svd.singular_values[0];
        if s_top <= rank_cutoff {
            break;
        }

        // Right-singular subspace of the (numerically) degenerate top group;
        // antisymmetry pairs singular values, so it is at least a 2-plane.
        // Seed it with the canonical basis vector of largest projection, so
        // exactly block-diagonal inputs come back in their own basis.
        let group: Vec<usize> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s_top - s <= tol::DEGENERACY * s_max)
            .map(|(k, _)| k)
            .collect();
        let mut proj = DMatrix::<C64>::zeros(d, d);
        for &k in &group {
            let vk = svd.v.column(k);
            proj += vk.vector() * vk.vector().adjoint();
        }
        let mut best = (0usize, -1.0f64);
        for m in 0..d {
            let norm = proj.column(m).norm();
            if norm > best.1 + 1e-12 {
                best = (m, norm);
            }
        }
        let seeded = proj.column(best.0).into_owned();
        let n = seeded.norm();
        let v = if n <= 0.35 {
            svd.v.column(0).vector().clone()
        } else {
            seeded / c64(n, 0.0)
        };

        let (v, w) = extract_pair(&deflated, &v, &pair_vectors).or_else(|_| {
            // Retry from the raw top singular vector with re-orthogonalization.
            extract_pair(&deflated, svd.v.column(0).vector(), &pair_vectors)
        })?;

        // Deflate: remove the pair's support on both sides.
        let mut projector = DMatrix::<C64>::identity(d, d);
        projector -= &v * v.adjoint();
        projector -= &w * w.adjoint();
        deflated = projector.map(|z| z.conj()) * deflated * projector;

        pair_vectors.push(v);
        pair_vectors.push(w);
    }

    if pair_vectors.is_empty() {
        return Err(Error::DecompositionFailed(
            "normalized state produced no canonical blocks".into(),
        ));
    }

    // U columns: conjugates of (v, w) pairs, with the w column negated so the
    // raw block entry is the (real positive) singular value.
    let mut columns: Vec<DVector<C64>> = Vec::with_capacity(d);
    for (idx, pv) in pair_vectors.iter().enumerate() {
        let col = pv.map(|z| z.conj());
        columns.push(if idx % 2 == 1 { -col } else { col });
    }
    complete_basis(&mut columns, d);

    // Phase convention: first significant component of each column real
    // positive; the coefficient phases become explicit in c_i.
    for col in &mut columns {
        if let Some(entry) = col.iter().find(|z| z.norm() > 1e-9) {
            let phase = entry / c64(entry.norm(), 0.0);
            *col *= phase.conj();
        }
    }

    // Block coefficients recomputed from the original matrix.
    let n_pairs = pair_vectors.len() / 2;
    let mut blocks: Vec<(C64, usize)> = Vec::with_capacity(n_pairs);
    for i in 0..n_pairs {
        let u1 = &columns[2 * i];
        let u2 = &columns[2 * i + 1];
        let z = (u1.adjoint() * a * u2.map(|x| x.conj()))[(0, 0)];
        blocks.push((z * c64(SQRT_2, 0.0), i));
    }

    // Descending magnitude; ties by ascending phase, then extraction order.
    let tie = 1e-12 * s_max * SQRT_2;
    blocks.sort_by(|(ca, ia), (cb, ib)| {
        if (ca.norm() - cb.norm()).abs() <= tie {
            match ca.arg().total_cmp(&cb.arg()) {
                std::cmp::Ordering::Equal => ia.cmp(ib),
                other => other,
            }
        } else {
            cb.norm().total_cmp(&ca.norm())
        }
    });

    let mut ordered_columns: Vec<DVector<C64>> = Vec::with_capacity(d);
    let mut coefficients = Vec::with_capacity(n_pairs);
    for &(ci, i) in &blocks {
        coefficients.push(ci);
        ordered_columns.push(columns[2 * i].clone());
        ordered_columns.push(columns[2 * i + 1].clone());
    }
    ordered_columns.extend(columns.into_iter().skip(2 * n_pairs));

    let basis = Operator::new(DMatrix::from_columns(&ordered_columns));
    let rank = coefficients.len();
    let decomposition = SlaterDecomposition {
        basis,
        coefficients,
        rank,
    };

    let err = decomposition.reconstruction_error(state);
    if err > tol::DEFAULT {
        return Err(Error::DecompositionFailed(format!(
            "reconstruction error {err:.3e} exceeds tolerance"
        )));
    }
    if !decomposition.basis.is_unitary(tol::UNITARY) {
        return Err(Error::DecompositionFailed(format!(
            "basis unitarity deviation {:.3e}",
            decomposition.basis.unitarity_deviation()
        )));
    }
    Ok(decomposition)
}

/// Turn a candidate right-singular vector into an orthonormal canonical pair
/// `(v, w)` with `w = (Bv)∗/‖Bv‖`, both re-orthogonalized against previously
/// extracted pairs.
fn extract_pair(
    b: &DMatrix<C64>,
    candidate: &DVector<C64>,
    prior: &[DVector<C64>],
) -> Result<(DVector<C64>, DVector<C64>)> {
    let v = reorthogonalize(candidate.clone(), prior, None)?;
    let bv = b * &v;
    let s = bv.norm();
    if s <= f64::EPSILON {
        return Err(Error::DecompositionFailed(
            "candidate vector is annihilated by the deflated matrix".into(),
        ));
    }
    let w_raw = bv.map(|z| z.conj()) / c64(s, 0.0);
    let w = reorthogonalize(w_raw, prior, Some(&v))?;
    Ok((v, w))
}

/// Two passes of modified Gram–Schmidt against `prior` (and optionally one
/// extra vector), with failure when the direction collapses.
fn reorthogonalize(
    mut x: DVector<C64>,
    prior: &[DVector<C64>],
    extra: Option<&DVector<C64>>,
) -> Result<DVector<C64>> {
    for _ in 0..2 {
        for p in prior.iter().chain(extra) {
            let overlap = p.dotc(&x);
            x -= p * overlap;
        }
    }
    let n = x.norm();
    if n < 0.5 {
        return Err(Error::DecompositionFailed(format!(
            "pairing degenerated (residual norm {n:.3e})"
        )));
    }
    Ok(x / c64(n, 0.0))
}

/// Greedily extend an orthonormal column set to a full basis using the
/// canonical basis vector with the largest residual at each step.
fn complete_basis(columns: &mut Vec<DVector<C64>>, d: usize) {
    while columns.len() < d {
        let mut best: Option<(f64, DVector<C64>)> = None;
        for m in 0..d {
            let mut r = DVector::<C64>::zeros(d);
            r[m] = c64(1.0, 0.0);
            for c in columns.iter() {
                let overlap = c.dotc(&r);
                r -= c * overlap;
            }
            let n = r.norm();
            if best.as_ref().is_none_or(|(bn, _)| n > *bn + 1e-12) {
                best = Some((n, r));
            }
        }
        let (n, r) = best.expect("dimension is positive");
        columns.push(r / c64(n, 0.0));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::FermionState;
    use crate::linalg::haar_random_unitary;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    pub(crate) fn singlet() -> FermionPairState {
        let fs = FermionState::basis_wedge(2, &[0, 1]).unwrap();
        FermionPairState::from_wedge_terms(&fs).unwrap()
    }

    /// EPRB in the basis e1=|L↑⟩, e2=|R↓⟩, e3=|L↓⟩, e4=|R↑⟩:
    /// (e1∧e2 − e3∧e4)/√2.
    pub(crate) fn eprb() -> FermionPairState {
        let fs = FermionState::new(
            4,
            2,
            vec![
                WedgeTerm {
                    coefficient: c64(SQRT_HALF, 0.0),
                    indices: vec![0, 1],
                },
                WedgeTerm {
                    coefficient: c64(-SQRT_HALF, 0.0),
                    indices: vec![2, 3],
                },
            ],
        )
        .unwrap();
        FermionPairState::from_wedge_terms(&fs).unwrap()
    }

    /// `Σ c_i φ_{2i-1}∧φ_{2i}` rotated by a seeded Haar unitary.
    pub(crate) fn rotated_canonical(d: usize, coeffs: &[C64], seed: u64) -> FermionPairState {
        let mut z = DMatrix::<C64>::zeros(d, d);
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for (i, &ci) in coeffs.iter().enumerate() {
            let entry = ci / c64(norm * SQRT_2, 0.0);
            z[(2 * i, 2 * i + 1)] = entry;
            z[(2 * i + 1, 2 * i)] = -entry;
        }
        let u = haar_random_unitary(d, seed);
        let a = u.mat() * z * u.mat().transpose();
        FermionPairState::from_matrix(a, tol::DEFAULT).unwrap()
    }

    #[test]
    fn wedge_terms_place_coefficients() {
        let s = singlet();
        assert!((s.matrix()[(0, 1)] - c64(SQRT_HALF, 0.0)).norm() < 1e-14);
        assert!((s.matrix()[(1, 0)] + c64(SQRT_HALF, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eprb_matrix_entries() {
        let s = eprb();
        assert!((s.matrix()[(0, 1)] - c64(0.5, 0.0)).norm() < 1e-14);
        assert!((s.matrix()[(2, 3)] + c64(0.5, 0.0)).norm() < 1e-14);
        assert!((s.matrix()[(1, 0)] + c64(0.5, 0.0)).norm() < 1e-14);
        assert!((s.matrix()[(3, 2)] - c64(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn empty_wedge_state_rejected() {
        let empty = FermionState::new(3, 2, vec![]).unwrap();
        assert!(matches!(
            FermionPairState::from_wedge_terms(&empty),
            Err(Error::ZeroState)
        ));
    }

    #[test]
    fn non_antisymmetric_matrix_rejected() {
        let m = DMatrix::from_fn(2, 2, |i, j| c64((i + 2 * j) as f64, 0.0));
        assert!(matches!(
            FermionPairState::from_matrix(m, tol::DEFAULT),
            Err(Error::NotAntisymmetric { .. })
        ));
    }

    #[test]
    fn singlet_is_already_canonical() {
        let dec = slater_decompose(&singlet()).unwrap();
        assert_eq!(dec.rank(), 1);
        assert!((dec.coefficients()[0] - c64(1.0, 0.0)).norm() < 1e-12);
        let id = DMatrix::<C64>::identity(2, 2);
        assert!((dec.basis_unitary().mat() - id).norm() < 1e-12);
    }

    #[test]
    fn eprb_coefficients_and_rank() {
        let dec = slater_decompose(&eprb()).unwrap();
        assert_eq!(dec.rank(), 2);
        assert!((dec.coefficients()[0] - c64(SQRT_HALF, 0.0)).norm() < 1e-12);
        assert!((dec.coefficients()[1] + c64(SQRT_HALF, 0.0)).norm() < 1e-12);
        assert!(dec.reconstruction_error(&eprb()) < 1e-12);
    }

    #[test]
    fn construct_then_recover_round_trip() {
        let state = rotated_canonical(6, &[c64(0.8, 0.0), c64(0.6, 0.0)], 17);
        let dec = slater_decompose(&state).unwrap();
        assert_eq!(dec.rank(), 2);
        assert!((dec.coefficients()[0].norm() - 0.8).abs() < 1e-9);
        assert!((dec.coefficients()[1].norm() - 0.6).abs() < 1e-9);
        assert!(dec.reconstruction_error(&state) < 1e-9);
    }

    #[test]
    fn odd_dimension_zero_pad() {
        let state = rotated_canonical(5, &[c64(0.9, 0.0), c64(0.1, 0.43)], 23);
        let dec = slater_decompose(&state).unwrap();
        assert_eq!(dec.rank(), 2);
        assert!(dec.reconstruction_error(&state) < 1e-9);
        assert!(dec.basis_unitary().is_unitary(1e-10));
    }

    #[test]
    fn degenerate_magnitudes_recovered() {
        let state = rotated_canonical(
            6,
            &[c64(0.5, 0.0), c64(0.0, 0.5), c64(SQRT_HALF, 0.0)],
            5,
        );
        let dec = slater_decompose(&state).unwrap();
        assert_eq!(dec.rank(), 3);
        assert!(dec.reconstruction_error(&state) < 1e-9);
        let mags: Vec<f64> = dec.coefficients().iter().map(|c| c.norm()).collect();
        assert!((mags[0] - SQRT_HALF).abs() < 1e-9);
        assert!((mags[1] - 0.5).abs() < 1e-9);
        assert!((mags[2] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn rank_of_wedge_is_one() {
        // wedge of two random orthonormal kets in d = 5
        let u = haar_random_unitary(5, 99);
        let kets = [u.column(0), u.column(1)];
        let fs = crate::exterior::wedge_of_kets(&kets).unwrap();
        let pair = FermionPairState::from_wedge_terms(&fs).unwrap();
        assert_eq!(slater_rank(&pair).unwrap(), 1);
        assert!(!is_gmw_entangled(&pair).unwrap());
    }

    #[test]
    fn gmw_verdicts() {
        assert!(!is_gmw_entangled(&singlet()).unwrap());
        assert!(is_gmw_entangled(&eprb()).unwrap());
    }

    #[test]
    fn rank_boundary_sweep() {
        // c₂ below the rank tolerance → rank 1
        for (c2, expect) in [(1e-6, 2usize), (1e-12, 1usize)] {
            let state = rotated_canonical(4, &[c64(1.0, 0.0), c64(c2, 0.0)], 3);
            assert_eq!(
                slater_rank(&state).unwrap(),
                expect,
                "c2 = {c2:.1e} should give rank {expect}"
            );
        }
    }

    #[test]
    fn congruence_invariance_of_magnitudes() {
        let state = rotated_canonical(6, &[c64(0.7, 0.1), c64(0.0, 0.6), c64(0.2, 0.2)], 31);
        let base: Vec<f64> = slater_decompose(&state)
            .unwrap()
            .coefficients()
            .iter()
            .map(|c| c.norm())
            .collect();
        for seed in [101, 202] {
            let v = haar_random_unitary(6, seed);
            let rotated = FermionPairState::from_matrix(
                v.mat() * state.matrix() * v.mat().transpose(),
                tol::DEFAULT,
            )
            .unwrap();
            let mags: Vec<f64> = slater_decompose(&rotated)
                .unwrap()
                .coefficients()
                .iter()
                .map(|c| c.norm())
                .collect();
            assert_eq!(mags.len(), base.len());
            for (a, b) in mags.iter().zip(&base) {
                assert!((a - b).abs() < 1e-9, "magnitudes differ: {a} vs {b}");
            }
        }
    }

    #[test]
    fn singular_values_pair_up_as_coefficients() {
        let state = rotated_canonical(6, &[c64(0.8, 0.0), c64(0.0, 0.6)], 7);
        let dec = slater_decompose(&state).unwrap();
        let mut expected: Vec<f64> = dec
            .coefficients()
            .iter()
            .flat_map(|c| [c.norm() / SQRT_2, c.norm() / SQRT_2])
            .collect();
        expected.resize(6, 0.0);
        let svd = Operator::new(state.matrix().clone()).svd().unwrap();
        for (s, e) in svd.singular_values.iter().zip(&expected) {
            assert!((s - e).abs() < 1e-9, "singular value {s} vs paired |c|/√2 {e}");
        }
    }

    #[test]
    fn two_block_params_examples() {
        // EPRB: xi = 1, gamma = π
        let p = slater_decompose(&eprb())
            .unwrap()
            .two_block_params()
            .unwrap();
        assert!((p.xi - 1.0).abs() < 1e-12);
        assert!((p.gamma - std::f64::consts::PI).abs() < 1e-12);

        // real (0.8, 0.6): xi = 0.96, gamma = 0
        let q = TwoBlockParams::from_coefficients(c64(0.8, 0.0), c64(0.6, 0.0)).unwrap();
        assert!((q.xi - 0.96).abs() < 1e-12);
        assert_eq!(q.gamma, 0.0);

        // equal magnitudes maximize xi
        let r = TwoBlockParams::from_coefficients(c64(0.5, 0.5), c64(0.0, -SQRT_HALF)).unwrap();
        assert!((r.xi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_block_params_require_rank_two() {
        let dec = slater_decompose(&singlet()).unwrap();
        assert!(matches!(
            dec.two_block_params(),
            Err(Error::RankTooLow { rank: 1, required: 2 })
        ));
    }
}
