//! Individuating projector pairs and permutation-invariant local operations.
//!
//! Two single-system projectors `E₁ ⊥ E₂` individuate the subsystems of a
//! joint state `|ψ⟩` when `(E₁⊗E₂ + E₂⊗E₁)|ψ⟩ = |ψ⟩` (*exhaustion*). The
//! pair plays the role factor labels play for distinguishable systems: local
//! operators take the form `E₁AE₁ ⊗ E₂BE₂ + E₂BE₂ ⊗ E₁AE₁`, which commutes
//! with the swap and so is admissible under permutation invariance.
//!
//! For two fermions an individuating pair always exists: project onto the
//! odd and even vectors of a Slater basis. For bosonic product states with
//! identical factors no pair exists; [`exhaustion_residual_joint`] is exposed
//! so that negative check can be run on non-antisymmetric joint states too.

use crate::error::Error;
use crate::linalg::{C64, JointKet, Operator};
use crate::slater::{slater_decompose, slater_rank, FermionPairState};
use crate::tol;
use crate::Result;

/// Two mutually orthogonal single-system projectors.
#[derive(Debug, Clone)]
pub struct ProjectorPair {
    e1: Operator,
    e2: Operator,
    rank1: usize,
    rank2: usize,
}

impl ProjectorPair {
    /// Validates projector status of both operators and their orthogonality
    /// within `tolerance`.
    pub fn new(e1: Operator, e2: Operator, tolerance: f64) -> Result<Self> {
        if e1.dim_in() != e2.dim_in() || e1.dim_out() != e2.dim_out() {
            return Err(Error::DimensionMismatch {
                context: "projector pair",
                got: e2.dim_in(),
                expected: e1.dim_in(),
            });
        }
        for p in [&e1, &e2] {
            if !p.is_projector(tolerance) {
                return Err(Error::PredicateFailed {
                    property: "projector",
                    deviation: p.projector_deviation(),
                });
            }
        }
        let cross = e1.mul(&e2)?.frobenius_norm();
        if cross > tol::scaled(tolerance, 1.0) {
            return Err(Error::NotOrthogonalPair { deviation: cross });
        }
        let rank1 = e1.trace().re.round() as usize;
        let rank2 = e2.trace().re.round() as usize;
        Ok(Self {
            e1,
            e2,
            rank1,
            rank2,
        })
    }

    pub fn e1(&self) -> &Operator {
        &self.e1
    }

    pub fn e2(&self) -> &Operator {
        &self.e2
    }

    /// (rank E₁, rank E₂).
    pub fn ranks(&self) -> (usize, usize) {
        (self.rank1, self.rank2)
    }

    pub fn dim(&self) -> usize {
        self.e1.dim_in()
    }

    /// `‖E₁E₂‖`, the orthogonality defect.
    pub fn orthogonality_error(&self) -> f64 {
        self.e1
            .mul(&self.e2)
            .map(|m| m.frobenius_norm())
            .unwrap_or(f64::INFINITY)
    }
}

/// Exhaustion check result for a state against a projector pair.
#[derive(Debug, Clone)]
pub struct ExhaustionReport {
    residual: f64,
    tolerance: f64,
}

impl ExhaustionReport {
    /// `‖(E₁⊗E₂ + E₂⊗E₁)|ψ⟩ − |ψ⟩‖`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn holds(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Residual of the exhaustion condition on an arbitrary joint state (not
/// necessarily antisymmetric): `‖(E₁⊗E₂ + E₂⊗E₁)|ψ⟩ − |ψ⟩‖`.
pub fn exhaustion_residual_joint(joint: &JointKet, pair: &ProjectorPair) -> Result<f64> {
    let d = joint.single_dim();
    if pair.dim() != d {
        return Err(Error::DimensionMismatch {
            context: "exhaustion residual",
            got: pair.dim(),
            expected: d,
        });
    }
    let m = joint.amplitudes();
    let filtered = pair.e1.mat() * m * pair.e2.mat().transpose()
        + pair.e2.mat() * m * pair.e1.mat().transpose();
    Ok((filtered - m).norm())
}

/// Exhaustion check for a two-fermion state. Rejects non-orthogonal pairs
/// (construction of [`ProjectorPair`] already enforces this; the check here
/// guards hand-built pairs passed across the API boundary).
pub fn check_exhaustion(state: &FermionPairState, pair: &ProjectorPair) -> Result<ExhaustionReport> {
    let cross = pair.orthogonality_error();
    if cross > tol::scaled(tol::DEFAULT, 1.0) {
        return Err(Error::NotOrthogonalPair { deviation: cross });
    }
    let residual = exhaustion_residual_joint(&state.joint(), pair)?;
    Ok(ExhaustionReport {
        residual,
        tolerance: tol::EXHAUSTION,
    })
}

/// Construct an individuating pair for any two-fermion state from its Slater
/// basis: `E₁` projects on the odd canonical vectors of the nonzero blocks,
/// `E₂` on the even ones. The returned pair is orthogonal and exhaustive.
pub fn individuate(state: &FermionPairState) -> Result<ProjectorPair> {
    let dec = slater_decompose(state)?;
    let d = state.single_dim();
    let mut m1 = nalgebra::DMatrix::<C64>::zeros(d, d);
    let mut m2 = nalgebra::DMatrix::<C64>::zeros(d, d);
    for i in 0..dec.rank() {
        let odd = dec.basis_ket(2 * i);
        let even = dec.basis_ket(2 * i + 1);
        m1 += odd.vector() * odd.vector().adjoint();
        m2 += even.vector() * even.vector().adjoint();
    }
    ProjectorPair::new(Operator::new(m1), Operator::new(m2), tol::DEFAULT)
}

/// Constituent states are pure iff a rank-(1,1) individuating pair exists,
/// which holds exactly when the Slater rank is 1.
pub fn constituents_pure(state: &FermionPairState) -> Result<bool> {
    Ok(slater_rank(state)? == 1)
}

/// The permutation-invariant analogue of acting with `A` on one subsystem
/// and `B` on the other: `E₁AE₁ ⊗ E₂BE₂ + E₂BE₂ ⊗ E₁AE₁`.
pub fn pi_local_operator(
    pair: &ProjectorPair,
    a: &Operator,
    b: &Operator,
) -> Result<Operator> {
    let d = pair.dim();
    if a.dim_in() != d || a.dim_out() != d || b.dim_in() != d || b.dim_out() != d {
        return Err(Error::DimensionMismatch {
            context: "PI local operator",
            got: a.dim_in().max(b.dim_in()),
            expected: d,
        });
    }
    let a_loc = pair.e1.mul(a)?.mul(&pair.e1)?;
    let b_loc = pair.e2.mul(b)?.mul(&pair.e2)?;
    let first = a_loc.kron(&b_loc)?;
    let second = b_loc.kron(&a_loc)?;
    Ok(Operator::new(first.mat() + second.mat()))
}

/// Apply the selective filter `E₁⊗E₂ + E₂⊗E₁` to a two-fermion state and
/// renormalize. Antisymmetry of the coefficient matrix is preserved exactly.
/// A filter whose range excludes the state is a zero-probability error.
pub fn pi_local_filter(
    state: &FermionPairState,
    pair: &ProjectorPair,
) -> Result<FermionPairState> {
    let d = state.single_dim();
    if pair.dim() != d {
        return Err(Error::DimensionMismatch {
            context: "PI local filter",
            got: pair.dim(),
            expected: d,
        });
    }
    let m = state.matrix();
    let filtered = pair.e1.mat() * m * pair.e2.mat().transpose()
        + pair.e2.mat() * m * pair.e1.mat().transpose();
    let n = filtered.norm();
    if n <= 1e-12 {
        return Err(Error::ZeroProbabilityFilter { norm: n });
    }
    // make antisymmetry exact again after the projections
    FermionPairState::from_matrix(filtered, tol::DEFAULT)
}

/// Partial trace over one factor (both give the same matrix by antisymmetry):
/// `ρ = A A†`, Hermitian, unit trace, positive semidefinite.
///
/// Diagnostic only: under the permutation-invariant reading the partial trace
/// carries no physical meaning, because it singles out a factor slot. It is
/// kept for numerical cross-checks (its spectrum is `{|c_i|²/2, twice each}`).
pub fn reduced_density_diagnostic(state: &FermionPairState) -> Operator {
    let a = state.matrix();
    Operator::new(a * a.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{is_symmetric_operator, symmetrize_pair, FermionState, WedgeTerm};
    use crate::linalg::{c64, swap_operator};
    use crate::sampling::{random_fermion_pair, random_ket, random_projector_pair};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn singlet() -> FermionPairState {
        let fs = FermionState::basis_wedge(2, &[0, 1]).unwrap();
        FermionPairState::from_wedge_terms(&fs).unwrap()
    }

    fn eprb() -> FermionPairState {
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

    fn basis_projector(d: usize, indices: &[usize]) -> Operator {
        let mut m = nalgebra::DMatrix::<C64>::zeros(d, d);
        for &i in indices {
            m[(i, i)] = c64(1.0, 0.0);
        }
        Operator::new(m)
    }

    #[test]
    fn exhaustion_on_basis_wedge() {
        let psi = FermionPairState::from_wedge_terms(
            &FermionState::basis_wedge(2, &[0, 1]).unwrap(),
        )
        .unwrap();
        let pair = ProjectorPair::new(
            basis_projector(2, &[0]),
            basis_projector(2, &[1]),
            tol::DEFAULT,
        )
        .unwrap();
        let report = check_exhaustion(&psi, &pair).unwrap();
        assert!(report.residual() < 1e-14);
        assert!(report.holds());
    }

    #[test]
    fn exhaustion_on_two_block_state() {
        let pair = ProjectorPair::new(
            basis_projector(4, &[0, 2]),
            basis_projector(4, &[1, 3]),
            tol::DEFAULT,
        )
        .unwrap();
        let report = check_exhaustion(&eprb(), &pair).unwrap();
        assert!(report.holds());
    }

    #[test]
    fn non_orthogonal_pair_rejected() {
        let p = basis_projector(2, &[0]);
        assert!(matches!(
            ProjectorPair::new(p.clone(), p, tol::DEFAULT),
            Err(Error::NotOrthogonalPair { .. })
        ));
    }

    #[test]
    fn bosonic_product_state_never_exhausted() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let phi = random_ket(4, &mut rng);
        let bosonic = symmetrize_pair(&phi, &phi).unwrap();
        for _ in 0..25 {
            let r1 = 1 + (rng.gen::<u64>() % 2) as usize;
            let r2 = 1 + (rng.gen::<u64>() % 2) as usize;
            let pair = random_projector_pair(4, r1, r2, &mut rng).unwrap();
            let residual = exhaustion_residual_joint(&bosonic, &pair).unwrap();
            assert!(
                residual > 0.1,
                "bosonic state should fail exhaustion, residual = {residual}"
            );
        }
    }

    #[test]
    fn individuate_singlet_gives_rank_one_pair() {
        let pair = individuate(&singlet()).unwrap();
        assert_eq!(pair.ranks(), (1, 1));
        let report = check_exhaustion(&singlet(), &pair).unwrap();
        assert!(report.residual() < 1e-10);
    }

    #[test]
    fn individuate_eprb_matches_canonical_pair() {
        let pair = individuate(&eprb()).unwrap();
        assert_eq!(pair.ranks(), (2, 2));
        // the Slater basis of EPRB is the input basis, so E1 and E2 are the
        // odd/even coordinate projectors up to block phases
        assert!((pair.e1().mat() - basis_projector(4, &[0, 2]).mat()).norm() < 1e-9);
        assert!((pair.e2().mat() - basis_projector(4, &[1, 3]).mat()).norm() < 1e-9);
        assert!(check_exhaustion(&eprb(), &pair).unwrap().holds());
    }

    #[test]
    fn individuate_random_wedge() {
        let state = random_fermion_pair(7, 1, 13).unwrap();
        let pair = individuate(&state).unwrap();
        assert_eq!(pair.ranks(), (1, 1));
        let report = check_exhaustion(&state, &pair).unwrap();
        assert!(report.residual() <= 1e-9);
    }

    #[test]
    fn purity_matches_rank() {
        assert!(constituents_pure(&singlet()).unwrap());
        assert!(!constituents_pure(&eprb()).unwrap());
        let wedge = random_fermion_pair(6, 1, 5).unwrap();
        assert!(constituents_pure(&wedge).unwrap());
    }

    #[test]
    fn pi_local_operator_identity_case() {
        let pair = individuate(&eprb()).unwrap();
        let id = Operator::identity(4);
        let q = pi_local_operator(&pair, &id, &id).unwrap();
        let expected = Operator::new(
            pair.e1().kron(pair.e2()).unwrap().mat()
                + pair.e2().kron(pair.e1()).unwrap().mat(),
        );
        assert!((q.mat() - expected.mat()).norm() < 1e-12);
    }

    #[test]
    fn pi_local_operator_commutes_with_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pair = individuate(&eprb()).unwrap();
        for _ in 0..5 {
            let a = Operator::new(crate::linalg::ginibre_matrix(4, 4, &mut rng));
            let b = Operator::new(crate::linalg::ginibre_matrix(4, 4, &mut rng));
            let q = pi_local_operator(&pair, &a, &b).unwrap();
            assert!(is_symmetric_operator(&q, 4, 1e-10).unwrap());
            let s = swap_operator(4);
            let comm = (s.mat() * q.mat() - q.mat() * s.mat()).norm();
            assert!(comm <= 1e-10 * q.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn rank_one_pair_generates_commuting_operators() {
        // with a rank-(1,1) pair the compressed single-system algebra is
        // one-dimensional, so outputs over varying A commute
        let pair = individuate(&singlet()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let id = Operator::identity(2);
        let q1 = pi_local_operator(
            &pair,
            &Operator::new(crate::linalg::ginibre_matrix(2, 2, &mut rng)),
            &id,
        )
        .unwrap();
        let q2 = pi_local_operator(
            &pair,
            &Operator::new(crate::linalg::ginibre_matrix(2, 2, &mut rng)),
            &id,
        )
        .unwrap();
        let comm = (q1.mat() * q2.mat() - q2.mat() * q1.mat()).norm();
        assert!(comm < 1e-12);
    }

    #[test]
    fn filter_keeps_exhausted_state_fixed() {
        let pair = individuate(&eprb()).unwrap();
        let filtered = pi_local_filter(&eprb(), &pair).unwrap();
        let overlap = filtered.inner(&eprb()).unwrap();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn filter_projects_to_leading_blocks() {
        // rank-3 state filtered onto its top two blocks
        let state = random_fermion_pair(6, 3, 21).unwrap();
        let dec = slater_decompose(&state).unwrap();
        let d = 6;
        let mut m1 = nalgebra::DMatrix::<C64>::zeros(d, d);
        let mut m2 = nalgebra::DMatrix::<C64>::zeros(d, d);
        for i in 0..2 {
            let odd = dec.basis_ket(2 * i);
            let even = dec.basis_ket(2 * i + 1);
            m1 += odd.vector() * odd.vector().adjoint();
            m2 += even.vector() * even.vector().adjoint();
        }
        let pair = ProjectorPair::new(Operator::new(m1), Operator::new(m2), tol::DEFAULT).unwrap();
        let chi = pi_local_filter(&state, &pair).unwrap();
        let chi_dec = slater_decompose(&chi).unwrap();
        assert_eq!(chi_dec.rank(), 2);
        let c = dec.coefficients();
        let expected_ratio = c[0].norm() / c[1].norm();
        let got_ratio = chi_dec.coefficients()[0].norm() / chi_dec.coefficients()[1].norm();
        assert!((expected_ratio - got_ratio).abs() < 1e-9);
    }

    #[test]
    fn filter_with_disjoint_range_is_zero_probability() {
        // EPRB lives on blocks (e1,e2),(e3,e4); a pair mixing odd/even the
        // wrong way around has zero overlap
        let pair = ProjectorPair::new(
            basis_projector(4, &[0]),
            basis_projector(4, &[2]),
            tol::DEFAULT,
        )
        .unwrap();
        assert!(matches!(
            pi_local_filter(&eprb(), &pair),
            Err(Error::ZeroProbabilityFilter { .. })
        ));
    }

    #[test]
    fn reduced_density_of_singlet_is_maximally_mixed() {
        let rho = reduced_density_diagnostic(&singlet());
        let expected = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c64(0.5, 0.0),
            c64(0.5, 0.0),
        ]));
        assert!((rho.mat() - expected).norm() < 1e-12);
    }

    #[test]
    fn reduced_density_of_wedge_is_half_support_projector() {
        // for φ₁∧φ₂ the diagnostic is (|φ₁⟩⟨φ₁| + |φ₂⟩⟨φ₂|)/2
        let state = random_fermion_pair(5, 1, 77).unwrap();
        let rho = reduced_density_diagnostic(&state);
        let dec = slater_decompose(&state).unwrap();
        let phi1 = dec.basis_ket(0);
        let phi2 = dec.basis_ket(1);
        let expected = (phi1.outer(&phi1).mat() + phi2.outer(&phi2).mat()) / c64(2.0, 0.0);
        assert!((rho.mat() - expected).norm() < 1e-10);
    }

    #[test]
    fn reduced_density_spectrum_pairs_coefficients() {
        let state = random_fermion_pair(6, 3, 2).unwrap();
        let dec = slater_decompose(&state).unwrap();
        let rho = reduced_density_diagnostic(&state);
        assert!(rho.is_hermitian(1e-10));
        assert!((rho.trace().re - 1.0).abs() < 1e-10);
        let eig = rho.hermitian_eigen(tol::DEFAULT).unwrap();
        let mut expected: Vec<f64> = dec
            .coefficients()
            .iter()
            .flat_map(|c| [c.norm_sqr() / 2.0, c.norm_sqr() / 2.0])
            .collect();
        expected.resize(6, 0.0);
        expected.sort_by(|a, b| b.total_cmp(a));
        for (got, want) in eig.eigenvalues.iter().zip(&expected) {
            assert!((got - want).abs() < 1e-9);
        }
    }
}
