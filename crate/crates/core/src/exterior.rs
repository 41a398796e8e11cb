//! Exterior-algebra layer: antisymmetrization, wedge products, the
//! correspondence between wedge expressions and totally antisymmetric
//! tensors, decomposability, and the permutation representation.
//!
//! A wedge expression `φ_{i1} ∧ … ∧ φ_{iN}` (strictly increasing indices)
//! stands for the unit-normalized antisymmetrization
//! `(1/√N!) Σ_π sgn(π) φ_{i_{π(1)}} ⊗ … ⊗ φ_{i_{π(N)}}`, so a single wedge
//! term with unit coefficient is a unit vector and coefficient square-sums
//! are preserved between the two pictures.

use std::collections::BTreeMap;

use nalgebra::DVector;

use crate::error::Error;
use crate::linalg::{c64, swap_operator, C64, JointKet, Ket, Operator};
use crate::tol;
use crate::Result;

/// One wedge monomial: a coefficient on a strictly increasing index tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeTerm {
    pub coefficient: C64,
    /// Strictly increasing basis indices, 0-based, length = particle number.
    pub indices: Vec<usize>,
}

/// An `N`-fermion state as a sparse sum of wedge monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionState {
    single_dim: usize,
    n_particles: usize,
    terms: BTreeMap<Vec<usize>, C64>,
}

impl FermionState {
    /// Build from wedge terms. Indices are canonicalized (sorted with sign
    /// flips); duplicate tuples are summed; exact-zero terms are dropped.
    pub fn new(single_dim: usize, n_particles: usize, terms: Vec<WedgeTerm>) -> Result<Self> {
        if n_particles == 0 {
            return Err(Error::Invalid("particle number must be >= 1".into()));
        }
        if n_particles > single_dim {
            return Err(Error::Invalid(format!(
                "cannot place {n_particles} fermions in dimension {single_dim}"
            )));
        }
        let mut map: BTreeMap<Vec<usize>, C64> = BTreeMap::new();
        for term in terms {
            if term.indices.len() != n_particles {
                return Err(Error::Invalid(format!(
                    "wedge term has {} indices, expected {n_particles}",
                    term.indices.len()
                )));
            }
            if term.indices.iter().any(|&i| i >= single_dim) {
                return Err(Error::Invalid(format!(
                    "wedge index out of range in {:?} (dim {single_dim})",
                    term.indices
                )));
            }
            let Some((sorted, sign)) = sort_with_sign(&term.indices) else {
                continue; // repeated index annihilates the monomial
            };
            let entry = map.entry(sorted).or_insert_with(|| c64(0.0, 0.0));
            *entry += term.coefficient * c64(sign, 0.0);
        }
        map.retain(|_, v| v.norm() != 0.0);
        Ok(Self {
            single_dim,
            n_particles,
            terms: map,
        })
    }

    /// A single basis wedge `φ_{i1} ∧ … ∧ φ_{iN}`.
    pub fn basis_wedge(single_dim: usize, indices: &[usize]) -> Result<Self> {
        Self::new(
            single_dim,
            indices.len(),
            vec![WedgeTerm {
                coefficient: c64(1.0, 0.0),
                indices: indices.to_vec(),
            }],
        )
    }

    /// Degree-1 state carrying the amplitudes of `ket`.
    pub fn from_ket(ket: &Ket) -> Self {
        let terms = ket
            .vector()
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() != 0.0)
            .map(|(i, &z)| (vec![i], z))
            .collect();
        Self {
            single_dim: ket.dim(),
            n_particles: 1,
            terms,
        }
    }

    pub fn single_dim(&self) -> usize {
        self.single_dim
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = WedgeTerm> + '_ {
        self.terms.iter().map(|(indices, &coefficient)| WedgeTerm {
            coefficient,
            indices: indices.clone(),
        })
    }

    pub fn coefficient(&self, indices: &[usize]) -> C64 {
        let Some((sorted, sign)) = sort_with_sign(indices) else {
            return c64(0.0, 0.0);
        };
        self.terms
            .get(&sorted)
            .map(|&z| z * c64(sign, 0.0))
            .unwrap_or_else(|| c64(0.0, 0.0))
    }

    pub fn norm(&self) -> f64 {
        self.terms
            .values()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_normalized(&self, tolerance: f64) -> bool {
        (self.norm() - 1.0).abs() <= tolerance
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= f64::EPSILON {
            return Err(Error::ZeroState);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v /= c64(n, 0.0);
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= factor;
        }
        out.terms.retain(|_, v| v.norm() != 0.0);
        out
    }

    pub fn add(&self, other: &FermionState) -> Result<Self> {
        if self.single_dim != other.single_dim || self.n_particles != other.n_particles {
            return Err(Error::Invalid(
                "cannot add fermion states of different shape".into(),
            ));
        }
        let mut out = self.clone();
        for (k, v) in &other.terms {
            let entry = out.terms.entry(k.clone()).or_insert_with(|| c64(0.0, 0.0));
            *entry += v;
        }
        out.terms.retain(|_, v| v.norm() != 0.0);
        Ok(out)
    }

    /// `⟨self|other⟩` in the orthonormal wedge basis.
    pub fn inner(&self, other: &FermionState) -> Result<C64> {
        if self.single_dim != other.single_dim || self.n_particles != other.n_particles {
            return Err(Error::Invalid(
                "cannot take inner product of fermion states of different shape".into(),
            ));
        }
        Ok(self
            .terms
            .iter()
            .filter_map(|(k, a)| other.terms.get(k).map(|b| a.conj() * b))
            .sum())
    }

    /// Expand into the full `N`-fold tensor, using the `1/√N!` convention.
    pub fn expand(&self) -> TensorState {
        let mut t = TensorState::zeros(self.single_dim, self.n_particles);
        let perms = permutations_with_sign(self.n_particles);
        let scale = 1.0 / factorial(self.n_particles).sqrt();
        for (indices, coeff) in &self.terms {
            for (perm, sign) in &perms {
                let tuple: Vec<usize> = perm.iter().map(|&p| indices[p]).collect();
                let idx = t.flat_index(&tuple);
                t.amplitudes[idx] += coeff * c64(sign * scale, 0.0);
            }
        }
        t
    }

    /// Two-particle states expand to a joint coefficient matrix.
    pub fn expand_pair(&self) -> Result<JointKet> {
        if self.n_particles != 2 {
            return Err(Error::NotAPairState {
                got: self.n_particles,
            });
        }
        let t = self.expand();
        let d = self.single_dim;
        let m = nalgebra::DMatrix::from_fn(d, d, |i, j| t.amplitudes[i * d + j]);
        JointKet::new(m)
    }

    /// Interior product with the basis covector `⟨e_j|`: degree drops by one,
    /// each monomial containing `j` at position `p` contributes sign `(−1)^p`.
    pub fn contract_basis(&self, j: usize) -> FermionState {
        let mut terms: BTreeMap<Vec<usize>, C64> = BTreeMap::new();
        for (indices, coeff) in &self.terms {
            if let Some(p) = indices.iter().position(|&i| i == j) {
                let mut rest = indices.clone();
                rest.remove(p);
                let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                let entry = terms.entry(rest).or_insert_with(|| c64(0.0, 0.0));
                *entry += coeff * c64(sign, 0.0);
            }
        }
        terms.retain(|_, v| v.norm() != 0.0);
        FermionState {
            single_dim: self.single_dim,
            n_particles: self.n_particles - 1,
            terms,
        }
    }

    /// Degree-1 states project onto an ordinary ket.
    pub fn as_ket(&self) -> Result<Ket> {
        if self.n_particles != 1 {
            return Err(Error::Invalid(format!(
                "expected a degree-1 state, got degree {}",
                self.n_particles
            )));
        }
        let mut v = DVector::zeros(self.single_dim);
        for (indices, coeff) in &self.terms {
            v[indices[0]] = *coeff;
        }
        Ket::from_vector(v)
    }
}

/// Dense `N`-fold tensor coefficients over the product basis, row-major with
/// the first factor slowest (flat index `Σ i_k · d^(N−1−k)`).
#[derive(Debug, Clone, PartialEq)]
pub struct TensorState {
    single_dim: usize,
    n_factors: usize,
    amplitudes: Vec<C64>,
}

impl TensorState {
    pub fn zeros(single_dim: usize, n_factors: usize) -> Self {
        Self {
            single_dim,
            n_factors,
            amplitudes: vec![c64(0.0, 0.0); single_dim.pow(n_factors as u32)],
        }
    }

    pub fn from_joint(joint: &JointKet) -> Self {
        let d = joint.single_dim();
        let mut t = Self::zeros(d, 2);
        for i in 0..d {
            for j in 0..d {
                t.amplitudes[i * d + j] = joint.amplitudes()[(i, j)];
            }
        }
        t
    }

    /// Product of single-system kets, all of dimension `d`.
    pub fn from_factors(factors: &[&Ket]) -> Result<Self> {
        let d = factors
            .first()
            .ok_or_else(|| Error::Invalid("need at least one factor".into()))?
            .dim();
        if factors.iter().any(|k| k.dim() != d) {
            return Err(Error::Invalid("factors must share one dimension".into()));
        }
        let n = factors.len();
        let mut t = Self::zeros(d, n);
        let mut tuple = vec![0usize; n];
        loop {
            let amp: C64 = tuple
                .iter()
                .enumerate()
                .map(|(slot, &i)| factors[slot].vector()[i])
                .product();
            let idx = t.flat_index(&tuple);
            t.amplitudes[idx] = amp;
            if !increment(&mut tuple, d) {
                break;
            }
        }
        Ok(t)
    }

    pub fn single_dim(&self) -> usize {
        self.single_dim
    }

    pub fn n_factors(&self) -> usize {
        self.n_factors
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn flat_index(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.n_factors);
        tuple.iter().fold(0, |acc, &i| acc * self.single_dim + i)
    }

    pub fn get(&self, tuple: &[usize]) -> C64 {
        self.amplitudes[self.flat_index(tuple)]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn sub(&self, other: &TensorState) -> Result<TensorState> {
        if self.single_dim != other.single_dim || self.n_factors != other.n_factors {
            return Err(Error::Invalid(
                "cannot subtract tensors of different shape".into(),
            ));
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a - b)
            .collect();
        Ok(TensorState {
            single_dim: self.single_dim,
            n_factors: self.n_factors,
            amplitudes,
        })
    }
}

fn increment(tuple: &mut [usize], base: usize) -> bool {
    for slot in (0..tuple.len()).rev() {
        tuple[slot] += 1;
        if tuple[slot] < base {
            return true;
        }
        tuple[slot] = 0;
    }
    false
}

/// Outcome of projecting a tensor onto the antisymmetric sector.
#[derive(Debug, Clone)]
pub enum Antisymmetrized {
    /// The projection vanishes (e.g. a repeated factor).
    Zero,
    /// Normalized projection plus the norm of the raw (unnormalized)
    /// projection, so callers can recover the projection itself.
    Projected { state: FermionState, weight: f64 },
}

impl Antisymmetrized {
    pub fn into_state(self) -> Result<FermionState> {
        match self {
            Antisymmetrized::Zero => Err(Error::ZeroState),
            Antisymmetrized::Projected { state, .. } => Ok(state),
        }
    }
}

/// Project onto the totally antisymmetric sector and re-express in wedge
/// terms. A vanishing projection is reported as [`Antisymmetrized::Zero`],
/// distinct from any numerical failure.
pub fn antisymmetrize(t: &TensorState) -> Antisymmetrized {
    let d = t.single_dim();
    let n = t.n_factors();
    let perms = permutations_with_sign(n);
    let scale = 1.0 / factorial(n).sqrt();
    let mut terms: Vec<WedgeTerm> = Vec::new();
    let mut sq_sum = 0.0;
    for indices in combinations(d, n) {
        let mut w = c64(0.0, 0.0);
        for (perm, sign) in &perms {
            let tuple: Vec<usize> = perm.iter().map(|&p| indices[p]).collect();
            w += t.get(&tuple) * c64(*sign, 0.0);
        }
        w *= c64(scale, 0.0);
        if w.norm() > 0.0 {
            sq_sum += w.norm_sqr();
            terms.push(WedgeTerm {
                coefficient: w,
                indices,
            });
        }
    }
    let weight = sq_sum.sqrt();
    if weight <= tol::scaled(1e-12, t.norm()) {
        return Antisymmetrized::Zero;
    }
    let state = FermionState::new(
        d,
        n,
        terms
            .into_iter()
            .map(|mut term| {
                term.coefficient /= c64(weight, 0.0);
                term
            })
            .collect(),
    )
    .expect("canonical terms are valid by construction");
    Antisymmetrized::Projected { state, weight }
}

/// Two-factor convenience wrapper over [`antisymmetrize`].
pub fn antisymmetrize_pair(joint: &JointKet) -> Antisymmetrized {
    antisymmetrize(&TensorState::from_joint(joint))
}

/// Normalized symmetrization `(x⊗y + y⊗x)/‖·‖` of two kets. Used for the
/// bosonic exhaustion counterexample; a full bosonic layer is out of scope.
pub fn symmetrize_pair(x: &Ket, y: &Ket) -> Result<JointKet> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            context: "symmetrize pair",
            got: y.dim(),
            expected: x.dim(),
        });
    }
    let m = x.vector() * y.vector().transpose() + y.vector() * x.vector().transpose();
    JointKet::new(m)?.normalized()
}

/// Wedge product, extended bilinearly from concatenation of monomials.
///
/// Degree overflow (`r + s > d`) yields the zero state of the formal degree
/// `r + s`, which callers can detect with [`FermionState::is_zero`].
pub fn wedge(a: &FermionState, b: &FermionState) -> Result<FermionState> {
    if a.single_dim() != b.single_dim() {
        return Err(Error::Invalid(
            "wedge factors must share the single-system dimension".into(),
        ));
    }
    let d = a.single_dim();
    let degree = a.n_particles() + b.n_particles();
    let mut terms: BTreeMap<Vec<usize>, C64> = BTreeMap::new();
    if degree <= d {
        for (ia, ca) in &a.terms {
            for (ib, cb) in &b.terms {
                let mut concat = Vec::with_capacity(degree);
                concat.extend_from_slice(ia);
                concat.extend_from_slice(ib);
                let Some((sorted, sign)) = sort_with_sign(&concat) else {
                    continue;
                };
                let entry = terms.entry(sorted).or_insert_with(|| c64(0.0, 0.0));
                *entry += ca * cb * c64(sign, 0.0);
            }
        }
        terms.retain(|_, v| v.norm() != 0.0);
    }
    Ok(FermionState {
        single_dim: d,
        n_particles: degree,
        terms,
    })
}

/// Wedge a family of kets into a degree-`n` state.
pub fn wedge_of_kets(kets: &[Ket]) -> Result<FermionState> {
    let first = kets
        .first()
        .ok_or_else(|| Error::Invalid("need at least one factor".into()))?;
    let mut acc = FermionState::from_ket(first);
    for k in &kets[1..] {
        acc = wedge(&acc, &FermionState::from_ket(k))?;
    }
    Ok(acc)
}

/// Apply the permutation representation: slot `j` of the output carries the
/// factor that sat in slot `π⁻¹(j)`, i.e. coefficients pull back along `π`.
pub fn permutation_action(perm: &[usize], t: &TensorState) -> Result<TensorState> {
    let n = t.n_factors();
    if perm.len() != n || !is_permutation(perm) {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    let d = t.single_dim();
    let mut out = TensorState::zeros(d, n);
    let mut tuple = vec![0usize; n];
    loop {
        let src: Vec<usize> = (0..n).map(|k| tuple[perm[k]]).collect();
        let idx = out.flat_index(&tuple);
        out.amplitudes[idx] = t.get(&src);
        if !increment(&mut tuple, d) {
            break;
        }
    }
    Ok(out)
}

/// True when `q` (acting on the two-factor product space of single dimension
/// `single_dim`) commutes with the swap within `tolerance`, the checkable
/// form of permutation invariance for two factors.
pub fn is_symmetric_operator(q: &Operator, single_dim: usize, tolerance: f64) -> Result<bool> {
    let d2 = single_dim * single_dim;
    if q.dim_out() != d2 || q.dim_in() != d2 {
        return Err(Error::DimensionMismatch {
            context: "symmetric-operator check",
            got: q.dim_out(),
            expected: d2,
        });
    }
    let s = swap_operator(single_dim);
    let comm = (s.mat() * q.mat() - q.mat() * s.mat()).norm();
    Ok(comm <= tol::scaled(tolerance, q.frobenius_norm()))
}

/// Decomposability test: is the state a wedge of degree-1 vectors?
///
/// * `N = d`: the top exterior power is one-dimensional, so every state is
///   decomposable.
/// * `N = 2`: equivalent to Slater rank 1.
/// * `N > 2`: Plücker-style contraction criterion: `ψ` is decomposable iff
///   `(e_j ⌟ ψ) ∧ ψ` vanishes for every basis covector `e_j`.
pub fn is_decomposable(psi: &FermionState) -> Result<bool> {
    if psi.is_zero() {
        return Err(Error::ZeroState);
    }
    let d = psi.single_dim();
    let n = psi.n_particles();
    if n == d || n == 1 {
        return Ok(true);
    }
    if n == 2 {
        let pair = crate::slater::FermionPairState::from_wedge_terms(psi)?;
        return Ok(crate::slater::slater_rank(&pair)? == 1);
    }
    let threshold = tol::scaled(tol::DEFAULT, psi.norm() * psi.norm());
    for j in 0..d {
        let contracted = psi.contract_basis(j);
        if contracted.is_zero() {
            continue;
        }
        let back = wedge(&contracted, psi)?;
        if back.norm() > threshold {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A subspace of the single-system space, carried as an ordered orthonormal
/// basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Ket>,
}

impl Subspace {
    /// Validates pairwise orthonormality of the basis within `tolerance`.
    pub fn new(ambient_dim: usize, basis: Vec<Ket>, tolerance: f64) -> Result<Self> {
        let mut worst: f64 = 0.0;
        for (i, a) in basis.iter().enumerate() {
            if a.dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    context: "subspace basis",
                    got: a.dim(),
                    expected: ambient_dim,
                });
            }
            for (j, b) in basis.iter().enumerate() {
                let g = a.inner(b)?;
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - c64(target, 0.0)).norm());
            }
        }
        if worst > tolerance {
            return Err(Error::NotOrthonormal { deviation: worst });
        }
        Ok(Self { ambient_dim, basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Ket] {
        &self.basis
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> Operator {
        let mut m = nalgebra::DMatrix::<C64>::zeros(self.ambient_dim, self.ambient_dim);
        for b in &self.basis {
            m += b.vector() * b.vector().adjoint();
        }
        Operator::new(m)
    }

    /// Principal angles (radians, ascending) between two subspaces of the
    /// same ambient space.
    ///
    /// Cosines are the singular values of `B₁†B₂`, but `acos` cannot resolve
    /// angles below `√ε`, so angles in the small regime are taken from the
    /// sine characterization `‖(1 − P₁)B₂‖` instead (Björck–Golub hybrid).
    pub fn principal_angles(&self, other: &Subspace) -> Result<Vec<f64>> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                context: "principal angles",
                got: other.ambient_dim,
                expected: self.ambient_dim,
            });
        }
        let k = self.dim().min(other.dim());
        let b1 = nalgebra::DMatrix::from_columns(
            &self.basis.iter().map(|b| b.vector().clone()).collect::<Vec<_>>(),
        );
        let b2 = nalgebra::DMatrix::from_columns(
            &other.basis.iter().map(|b| b.vector().clone()).collect::<Vec<_>>(),
        );
        let g = b1.adjoint() * &b2;
        let mut cosines = Operator::new(g.clone()).svd()?.singular_values;
        cosines.truncate(k);

        let residual = &b2 - &b1 * &g; // (1 − P₁) B₂
        let mut sines = Operator::new(residual).svd()?.singular_values;
        sines.sort_by(|a, b| a.total_cmp(b));
        sines.truncate(k);

        let angles: Vec<f64> = cosines
            .iter()
            .zip(&sines)
            .map(|(&c, &s)| {
                if c * c > 0.5 {
                    s.clamp(-1.0, 1.0).asin()
                } else {
                    c.clamp(-1.0, 1.0).acos()
                }
            })
            .collect();
        Ok(angles)
    }
}

/// The span of a decomposable state's degree-1 factors.
///
/// Computed basis-independently as the span of all iterated single-index
/// contractions of `ψ` down to degree 1, then orthonormalized. Rejects
/// non-decomposable input.
pub fn support_subspace(psi: &FermionState) -> Result<Subspace> {
    if !is_decomposable(psi)? {
        return Err(Error::NotDecomposable);
    }
    let d = psi.single_dim();
    let n = psi.n_particles();
    let mut columns: Vec<DVector<C64>> = Vec::new();
    for subset in combinations(d, n - 1) {
        let mut state = psi.clone();
        for &j in &subset {
            state = state.contract_basis(j);
        }
        if state.is_zero() {
            continue;
        }
        let ket = state.as_ket()?;
        if ket.norm() > 1e-12 {
            columns.push(ket.vector().clone());
        }
    }
    if columns.is_empty() {
        return Err(Error::ZeroState);
    }
    let m = Operator::new(nalgebra::DMatrix::from_columns(&columns));
    let svd = m.svd()?;
    let smax = svd.singular_values.first().copied().unwrap_or(0.0);
    let mut basis = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > tol::scaled(tol::DEFAULT, smax) {
            basis.push(svd.u.column(k));
        }
    }
    if basis.len() != n {
        return Err(Error::DecompositionFailed(format!(
            "support subspace has dimension {}, expected {n}",
            basis.len()
        )));
    }
    Subspace::new(d, basis, tol::DEFAULT)
}

/// Compare two states up to a global phase. On success returns the phase
/// `e^{iθ}` with `other ≈ phase · self`.
pub fn phase_between(reference: &FermionState, other: &FermionState, tolerance: f64) -> Option<C64> {
    let overlap = reference.inner(other).ok()?;
    let na = reference.norm();
    let nb = other.norm();
    if na <= f64::EPSILON || nb <= f64::EPSILON {
        return None;
    }
    if (overlap.norm() - na * nb).abs() <= tol::scaled(tolerance, na * nb) {
        Some(overlap / c64(overlap.norm(), 0.0))
    } else {
        None
    }
}

/// All permutations of `0..n` with their signs (parity of inversion count).
pub fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, f64)> {
    let mut out = Vec::with_capacity(factorial_usize(n));
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    build_permutations(n, &mut current, &mut used, &mut out);
    out
}

fn build_permutations(
    n: usize,
    current: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<(Vec<usize>, f64)>,
) {
    if current.len() == n {
        out.push((current.clone(), inversion_parity(current)));
        return;
    }
    for v in 0..n {
        if !used[v] {
            used[v] = true;
            current.push(v);
            build_permutations(n, current, used, out);
            current.pop();
            used[v] = false;
        }
    }
}

fn inversion_parity(perm: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn is_permutation(perm: &[usize]) -> bool {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

/// Strictly increasing `k`-subsets of `0..n`, lexicographic.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // advance
        let mut slot = k;
        loop {
            if slot == 0 {
                return out;
            }
            slot -= 1;
            if current[slot] < n - (k - slot) {
                current[slot] += 1;
                for s in (slot + 1)..k {
                    current[s] = current[s - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Sort indices ascending, tracking the permutation sign; `None` when an
/// index repeats (the monomial vanishes).
fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut v = indices.to_vec();
    let mut sign = 1.0;
    // insertion sort, counting swaps
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn factorial_usize(n: usize) -> usize {
    (1..=n).product()
}
