//! Complex linear-algebra substrate.
//!
//! Thin, validated wrappers around dense complex vectors and matrices, plus
//! the handful of factorizations everything downstream consumes. Hermiticity,
//! unitarity and projector status are checked by predicate, never carried as
//! an unverified flag.
//!
//! Basis ordering convention for joint (two-factor) objects: row index is the
//! first factor, column index is the second, and the flattened product-basis
//! index is `i * d + j`. [`Operator::kron`] uses the matching block ordering,
//! so `kron(A, B)` applied to the flattening of `x ⊗ y` equals the flattening
//! of `Ax ⊗ By`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::tol;
use crate::Result;

/// Complex scalar used throughout.
pub type C64 = Complex64;

/// Shorthand constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A single-system state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: DVector<C64>,
}

impl Ket {
    /// Wrap raw amplitudes. Rejects the empty vector.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Invalid("ket must have dimension >= 1".into()));
        }
        Ok(Self {
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    pub fn from_vector(amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Invalid("ket must have dimension >= 1".into()));
        }
        Ok(Self { amplitudes })
    }

    /// The `k`-th standard basis vector in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dim {dim}");
        let mut v = DVector::zeros(dim);
        v[k] = c64(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn vector(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// True when the squared-amplitude sum is 1 within `tolerance`.
    pub fn is_normalized(&self, tolerance: f64) -> bool {
        (self.norm() - 1.0).abs() <= tolerance
    }

    /// Rescale to unit norm. Fails on (numerically) zero input.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= f64::EPSILON {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            amplitudes: &self.amplitudes / c64(n, 0.0),
        })
    }

    /// Sesquilinear inner product `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Ket) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context: "inner product",
                got: other.dim(),
                expected: self.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Tensor product: `amplitudes[i][j] = self_i * other_j`.
    pub fn tensor(&self, other: &Ket) -> JointKet {
        let m = &self.amplitudes * other.amplitudes.transpose();
        JointKet { amplitudes: m }
    }

    /// Rank-one operator `|self⟩⟨other|`.
    pub fn outer(&self, other: &Ket) -> Operator {
        Operator {
            mat: &self.amplitudes * other.amplitudes.adjoint(),
        }
    }
}

/// A joint state of two factors over a shared single-system dimension `d`,
/// stored as the `d × d` matrix of product-basis coefficients.
///
/// Antisymmetry is *not* enforced here; see
/// [`crate::slater::FermionPairState`] for the fermionic refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct JointKet {
    amplitudes: DMatrix<C64>,
}

impl JointKet {
    pub fn new(amplitudes: DMatrix<C64>) -> Result<Self> {
        if amplitudes.nrows() != amplitudes.ncols() {
            return Err(Error::NotSquare {
                rows: amplitudes.nrows(),
                cols: amplitudes.ncols(),
            });
        }
        if amplitudes.nrows() == 0 {
            return Err(Error::Invalid("joint ket must have dimension >= 1".into()));
        }
        Ok(Self { amplitudes })
    }

    pub fn single_dim(&self) -> usize {
        self.amplitudes.nrows()
    }

    pub fn amplitudes(&self) -> &DMatrix<C64> {
        &self.amplitudes
    }

    /// Frobenius norm of the coefficient matrix (= vector norm of the state).
    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn is_normalized(&self, tolerance: f64) -> bool {
        (self.norm() - 1.0).abs() <= tolerance
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= f64::EPSILON {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            amplitudes: &self.amplitudes / c64(n, 0.0),
        })
    }

    /// Flatten to the product-basis vector with index `i * d + j`.
    pub fn flatten(&self) -> DVector<C64> {
        let d = self.single_dim();
        DVector::from_fn(d * d, |k, _| self.amplitudes[(k / d, k % d)])
    }

    /// Inverse of [`flatten`](Self::flatten).
    pub fn from_flat(d: usize, v: &DVector<C64>) -> Result<Self> {
        if v.len() != d * d {
            return Err(Error::DimensionMismatch {
                context: "joint ket from flat vector",
                got: v.len(),
                expected: d * d,
            });
        }
        Ok(Self {
            amplitudes: DMatrix::from_fn(d, d, |i, j| v[i * d + j]),
        })
    }

    /// `⟨self|other⟩` over the product basis.
    pub fn inner(&self, other: &JointKet) -> Result<C64> {
        if self.single_dim() != other.single_dim() {
            return Err(Error::DimensionMismatch {
                context: "joint inner product",
                got: other.single_dim(),
                expected: self.single_dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Apply `X ⊗ Y`: the coefficient matrix maps to `X · M · Yᵀ`.
    pub fn apply_factorwise(&self, x: &Operator, y: &Operator) -> Result<JointKet> {
        let d = self.single_dim();
        if x.dim_in() != d || y.dim_in() != d {
            return Err(Error::DimensionMismatch {
                context: "factorwise application",
                got: x.dim_in().max(y.dim_in()),
                expected: d,
            });
        }
        Ok(JointKet {
            amplitudes: x.mat() * &self.amplitudes * y.mat().transpose(),
        })
    }
}

/// A dense complex operator (matrix), possibly rectangular.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
}

impl Operator {
    pub fn new(mat: DMatrix<C64>) -> Self {
        Self { mat }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            mat: DMatrix::zeros(rows, cols),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        Self {
            mat: DMatrix::from_fn(rows, cols, f),
        }
    }

    pub fn mat(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn dim_out(&self) -> usize {
        self.mat.nrows()
    }

    pub fn dim_in(&self) -> usize {
        self.mat.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.mat.is_square()
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            mat: self.mat.adjoint(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn mul(&self, other: &Operator) -> Result<Operator> {
        if self.dim_in() != other.dim_out() {
            return Err(Error::DimensionMismatch {
                context: "operator product",
                got: other.dim_out(),
                expected: self.dim_in(),
            });
        }
        Ok(Operator {
            mat: &self.mat * &other.mat,
        })
    }

    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        if self.dim_in() != ket.dim() {
            return Err(Error::DimensionMismatch {
                context: "operator application",
                got: ket.dim(),
                expected: self.dim_in(),
            });
        }
        Ok(Ket {
            amplitudes: &self.mat * ket.vector(),
        })
    }

    /// `⟨x|self|y⟩`.
    pub fn expectation(&self, x: &Ket, y: &Ket) -> Result<C64> {
        x.inner(&self.apply(y)?)
    }

    /// Kronecker product with block ordering matching [`Ket::tensor`]:
    /// entry `((i,k),(j,l))` of the result is `self[i,j] * other[k,l]` at flat
    /// position `(i*db + k, j*db + l)`.
    pub fn kron(&self, other: &Operator) -> Result<Operator> {
        if !self.is_square() || !other.is_square() {
            return Err(Error::NotSquare {
                rows: self.dim_out().max(other.dim_out()),
                cols: self.dim_in().max(other.dim_in()),
            });
        }
        Ok(Operator {
            mat: self.mat.kronecker(&other.mat),
        })
    }

    /// Deviation from Hermiticity, `‖M − M†‖`.
    pub fn hermiticity_deviation(&self) -> f64 {
        (&self.mat - self.mat.adjoint()).norm()
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.is_square()
            && self.hermiticity_deviation() <= tol::scaled(tolerance, self.frobenius_norm())
    }

    /// Deviation from unitarity, `‖M†M − 1‖`.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let d = self.dim_in();
        (self.mat.adjoint() * &self.mat - DMatrix::<C64>::identity(d, d)).norm()
    }

    pub fn is_unitary(&self, tolerance: f64) -> bool {
        self.unitarity_deviation() <= tolerance * (self.dim_in().max(1) as f64).sqrt()
    }

    /// Deviation from being an orthogonal projector, `‖M² − M‖ + ‖M − M†‖`.
    pub fn projector_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.mat * &self.mat - &self.mat).norm() + self.hermiticity_deviation()
    }

    pub fn is_projector(&self, tolerance: f64) -> bool {
        self.projector_deviation() <= tol::scaled(tolerance, self.frobenius_norm())
    }

    /// Numerical rank at relative tolerance `tolerance` (via singular values).
    pub fn rank(&self, tolerance: f64) -> Result<usize> {
        let s = self.svd()?.singular_values;
        let cutoff = tolerance * s.first().copied().unwrap_or(0.0).max(f64::EPSILON);
        Ok(s.iter().filter(|&&x| x > cutoff).count())
    }

    /// Trace (square operators).
    pub fn trace(&self) -> C64 {
        self.mat.diagonal().sum()
    }

    /// Singular value decomposition `M = U · diag(s) · V†` (thin), with `s`
    /// descending. The result is verified against the input; failure is
    /// reported, never silent.
    ///
    /// Implemented through the Hermitian eigendecomposition of `M†M` with
    /// the singular values re-measured as `‖Mv‖`. Bidiagonalization-based
    /// complex SVDs lose accuracy on coincident singular values, which are
    /// the generic case for the antisymmetric matrices handled here; the
    /// Gram route keeps degenerate pairs exact, and re-measuring `‖Mv‖`
    /// restores full absolute accuracy near zero.
    pub fn svd(&self) -> Result<Svd> {
        let m = self.dim_out();
        let n = self.dim_in();
        if n > m {
            // work on the adjoint so the Gram matrix stays small
            let swapped = self.adjoint().svd()?;
            return Ok(Svd {
                u: swapped.v,
                singular_values: swapped.singular_values,
                v: swapped.u,
            });
        }
        let k = n;
        let gram = self.mat.adjoint() * &self.mat;
        let eig = nalgebra::SymmetricEigen::new(gram);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

        let mut triples: Vec<(f64, Option<DVector<C64>>, DVector<C64>)> = Vec::with_capacity(k);
        let mut s_max: f64 = 0.0;
        for &idx in &order {
            let v: DVector<C64> = eig.eigenvectors.column(idx).into_owned();
            let mv = &self.mat * &v;
            let s = mv.norm();
            s_max = s_max.max(s);
            triples.push((s, Some(mv), v));
        }
        triples.sort_by(|a, b| b.0.total_cmp(&a.0));

        let floor = (f64::EPSILON * s_max * (m.max(1) as f64)).max(f64::MIN_POSITIVE);
        let mut u_columns: Vec<Option<DVector<C64>>> = Vec::with_capacity(k);
        let mut values = Vec::with_capacity(k);
        let mut v_columns = Vec::with_capacity(k);
        for (s, mv, v) in triples {
            values.push(s);
            v_columns.push(v);
            if s > floor {
                u_columns.push(Some(mv.expect("cached product") / c64(s, 0.0)));
            } else {
                u_columns.push(None);
            }
        }
        complete_unitary_columns(&mut u_columns, m);
        let u_mat = DMatrix::from_columns(
            &u_columns
                .into_iter()
                .map(|c| c.expect("completed"))
                .collect::<Vec<_>>(),
        );
        let v_mat = DMatrix::from_columns(&v_columns);
        let svd = Svd {
            u: Operator::new(u_mat),
            singular_values: values,
            v: Operator::new(v_mat),
        };
        let scale = self.frobenius_norm().max(1.0);
        let err = (&self.mat - svd.recompose().mat()).norm();
        if err > 1e-10 * scale {
            return Err(Error::SvdFailed);
        }
        Ok(svd)
    }

    /// Eigendecomposition of a Hermitian operator: `M = Q diag(λ) Q†` with
    /// real eigenvalues sorted descending.
    pub fn hermitian_eigen(&self, tolerance: f64) -> Result<HermitianEigen> {
        if !self.is_hermitian(tolerance) {
            return Err(Error::PredicateFailed {
                property: "hermitian",
                deviation: self.hermiticity_deviation(),
            });
        }
        let se = nalgebra::SymmetricEigen::new(self.mat.clone());
        let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| se.eigenvalues[b].total_cmp(&se.eigenvalues[a]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
        let d = self.dim_in();
        let vectors = DMatrix::from_fn(d, d, |r, c| se.eigenvectors[(r, order[c])]);
        Ok(HermitianEigen {
            eigenvalues,
            eigenvectors: Operator::new(vectors),
        })
    }

    /// The `k`-th column as a ket.
    pub fn column(&self, k: usize) -> Ket {
        Ket {
            amplitudes: self.mat.column(k).into_owned(),
        }
    }
}

/// Result of [`Operator::svd`].
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Operator,
    /// Nonnegative, descending.
    pub singular_values: Vec<f64>,
    pub v: Operator,
}

impl Svd {
    /// `U · diag(s) · V†`, for reconstruction checks.
    pub fn recompose(&self) -> Operator {
        // Thin factors: u is m×k, v is n×k, with k = number of singular values.
        let k = self.singular_values.len();
        let sigma = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                c64(self.singular_values[i], 0.0)
            } else {
                c64(0.0, 0.0)
            }
        });
        Operator::new(self.u.mat() * sigma * self.v.mat().adjoint())
    }
}

/// Result of [`Operator::hermitian_eigen`].
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Real eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the matching orthonormal eigenvectors.
    pub eigenvectors: Operator,
}

/// Fill the `None` slots with unit vectors orthogonal to every present
/// column, greedily seeded from the canonical basis.
fn complete_unitary_columns(columns: &mut [Option<DVector<C64>>], dim: usize) {
    for slot in 0..columns.len() {
        if columns[slot].is_some() {
            continue;
        }
        let mut best: Option<(f64, DVector<C64>)> = None;
        for seed in 0..dim {
            let mut r = DVector::<C64>::zeros(dim);
            r[seed] = c64(1.0, 0.0);
            for c in columns.iter().flatten() {
                let overlap = c.dotc(&r);
                r -= c * overlap;
            }
            let norm = r.norm();
            if best.as_ref().is_none_or(|(bn, _)| norm > *bn + 1e-12) {
                best = Some((norm, r));
            }
        }
        let (norm, r) = best.expect("dim >= 1");
        columns[slot] = Some(r / c64(norm, 0.0));
    }
}

/// The swap (flip) operator on the two-factor product space, `d² × d²`.
pub fn swap_operator(d: usize) -> Operator {
    Operator::from_fn(d * d, d * d, |r, c| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (c / d, c % d);
        if i == l && j == k {
            c64(1.0, 0.0)
        } else {
            c64(0.0, 0.0)
        }
    })
}

/// Standard-normal sample via Box–Muller, so the stream depends only on the
/// seeded generator and not on any external distribution crate.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// A complex matrix with independent standard-complex-Gaussian entries.
pub fn ginibre_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        c64(standard_normal(rng), standard_normal(rng)) / c64(std::f64::consts::SQRT_2, 0.0)
    })
}

/// Haar-distributed random unitary, deterministic for a fixed seed.
///
/// QR of a complex Ginibre matrix with the triangular factor's diagonal
/// phases folded back into Q, which yields the invariant measure.
pub fn haar_random_unitary(dim: usize, seed: u64) -> Operator {
    assert!(dim >= 1, "dimension must be >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_unitary_from_rng(dim, &mut rng)
}

/// Same as [`haar_random_unitary`] but drawing from a caller-owned stream.
pub fn haar_unitary_from_rng(dim: usize, rng: &mut ChaCha8Rng) -> Operator {
    let g = ginibre_matrix(dim, dim, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() <= f64::EPSILON {
            c64(1.0, 0.0)
        } else {
            rjj / c64(rjj.norm(), 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Operator::new(q)
}
