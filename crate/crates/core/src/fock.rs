//! Truncated two-mode Fock space: basis bookkeeping, boson operator matrices
//! built from Kronecker products, and state constructors.
//!
//! Joint basis states |m⟩_a ⊗ |n⟩_b are flattened mode-a-major: the amplitude
//! of |m,n⟩ sits at index `m * dim_b + n`, listing c_{0,0}, c_{0,1}, ...,
//! c_{0,dim_b-1}, c_{1,0}, ... in order.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Norm tolerance enforced on state vectors at construction.
pub const NORM_TOL: f64 = 1e-10;

/// Per-mode truncation dimensions of the joint Fock basis.
///
/// Each mode keeps levels 0..dim-1. Both dimensions must be at least 2 so a
/// qubit subspace exists in each mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBasis {
    dim_a: usize,
    dim_b: usize,
}

impl FockBasis {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        for dim in [dim_a, dim_b] {
            if dim < 2 {
                return Err(Error::DimensionTooSmall { min: 2, got: dim });
            }
        }
        Ok(Self { dim_a, dim_b })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// Joint dimension `dim_a * dim_b`.
    pub fn joint_dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    /// Flat index of |m,n⟩.
    pub fn flat_index(&self, m: usize, n: usize) -> usize {
        m * self.dim_b + n
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn unflatten(&self, index: usize) -> (usize, usize) {
        (index / self.dim_b, index % self.dim_b)
    }

    pub fn contains(&self, m: usize, n: usize) -> bool {
        m < self.dim_a && n < self.dim_b
    }

    /// Iterate over all (m, n) labels in flat-index order.
    pub fn labels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.dim_a).flat_map(move |m| (0..self.dim_b).map(move |n| (m, n)))
    }
}

/// Normalized complex amplitude vector over a joint Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: FockBasis,
    amplitudes: Array1<C64>,
}

impl StateVector {
    /// Wrap an amplitude vector, checking length and unit norm (within
    /// [`NORM_TOL`]).
    pub fn new(basis: FockBasis, amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.len() != basis.joint_dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.joint_dim(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let deviation = (norm - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::NotNormalized {
                deviation,
                tol: NORM_TOL,
            });
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn basis(&self) -> FockBasis {
        self.basis
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, m: usize, n: usize) -> Result<C64> {
        if !self.basis.contains(m, n) {
            return Err(Error::LabelOutOfRange {
                m,
                n,
                dim_a: self.basis.dim_a,
                dim_b: self.basis.dim_b,
            });
        }
        Ok(self.amplitudes[self.basis.flat_index(m, n)])
    }

    /// |c_{m,n}|².
    pub fn probability(&self, m: usize, n: usize) -> Result<f64> {
        Ok(self.amplitude(m, n)?.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Dense complex square matrix over a joint Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct JointOperator {
    basis: FockBasis,
    matrix: Array2<C64>,
}

impl JointOperator {
    pub fn new(basis: FockBasis, matrix: Array2<C64>) -> Result<Self> {
        let d = basis.joint_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { basis, matrix })
    }

    pub fn basis(&self) -> FockBasis {
        self.basis
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.matrix
    }

    /// Max entrywise deviation from the conjugate transpose.
    pub fn hermiticity_deviation(&self) -> f64 {
        let m = &self.matrix;
        let mut max = 0.0f64;
        for i in 0..m.nrows() {
            for j in i..m.ncols() {
                max = max.max((m[[i, j]] - m[[j, i]].conj()).norm());
            }
        }
        max
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Max entrywise deviation of M†M from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let m = &self.matrix;
        let prod = m.t().mapv(|c| c.conj()).dot(m);
        let mut max = 0.0f64;
        for ((i, j), v) in prod.indexed_iter() {
            let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            max = max.max((v - target).norm());
        }
        max
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Apply the operator to a state, returning the raw amplitude vector
    /// (no norm check; callers that need a `StateVector` rewrap it).
    pub fn apply_raw(&self, psi: &StateVector) -> Result<Array1<C64>> {
        if psi.basis() != self.basis {
            return Err(Error::DimensionMismatch {
                expected: self.basis.joint_dim(),
                got: psi.basis().joint_dim(),
            });
        }
        Ok(self.matrix.dot(psi.amplitudes()))
    }
}

/// Single-mode annihilation matrix: entry (k, k+1) = √(k+1) for
/// k = 0..dim-2, everything else zero.
pub fn single_mode_annihilation(dim: usize) -> Result<Array2<C64>> {
    if dim == 0 {
        return Err(Error::DimensionTooSmall { min: 1, got: 0 });
    }
    let mut a = Array2::zeros((dim, dim));
    for k in 0..dim.saturating_sub(1) {
        a[[k, k + 1]] = C64::new(((k + 1) as f64).sqrt(), 0.0);
    }
    Ok(a)
}

/// Kronecker product; block (i, j) of the result equals `a[i,j] * b`.
pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    assert!(
        a.nrows() > 0 && a.ncols() > 0 && b.nrows() > 0 && b.ncols() > 0,
        "kron factors must be non-empty"
    );
    ndarray::linalg::kron(a, b)
}

fn identity(dim: usize) -> Array2<C64> {
    Array2::from_diag_elem(dim, C64::new(1.0, 0.0))
}

/// Mode-a annihilation on the joint basis: a ⊗ I, mapping |m,n⟩ ↦ √m |m-1,n⟩.
pub fn mode_a_annihilation(basis: FockBasis) -> JointOperator {
    let a = single_mode_annihilation(basis.dim_a()).expect("basis dims are >= 2");
    JointOperator {
        basis,
        matrix: kron(&a, &identity(basis.dim_b())),
    }
}

/// Mode-b annihilation on the joint basis: I ⊗ b, mapping |m,n⟩ ↦ √n |m,n-1⟩.
pub fn mode_b_annihilation(basis: FockBasis) -> JointOperator {
    let b = single_mode_annihilation(basis.dim_b()).expect("basis dims are >= 2");
    JointOperator {
        basis,
        matrix: kron(&identity(basis.dim_a()), &b),
    }
}

/// Conjugate transpose. The creation operators are daggers of the
/// annihilation operators.
pub fn dagger(op: &JointOperator) -> JointOperator {
    JointOperator {
        basis: op.basis,
        matrix: op.matrix.t().mapv(|c| c.conj()),
    }
}

/// |0⟩_a ⊗ |0⟩_b: amplitude 1 at flat index 0.
pub fn vacuum_state(basis: FockBasis) -> StateVector {
    let mut amplitudes = Array1::zeros(basis.joint_dim());
    amplitudes[0] = C64::new(1.0, 0.0);
    StateVector { basis, amplitudes }
}

/// Truncated single-mode coherent state.
///
/// `amplitudes` holds exp(-|α|²/2) αⁿ/√n! for n = 0..dim-1, renormalized to
/// unit norm so downstream state construction never trips the norm invariant.
/// `deficit` reports how much weight the truncation cut off the infinite
/// series, measured before renormalization.
#[derive(Debug, Clone)]
pub struct CoherentState {
    pub amplitudes: Array1<C64>,
    pub deficit: f64,
}

/// Coherent-state amplitudes of complex `alpha` truncated to `dim` levels.
pub fn coherent_state(alpha: C64, dim: usize) -> Result<CoherentState> {
    if dim == 0 {
        return Err(Error::DimensionTooSmall { min: 1, got: 0 });
    }
    let prefactor = (-alpha.norm_sqr() / 2.0).exp();
    let mut amplitudes = Array1::zeros(dim);
    // term n = prefactor * alpha^n / sqrt(n!), built up recursively
    let mut term = C64::new(prefactor, 0.0);
    amplitudes[0] = term;
    for n in 1..dim {
        term = term * alpha / (n as f64).sqrt();
        amplitudes[n] = term;
    }
    let captured: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
    let deficit = 1.0 - captured;
    let norm = captured.sqrt();
    amplitudes.mapv_inplace(|c| c / norm);
    Ok(CoherentState {
        amplitudes,
        deficit,
    })
}

impl CoherentState {
    /// Tensor with the mode-b vacuum to get a joint initial state whose
    /// mode-a factor is this coherent state.
    pub fn tensor_with_vacuum(&self, basis: FockBasis) -> Result<StateVector> {
        if self.amplitudes.len() != basis.dim_a() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim_a(),
                got: self.amplitudes.len(),
            });
        }
        let mut amplitudes = Array1::zeros(basis.joint_dim());
        for (m, c) in self.amplitudes.iter().enumerate() {
            amplitudes[basis.flat_index(m, 0)] = *c;
        }
        StateVector::new(basis, amplitudes)
    }
}
