//! Coupler Hamiltonian and kick generator, assembled from the truncated
//! boson operator matrices.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{self, FockBasis, JointOperator};

/// Physical parameters and run controls for a kicked-coupler simulation.
///
/// All strengths are expressed in units of the nonlinearity constants; no
/// unit conversion happens anywhere downstream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerConfig {
    /// Mode-a Kerr nonlinearity.
    pub chi_a: f64,
    /// Mode-b Kerr nonlinearity.
    pub chi_b: f64,
    /// Cross-coupling strength.
    pub chi_ab: f64,
    /// Linear inter-mode coupling strength.
    pub epsilon: C64,
    /// Kick strength.
    pub alpha: C64,
    /// Time between two subsequent pulses.
    pub t: f64,
    pub dim_a: usize,
    pub dim_b: usize,
    /// Number of pulses to simulate.
    pub n_kicks: usize,
}

impl CouplerConfig {
    /// Check the run-control invariants: positive inter-pulse interval, at
    /// least one kick, and qubit-capable dimensions.
    pub fn validate(&self) -> Result<()> {
        if !self.t.is_finite() || self.t <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "inter-pulse interval T must be positive, got {}",
                self.t
            )));
        }
        if self.n_kicks < 1 {
            return Err(Error::InvalidParameter(
                "n_kicks must be at least 1".into(),
            ));
        }
        self.basis().map(|_| ())
    }

    pub fn basis(&self) -> Result<FockBasis> {
        FockBasis::new(self.dim_a, self.dim_b)
    }

    fn check_basis(&self, basis: FockBasis) -> Result<()> {
        if basis.dim_a() != self.dim_a || basis.dim_b() != self.dim_b {
            return Err(Error::DimensionMismatch {
                expected: self.dim_a * self.dim_b,
                got: basis.joint_dim(),
            });
        }
        Ok(())
    }
}

/// Free-evolution Hamiltonian of the coupler:
///
/// ```text
/// H = chi_a/2 (a†)²a² + chi_b/2 (b†)²b² + eps a†b + eps* a b† + chi_ab a†a b†b
/// ```
///
/// Diagonal at |m,n⟩: chi_a/2 m(m-1) + chi_b/2 n(n-1) + chi_ab m n; the
/// eps terms contribute ⟨m+1,n-1|H|m,n⟩ = eps √(m+1)√n and conjugates, so
/// the matrix is diagonal exactly when eps = 0.
pub fn build_h_nl(cfg: &CouplerConfig, basis: FockBasis) -> Result<JointOperator> {
    cfg.check_basis(basis)?;
    let a = fock::mode_a_annihilation(basis);
    let b = fock::mode_b_annihilation(basis);
    let ad = fock::dagger(&a);
    let bd = fock::dagger(&b);

    let (a, b, ad, bd) = (a.matrix(), b.matrix(), ad.matrix(), bd.matrix());
    let kerr_a = ad.dot(ad).dot(a).dot(a);
    let kerr_b = bd.dot(bd).dot(b).dot(b);
    let exchange = ad.dot(b);
    let cross = ad.dot(a).dot(&bd.dot(b));

    let half = C64::new(0.5, 0.0);
    let h: Array2<C64> = kerr_a * (half * cfg.chi_a)
        + kerr_b * (half * cfg.chi_b)
        + &exchange * cfg.epsilon
        + exchange.t().mapv(|v| v.conj()) * cfg.epsilon.conj()
        + cross * C64::new(cfg.chi_ab, 0.0);
    JointOperator::new(basis, h)
}

/// Generator of a single kick: alpha a† + alpha* a, acting on mode a only.
///
/// The pulse train itself is realized by the kick loop in the propagator;
/// this is just the Hermitian operator inside each exponential.
pub fn build_kick_generator(cfg: &CouplerConfig, basis: FockBasis) -> Result<JointOperator> {
    cfg.check_basis(basis)?;
    let a = fock::mode_a_annihilation(basis);
    let ad = fock::dagger(&a);
    let g = ad.matrix() * cfg.alpha + a.matrix() * cfg.alpha.conj();
    JointOperator::new(basis, g)
}
