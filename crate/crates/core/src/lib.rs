//! Simulation of a pulsed two-mode Kerr nonlinear coupler in a truncated
//! Fock basis.
//!
//! The library builds the coupler Hamiltonian and the kick generator as
//! dense complex matrices over the joint Fock basis, exponentiates them by
//! Hermitian eigendecomposition into the free-flight and kick unitaries, and
//! iterates the composed per-kick map stroboscopically. Diagnostics reduce
//! each post-kick state to tracked-state probabilities, truncation leakage,
//! Bell-state fidelities, and entanglement entropy.
//!
//! Layout mirrors the pipeline:
//!
//! - [`fock`]: basis bookkeeping, boson operator matrices, state
//!   constructors;
//! - [`hamiltonian`]: the coupler Hamiltonian and the kick generator;
//! - [`propagator`]: matrix exponentials, the per-kick map, the kick loop;
//! - [`diagnostics`]: per-kick observables and crossing events.

pub mod diagnostics;
pub mod error;
pub mod fock;
pub mod hamiltonian;
pub mod propagator;

pub use diagnostics::{
    bell_fidelities, detect_events, entanglement_entropy, leakage, probabilities,
    CrossingEvent, EventKind, KickRecord, KickTrajectory, TrackedSet,
};
pub use error::{Error, Result};
pub use fock::{
    coherent_state, dagger, kron, mode_a_annihilation, mode_b_annihilation,
    single_mode_annihilation, vacuum_state, CoherentState, FockBasis, JointOperator,
    StateVector,
};
pub use hamiltonian::{build_h_nl, build_kick_generator, CouplerConfig};
pub use propagator::{
    build_u_k, build_u_nl, expm_hermitian_scaled, run_kicks, scan_kicks, Propagators,
};
