//! Per-kick observables: Fock probabilities, truncation leakage, Bell-state
//! fidelities, entanglement entropy, and probability-crossing events.

use ndarray::Array2;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, StateVector};
use crate::hamiltonian::CouplerConfig;
use crate::propagator::scan_kicks;

/// Eigenvalues of the reduced density matrix below this floor are treated as
/// exact zeros when accumulating entropy.
const ENTROPY_EIGENVALUE_FLOOR: f64 = 1e-14;

/// The Fock labels whose summed probability defines the truncation subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackedSet {
    labels: Vec<(usize, usize)>,
}

impl TrackedSet {
    /// Arbitrary label set; labels must be distinct.
    pub fn new(labels: Vec<(usize, usize)>) -> Result<Self> {
        for (i, &(m, n)) in labels.iter().enumerate() {
            if labels[..i].contains(&(m, n)) {
                return Err(Error::DuplicateLabel(m, n));
            }
        }
        Ok(Self { labels })
    }

    /// {(0,0), (0,1), (1,0)}: the closure subspace with cross-coupling on.
    pub fn three_state() -> Self {
        Self {
            labels: vec![(0, 0), (0, 1), (1, 0)],
        }
    }

    /// {(0,0), (0,1), (1,0), (1,1)}: the closure subspace with the
    /// cross-coupling term switched off.
    pub fn four_state() -> Self {
        Self {
            labels: vec![(0, 0), (0, 1), (1, 0), (1, 1)],
        }
    }

    /// Every label of the basis; leakage against this set is identically
    /// zero up to roundoff.
    pub fn full(basis: FockBasis) -> Self {
        Self {
            labels: basis.labels().collect(),
        }
    }

    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn check_within(&self, basis: FockBasis) -> Result<()> {
        for &(m, n) in &self.labels {
            if !basis.contains(m, n) {
                return Err(Error::LabelOutOfRange {
                    m,
                    n,
                    dim_a: basis.dim_a(),
                    dim_b: basis.dim_b(),
                });
            }
        }
        Ok(())
    }
}

/// |c_{m,n}|² for every tracked label, in the set's order.
pub fn probabilities(
    psi: &StateVector,
    set: &TrackedSet,
) -> Result<Vec<((usize, usize), f64)>> {
    set.check_within(psi.basis())?;
    set.labels()
        .iter()
        .map(|&(m, n)| Ok(((m, n), psi.probability(m, n)?)))
        .collect()
}

/// 1 minus the summed probability of the tracked labels; negative only by
/// roundoff.
pub fn leakage(psi: &StateVector, set: &TrackedSet) -> Result<f64> {
    let total: f64 = probabilities(psi, set)?.iter().map(|(_, p)| p).sum();
    Ok(1.0 - total)
}

/// Fidelities |⟨B|ψ⟩|² against the two orthogonal one-photon Bell states
///
/// ```text
/// B1 = (|0,1⟩ + i|1,0⟩)/√2      B2 = (|1,0⟩ + i|0,1⟩)/√2
/// ```
///
/// Fidelity is phase-convention sensitive, so both partners are reported;
/// crossings alternate between them along a run.
pub fn bell_fidelities(psi: &StateVector) -> (f64, f64) {
    let c01 = psi.amplitude(0, 1).expect("basis has at least 2x2 levels");
    let c10 = psi.amplitude(1, 0).expect("basis has at least 2x2 levels");
    let overlap_b1 = (c01 - C64::i() * c10) / 2f64.sqrt();
    let overlap_b2 = (c10 - C64::i() * c01) / 2f64.sqrt();
    (overlap_b1.norm_sqr(), overlap_b2.norm_sqr())
}

/// Von Neumann entropy (base-2) of the mode-a reduced density matrix.
///
/// Zero for product states; 1 bit for a maximally entangled state confined
/// to the two-qubit subspace.
pub fn entanglement_entropy(psi: &StateVector) -> Result<f64> {
    let basis = psi.basis();
    let (dim_a, dim_b) = (basis.dim_a(), basis.dim_b());
    // rho_a[m, m'] = sum_n c_{m,n} conj(c_{m',n})
    let mut rho = Array2::<C64>::zeros((dim_a, dim_a));
    for m in 0..dim_a {
        for mp in 0..=m {
            let mut acc = C64::new(0.0, 0.0);
            for n in 0..dim_b {
                let x = psi.amplitudes()[basis.flat_index(m, n)];
                let y = psi.amplitudes()[basis.flat_index(mp, n)];
                acc += x * y.conj();
            }
            rho[[m, mp]] = acc;
            rho[[mp, m]] = acc.conj();
        }
    }
    let (eigenvalues, _) = rho.eigh(UPLO::Lower)?;
    let entropy: f64 = eigenvalues
        .iter()
        .filter(|&&p| p > ENTROPY_EIGENVALUE_FLOOR)
        .map(|&p| -p * p.log2())
        .sum();
    // roundoff on near-pure spectra can land at -0.0 or a hair below
    Ok(entropy.max(0.0))
}

/// One row of a stroboscopic trajectory.
#[derive(Debug, Clone)]
pub struct KickRecord {
    /// Kick index; 0 is the initial state.
    pub kick: usize,
    /// Elapsed time `kick * T`, in units of the inverse nonlinearity.
    pub time: f64,
    /// Probabilities of |0,0⟩, |0,1⟩, |1,0⟩, |1,1⟩ in that order, reported
    /// for every run regardless of the tracked set.
    pub qubit_probs: [f64; 4],
    /// Probability per tracked label, aligned with the tracked set's order.
    pub tracked_probs: Vec<f64>,
    pub leakage: f64,
    pub fidelity_b1: f64,
    pub fidelity_b2: f64,
    /// Entanglement entropy in bits.
    pub entropy: f64,
    /// | ‖ψ‖ − 1 |.
    pub norm_error: f64,
}

impl KickRecord {
    /// Probability of |m,n⟩ for the qubit labels m, n ∈ {0, 1}.
    pub fn qubit_prob(&self, m: usize, n: usize) -> f64 {
        self.qubit_probs[2 * m + n]
    }
}

/// Diagnostics for a whole run, one record per kick (plus the initial state).
#[derive(Debug, Clone)]
pub struct KickTrajectory {
    tracked: TrackedSet,
    records: Vec<KickRecord>,
}

impl KickTrajectory {
    /// Run the kick loop and reduce each state to its record on the fly;
    /// states are not retained.
    pub fn compute(
        cfg: &CouplerConfig,
        basis: FockBasis,
        tracked: &TrackedSet,
        psi0: &StateVector,
    ) -> Result<Self> {
        tracked.check_within(basis)?;
        let mut records = Vec::with_capacity(cfg.n_kicks + 1);
        let mut failure: Option<Error> = None;
        scan_kicks(cfg, basis, psi0, |k, psi| {
            if failure.is_some() {
                return;
            }
            match Self::record(cfg, tracked, k, psi) {
                Ok(record) => records.push(record),
                Err(e) => failure = Some(e),
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(Self {
            tracked: tracked.clone(),
            records,
        })
    }

    fn record(
        cfg: &CouplerConfig,
        tracked: &TrackedSet,
        kick: usize,
        psi: &StateVector,
    ) -> Result<KickRecord> {
        let mut qubit_probs = [0.0; 4];
        for m in 0..2 {
            for n in 0..2 {
                qubit_probs[2 * m + n] = psi.probability(m, n)?;
            }
        }
        let tracked_probs: Vec<f64> = probabilities(psi, tracked)?
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        let leakage = 1.0 - tracked_probs.iter().sum::<f64>();
        let (fidelity_b1, fidelity_b2) = bell_fidelities(psi);
        let entropy = entanglement_entropy(psi)?;
        Ok(KickRecord {
            kick,
            time: kick as f64 * cfg.t,
            qubit_probs,
            tracked_probs,
            leakage,
            fidelity_b1,
            fidelity_b2,
            entropy,
            norm_error: (psi.norm() - 1.0).abs(),
        })
    }

    pub fn tracked(&self) -> &TrackedSet {
        &self.tracked
    }

    pub fn records(&self) -> &[KickRecord] {
        &self.records
    }

    pub fn max_leakage(&self) -> f64 {
        self.records.iter().map(|r| r.leakage).fold(0.0, f64::max)
    }

    pub fn mean_leakage(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        self.records.iter().map(|r| r.leakage).sum::<f64>() / self.records.len() as f64
    }

    pub fn max_fidelity_b1(&self) -> f64 {
        self.records.iter().map(|r| r.fidelity_b1).fold(0.0, f64::max)
    }

    pub fn max_fidelity_b2(&self) -> f64 {
        self.records.iter().map(|r| r.fidelity_b2).fold(0.0, f64::max)
    }

    pub fn max_norm_error(&self) -> f64 {
        self.records.iter().map(|r| r.norm_error).fold(0.0, f64::max)
    }
}

/// The probability pairs whose simultaneous passage through 0.5 marks a
/// state-engineering event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// |0,0⟩ and |1,0⟩ both at 0.5: mode a in an equal superposition with
    /// mode b empty, i.e. a product state.
    Separable,
    /// |0,1⟩ and |1,0⟩ both at 0.5: the one-photon Bell pair.
    Bell,
    /// |0,0⟩ and |1,1⟩ both at 0.5: the vacuum/double-excitation Bell pair.
    BellPhi,
    /// |0,1⟩ and |1,1⟩ both at 0.5: mode a in an equal superposition with
    /// one photon in mode b, i.e. a product state.
    SeparableExcited,
}

impl EventKind {
    pub const ALL: [EventKind; 4] = [
        EventKind::Separable,
        EventKind::Bell,
        EventKind::BellPhi,
        EventKind::SeparableExcited,
    ];

    /// The (m, n) labels of the designated pair.
    pub fn pair(&self) -> [(usize, usize); 2] {
        match self {
            EventKind::Separable => [(0, 0), (1, 0)],
            EventKind::Bell => [(0, 1), (1, 0)],
            EventKind::BellPhi => [(0, 0), (1, 1)],
            EventKind::SeparableExcited => [(0, 1), (1, 1)],
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            EventKind::Separable => "separable",
            EventKind::Bell => "bell",
            EventKind::BellPhi => "bell-phi",
            EventKind::SeparableExcited => "separable-excited",
        }
    }
}

/// A kick at which one designated pair sits within tolerance of (0.5, 0.5).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingEvent {
    pub kick: usize,
    pub kind: EventKind,
    /// Probabilities of the pair at the event, in [`EventKind::pair`] order.
    pub pair_probs: [f64; 2],
}

/// Scan a trajectory for kicks where any designated probability pair lies
/// within `tol` of 0.5 on both members. `tol` must be in (0, 0.1].
pub fn detect_events(traj: &KickTrajectory, tol: f64) -> Result<Vec<CrossingEvent>> {
    if !(tol > 0.0 && tol <= 0.1) {
        return Err(Error::InvalidParameter(format!(
            "event tolerance must lie in (0, 0.1], got {tol}"
        )));
    }
    let mut events = Vec::new();
    for record in traj.records() {
        for kind in EventKind::ALL {
            let [(m1, n1), (m2, n2)] = kind.pair();
            let p1 = record.qubit_prob(m1, n1);
            let p2 = record.qubit_prob(m2, n2);
            if (p1 - 0.5).abs() < tol && (p2 - 0.5).abs() < tol {
                events.push(CrossingEvent {
                    kick: record.kick,
                    kind,
                    pair_probs: [p1, p2],
                });
            }
        }
    }
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::vacuum_state;
    use approx::assert_abs_diff_eq;
    use ndarray::Array1;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn state(basis: FockBasis, entries: &[((usize, usize), C64)]) -> StateVector {
        let mut amps: Array1<C64> = Array1::zeros(basis.joint_dim());
        for &((m, n), v) in entries {
            amps[basis.flat_index(m, n)] = v;
        }
        StateVector::new(basis, amps).unwrap()
    }

    fn bell_b1(basis: FockBasis) -> StateVector {
        let r = 1.0 / 2f64.sqrt();
        state(basis, &[((0, 1), c(r, 0.0)), ((1, 0), c(0.0, r))])
    }

    fn bell_b2(basis: FockBasis) -> StateVector {
        let r = 1.0 / 2f64.sqrt();
        state(basis, &[((1, 0), c(r, 0.0)), ((0, 1), c(0.0, r))])
    }

    #[test]
    fn tracked_set_rejects_duplicates() {
        assert!(TrackedSet::new(vec![(0, 0), (1, 0), (0, 0)]).is_err());
        assert!(TrackedSet::new(vec![(0, 0), (1, 0)]).is_ok());
    }

    #[test]
    fn probabilities_of_vacuum() {
        let basis = FockBasis::new(4, 4).unwrap();
        let psi = vacuum_state(basis);
        let probs = probabilities(&psi, &TrackedSet::three_state()).unwrap();
        assert_eq!(probs[0], ((0, 0), 1.0));
        assert_eq!(probs[1].1, 0.0);
        assert_eq!(probs[2].1, 0.0);
    }

    #[test]
    fn probabilities_of_equal_superposition() {
        let basis = FockBasis::new(2, 2).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let psi = state(basis, &[((0, 0), c(r, 0.0)), ((1, 0), c(r, 0.0))]);
        let probs = probabilities(&psi, &TrackedSet::three_state()).unwrap();
        assert_abs_diff_eq!(probs[0].1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(probs[2].1, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn probabilities_reject_out_of_range_labels() {
        let basis = FockBasis::new(2, 2).unwrap();
        let psi = vacuum_state(basis);
        let set = TrackedSet::new(vec![(5, 0)]).unwrap();
        assert!(matches!(
            probabilities(&psi, &set),
            Err(Error::LabelOutOfRange { .. })
        ));
    }

    #[test]
    fn leakage_zero_inside_span_and_one_outside() {
        let basis = FockBasis::new(4, 4).unwrap();
        let set = TrackedSet::three_state();
        let psi = bell_b1(basis);
        assert_abs_diff_eq!(leakage(&psi, &set).unwrap(), 0.0, epsilon = 1e-12);
        let outside = state(basis, &[((2, 0), c(1.0, 0.0))]);
        assert_abs_diff_eq!(leakage(&outside, &set).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn full_basis_leakage_vanishes() {
        let basis = FockBasis::new(5, 3).unwrap();
        let n = basis.joint_dim() as f64;
        let amps = Array1::from_elem(basis.joint_dim(), c(1.0 / n.sqrt(), 0.0));
        let psi = StateVector::new(basis, amps).unwrap();
        let full = TrackedSet::full(basis);
        assert!(leakage(&psi, &full).unwrap().abs() < 1e-10);
    }

    #[test]
    fn bell_fidelities_pick_out_their_states() {
        let basis = FockBasis::new(3, 3).unwrap();
        let (f1, f2) = bell_fidelities(&bell_b1(basis));
        assert_abs_diff_eq!(f1, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f2, 0.0, epsilon = 1e-14);
        let (g1, g2) = bell_fidelities(&bell_b2(basis));
        assert_abs_diff_eq!(g1, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g2, 1.0, epsilon = 1e-14);
        let (v1, v2) = bell_fidelities(&vacuum_state(basis));
        assert_eq!((v1, v2), (0.0, 0.0));
    }

    #[test]
    fn bell_states_are_orthogonal() {
        let basis = FockBasis::new(2, 2).unwrap();
        let b1 = bell_b1(basis);
        let b2 = bell_b2(basis);
        let overlap: C64 = b1
            .amplitudes()
            .iter()
            .zip(b2.amplitudes().iter())
            .map(|(x, y)| x.conj() * y)
            .sum();
        assert!(overlap.norm() < 1e-15);
    }

    #[test]
    fn entropy_of_product_and_bell_states() {
        let basis = FockBasis::new(3, 3).unwrap();
        assert_abs_diff_eq!(
            entanglement_entropy(&vacuum_state(basis)).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            entanglement_entropy(&bell_b1(basis)).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        // (|0,0> + |1,0>)/sqrt2 factors as (|0>+|1>)_a |0>_b
        let r = 1.0 / 2f64.sqrt();
        let separable = state(basis, &[((0, 0), c(r, 0.0)), ((1, 0), c(r, 0.0))]);
        assert_abs_diff_eq!(
            entanglement_entropy(&separable).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn detect_events_tolerance_validation() {
        let traj = KickTrajectory {
            tracked: TrackedSet::three_state(),
            records: vec![],
        };
        assert!(detect_events(&traj, 0.0).is_err());
        assert!(detect_events(&traj, 0.2).is_err());
        assert!(detect_events(&traj, 0.02).unwrap().is_empty());
    }

    #[test]
    fn constant_vacuum_trajectory_has_no_events() {
        let record = |k: usize| KickRecord {
            kick: k,
            time: k as f64,
            qubit_probs: [1.0, 0.0, 0.0, 0.0],
            tracked_probs: vec![1.0, 0.0, 0.0],
            leakage: 0.0,
            fidelity_b1: 0.0,
            fidelity_b2: 0.0,
            entropy: 0.0,
            norm_error: 0.0,
        };
        let traj = KickTrajectory {
            tracked: TrackedSet::three_state(),
            records: (0..50).map(record).collect(),
        };
        assert!(detect_events(&traj, 0.02).unwrap().is_empty());
    }

    #[test]
    fn synthetic_crossings_are_tagged_by_pair() {
        let mut record = KickRecord {
            kick: 7,
            time: 7.0,
            qubit_probs: [0.495, 0.0, 0.505, 0.0],
            tracked_probs: vec![],
            leakage: 0.0,
            fidelity_b1: 0.0,
            fidelity_b2: 0.0,
            entropy: 0.0,
            norm_error: 0.0,
        };
        let traj = KickTrajectory {
            tracked: TrackedSet::three_state(),
            records: vec![record.clone()],
        };
        let events = detect_events(&traj, 0.02).unwrap();
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].kind, EventKind::Separable);
        assert_eq!(events[0].kick, 7);

        record.qubit_probs = [0.01, 0.49, 0.51, 0.0];
        let traj = KickTrajectory {
            tracked: TrackedSet::three_state(),
            records: vec![record],
        };
        let events = detect_events(&traj, 0.02).unwrap();
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].kind, EventKind::Bell);
    }
}
