//! Acceptance suite: every release criterion as one test, printing one
//! PASS/FAIL line each (visible with `--nocapture`).
//!
//! Criteria 2 and 4 pin targets the reference dynamics does not reach at
//! these parameters: the four-state leakage tops out near 1.14e-3 against a
//! 1e-3 bound, and the separable pair never brings both probabilities
//! within 0.02 of 0.5 (closest approach ~0.03, with ~5% of the weight still
//! on the third state). They are asserted as stated and fail honestly
//! rather than being loosened to pass; the values the dynamics actually
//! produces are frozen in the core crate's scenario tests.

use std::time::Instant;

use coupler_cli::{preset, resolve, run_scenario, Scenario};
use coupler_core::{
    build_u_k, build_u_nl, coherent_state, dagger, detect_events, expm_hermitian_scaled,
    kron, mode_a_annihilation, mode_b_annihilation, single_mode_annihilation, vacuum_state,
    build_h_nl, scan_kicks, EventKind, FockBasis, KickTrajectory, TrackedSet,
};
use num_complex::Complex64 as C64;

fn preset_scenario(name: &str) -> Scenario {
    resolve(name.to_string(), preset(name).expect("preset exists")).expect("preset resolves")
}

fn preset_trajectory(name: &str) -> KickTrajectory {
    let scenario = preset_scenario(name);
    let basis = scenario.basis().unwrap();
    let tracked = scenario.tracked_set().unwrap();
    let psi0 = scenario.initial().unwrap();
    KickTrajectory::compute(&scenario.cfg, basis, &tracked, &psi0).unwrap()
}

fn report(criterion: u32, ok: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
}

#[test]
fn criterion_01_three_state_closure() {
    let started = Instant::now();
    let traj = preset_trajectory("fig1");
    let runtime = started.elapsed().as_secs_f64();
    let max_leakage = traj.max_leakage();
    let in_band = (1e-6..=1e-3).contains(&max_leakage);
    let fast_enough = runtime < 10.0;
    report(
        1,
        in_band && fast_enough,
        &format!("max leakage {max_leakage:.3e} in [1e-6, 1e-3], runtime {runtime:.2}s < 10s"),
    );
    assert!(in_band, "max leakage {max_leakage:e} outside [1e-6, 1e-3]");
    assert!(fast_enough, "runtime {runtime:.2}s exceeds 10s");
}

#[test]
fn criterion_02_four_state_closure() {
    let traj = preset_trajectory("fig3");
    let max_leakage = traj.max_leakage();
    let max_p11 = traj
        .records()
        .iter()
        .map(|r| r.qubit_prob(1, 1))
        .fold(0.0f64, f64::max);
    let leakage_ok = max_leakage <= 1e-3;
    let participation_ok = max_p11 > 0.05;
    report(
        2,
        leakage_ok && participation_ok,
        &format!("max leakage {max_leakage:.6e} vs bound 1e-3; max P(1,1) {max_p11:.4} > 0.05"),
    );
    assert!(
        participation_ok,
        "fourth state does not participate: max P(1,1) = {max_p11}"
    );
    assert!(
        leakage_ok,
        "four-state leakage {max_leakage:e} exceeds 1e-3"
    );
}

#[test]
fn criterion_03_bell_generation_with_cross_coupling() {
    let traj = preset_trajectory("fig1");
    let best_fidelity = traj
        .records()
        .iter()
        .map(|r| r.fidelity_b1.max(r.fidelity_b2))
        .fold(0.0f64, f64::max);
    let bell_events = detect_events(&traj, 0.02)
        .unwrap()
        .iter()
        .filter(|e| e.kind == EventKind::Bell)
        .count();
    let ok = best_fidelity >= 0.98 && bell_events >= 1;
    report(
        3,
        ok,
        &format!("max Bell fidelity {best_fidelity:.4} >= 0.98; {bell_events} bell events at tol 0.02"),
    );
    assert!(best_fidelity >= 0.98, "best fidelity {best_fidelity}");
    assert!(bell_events >= 1, "no bell crossing events");
}

#[test]
fn criterion_04_separable_state_events() {
    let traj = preset_trajectory("fig1");
    let qualifying: Vec<_> = traj
        .records()
        .iter()
        .filter(|r| {
            (r.qubit_prob(0, 0) - 0.5).abs() < 0.02 && (r.qubit_prob(1, 0) - 0.5).abs() < 0.02
        })
        .collect();
    let entropy_ok = qualifying.iter().any(|r| r.entropy < 0.1);
    let closest = traj
        .records()
        .iter()
        .map(|r| (r.qubit_prob(0, 0) - 0.5).abs().max((r.qubit_prob(1, 0) - 0.5).abs()))
        .fold(f64::INFINITY, f64::min);
    let ok = !qualifying.is_empty() && entropy_ok;
    report(
        4,
        ok,
        &format!(
            "{} kicks with P(0,0), P(1,0) both within 0.02 of 0.5 (closest approach {closest:.4}); entropy < 0.1 bit at one: {entropy_ok}",
            qualifying.len()
        ),
    );
    assert!(
        !qualifying.is_empty(),
        "no kick has both P(0,0) and P(1,0) within 0.02 of 0.5 (closest approach {closest:.4})"
    );
    assert!(entropy_ok, "no qualifying kick with entropy < 0.1 bit");
}

#[test]
fn criterion_05_no_bell_crossings_without_cross_coupling() {
    let traj = preset_trajectory("fig3");
    let bell_events = detect_events(&traj, 0.02)
        .unwrap()
        .iter()
        .filter(|e| e.kind == EventKind::Bell)
        .count();
    let ok = bell_events == 0;
    report(5, ok, &format!("{bell_events} bell events over 1000 kicks"));
    assert_eq!(bell_events, 0);
}

#[test]
fn criterion_06_displacement_operator_oracle() {
    let mut cfg = preset_scenario("fig1").cfg;
    cfg.dim_a = 30;
    cfg.dim_b = 2;
    let basis = cfg.basis().unwrap();
    let u_k = build_u_k(&cfg, basis).unwrap();
    let beta = -C64::i() * cfg.alpha;
    let oracle = coherent_state(beta, 30).unwrap();
    let mut max_err = 0.0f64;
    for m in 0..30 {
        let got = u_k.matrix()[[basis.flat_index(m, 0), 0]];
        max_err = max_err.max((got - oracle.amplitudes[m]).norm());
        max_err = max_err.max(u_k.matrix()[[basis.flat_index(m, 1), 0]].norm());
    }
    let ok = max_err < 1e-10;
    report(6, ok, &format!("max entrywise error {max_err:.3e} < 1e-10"));
    assert!(ok, "displacement oracle error {max_err:e}");
}

#[test]
fn criterion_07_unitarity_and_stability() {
    let mut cfg = preset_scenario("fig1").cfg;
    cfg.n_kicks = 10_000;
    let basis = cfg.basis().unwrap();
    let psi0 = vacuum_state(basis);
    let mut max_norm_error = 0.0f64;
    scan_kicks(&cfg, basis, &psi0, |_, psi| {
        max_norm_error = max_norm_error.max((psi.norm() - 1.0).abs());
    })
    .unwrap();
    let ok = max_norm_error < 1e-10;
    report(
        7,
        ok,
        &format!("max | ||psi|| - 1 | = {max_norm_error:.3e} over 10^4 kicks"),
    );
    assert!(ok, "norm drift {max_norm_error:e}");
}

#[test]
fn criterion_08_truncation_convergence() {
    let run = |dim: usize| {
        let mut cfg = preset_scenario("fig1").cfg;
        cfg.dim_a = dim;
        cfg.dim_b = dim;
        let basis = cfg.basis().unwrap();
        let psi0 = vacuum_state(basis);
        KickTrajectory::compute(&cfg, basis, &TrackedSet::three_state(), &psi0).unwrap()
    };
    let coarse = run(10);
    let fine = run(14);
    let mut max_diff = 0.0f64;
    for (a, b) in coarse.records().iter().zip(fine.records()) {
        for (pa, pb) in a.tracked_probs.iter().zip(&b.tracked_probs) {
            max_diff = max_diff.max((pa - pb).abs());
        }
    }
    let ok = max_diff < 1e-6;
    report(
        8,
        ok,
        &format!("max tracked-probability difference (10,10) vs (14,14): {max_diff:.3e} < 1e-6"),
    );
    assert!(ok, "truncation difference {max_diff:e}");
}

#[test]
fn criterion_09_operator_algebra_suite() {
    // annihilation / creation matrix patterns
    let a3 = single_mode_annihilation(3).unwrap();
    assert_eq!(a3[[0, 1]], C64::new(1.0, 0.0));
    assert!((a3[[1, 2]].re - 2f64.sqrt()).abs() < 1e-15);
    assert_eq!(a3.iter().filter(|v| v.norm() > 0.0).count(), 2);
    let basis = FockBasis::new(4, 3).unwrap();
    let a = mode_a_annihilation(basis);
    let b = mode_b_annihilation(basis);
    let ad = dagger(&a);
    for m in 1..4 {
        let row = basis.flat_index(m, 0);
        let col = basis.flat_index(m - 1, 0);
        assert!((ad.matrix()[[row, col]].re - (m as f64).sqrt()).abs() < 1e-15);
    }
    // mode operators factor through the Kronecker product
    let eye = |n: usize| ndarray::Array2::from_diag_elem(n, C64::new(1.0, 0.0));
    assert_eq!(
        a.matrix(),
        &kron(&single_mode_annihilation(4).unwrap(), &eye(3))
    );
    assert_eq!(
        b.matrix(),
        &kron(&eye(4), &single_mode_annihilation(3).unwrap())
    );
    // cross-mode commutator vanishes exactly
    let comm = a.matrix().dot(b.matrix()) - b.matrix().dot(a.matrix());
    assert!(comm.iter().all(|v| v.norm() == 0.0));
    // single-mode commutator truncation law
    for dim in 2..10 {
        let low = single_mode_annihilation(dim).unwrap();
        let high = low.t().mapv(|v| v.conj());
        let comm = low.dot(&high) - high.dot(&low);
        for ((i, j), v) in comm.indexed_iter() {
            let expected = if i != j {
                0.0
            } else if i == dim - 1 {
                1.0 - dim as f64
            } else {
                1.0
            };
            assert!((v.re - expected).abs() < 1e-12 && v.im == 0.0);
        }
    }
    // diagonal fast path vs spectral route at vanishing exchange
    let mut cfg = preset_scenario("fig1").cfg;
    cfg.epsilon = C64::new(0.0, 0.0);
    let basis = cfg.basis().unwrap();
    let fast = build_u_nl(&cfg, basis).unwrap();
    let h = build_h_nl(&cfg, basis).unwrap();
    let spectral = expm_hermitian_scaled(&h, cfg.t).unwrap();
    let max_diff = fast
        .matrix()
        .iter()
        .zip(spectral.matrix().iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0f64, f64::max);
    let ok = max_diff < 1e-12;
    report(
        9,
        ok,
        &format!("operator patterns, commutators, and fast path agree (fast-path diff {max_diff:.2e} < 1e-12)"),
    );
    assert!(ok, "fast path deviates by {max_diff:e}");
}

#[test]
fn criterion_10_determinism() {
    let scenario = preset_scenario("fig1");
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let out_a = run_scenario(&scenario, dir_a.path()).unwrap();
    let out_b = run_scenario(&scenario, dir_b.path()).unwrap();
    let bytes_a = std::fs::read(&out_a.csv_path).unwrap();
    let bytes_b = std::fs::read(&out_b.csv_path).unwrap();
    let ok = bytes_a == bytes_b;
    report(
        10,
        ok,
        &format!("two fig1 runs: {} bytes each, byte-identical: {ok}", bytes_a.len()),
    );
    assert!(ok, "CSV outputs differ between identical runs");
}
