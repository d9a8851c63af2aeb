//! Scenario execution: trajectory CSV, JSON summary, and parameter sweeps.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use coupler_core::{detect_events, EventKind, KickTrajectory};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigDelta, NUMERIC_KEYS};
use crate::error::{CliError, Result};
use crate::scenario::{resolve, Scenario};

/// CSV column order; fixed so downstream plotting never has to sniff.
pub const CSV_HEADER: &str =
    "kick,time,p_00,p_01,p_10,p_11,leakage,fid_b1,fid_b2,entropy,norm_error";

/// Scientific notation with 17 significant digits: round-trip exact for
/// doubles, so identical runs produce identical bytes.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub chi_a: f64,
    pub chi_b: f64,
    pub chi_ab: f64,
    pub epsilon_re: f64,
    pub epsilon_im: f64,
    pub alpha_re: f64,
    pub alpha_im: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub dim_a: usize,
    pub dim_b: usize,
    pub n_kicks: usize,
    pub tracked: String,
    pub initial_state: String,
    pub event_tol: f64,
}

impl ConfigEcho {
    fn of(scenario: &Scenario) -> Self {
        Self {
            chi_a: scenario.cfg.chi_a,
            chi_b: scenario.cfg.chi_b,
            chi_ab: scenario.cfg.chi_ab,
            epsilon_re: scenario.cfg.epsilon.re,
            epsilon_im: scenario.cfg.epsilon.im,
            alpha_re: scenario.cfg.alpha.re,
            alpha_im: scenario.cfg.alpha.im,
            t: scenario.cfg.t,
            dim_a: scenario.cfg.dim_a,
            dim_b: scenario.cfg.dim_b,
            n_kicks: scenario.cfg.n_kicks,
            tracked: scenario.tracked_spec.to_string(),
            initial_state: scenario.initial_state.to_string(),
            event_tol: scenario.event_tol,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub config: ConfigEcho,
    pub max_leakage: f64,
    pub mean_leakage: f64,
    pub max_fid_b1: f64,
    pub max_fid_b2: f64,
    pub bell_event_count: usize,
    pub separable_event_count: usize,
    pub max_norm_error: f64,
    pub runtime_seconds: f64,
}

#[derive(Debug)]
pub struct RunOutput {
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
    pub summary: Summary,
    pub trajectory: KickTrajectory,
}

/// Run one scenario and write its trajectory CSV and JSON summary under
/// `output_dir`. Output bytes depend only on the scenario (the JSON's
/// `runtime_seconds` field excepted).
pub fn run_scenario(scenario: &Scenario, output_dir: &Path) -> Result<RunOutput> {
    let started = Instant::now();
    let basis = scenario.basis()?;
    let tracked = scenario.tracked_set()?;
    let psi0 = scenario.initial()?;
    let trajectory = KickTrajectory::compute(&scenario.cfg, basis, &tracked, &psi0)?;
    let events = detect_events(&trajectory, scenario.event_tol)?;

    fs::create_dir_all(output_dir).map_err(CliError::io(output_dir))?;
    let csv_path = output_dir.join(scenario.csv_filename());
    write_trajectory_csv(&trajectory, &csv_path)?;

    let summary = Summary {
        scenario: scenario.name.clone(),
        config: ConfigEcho::of(scenario),
        max_leakage: trajectory.max_leakage(),
        mean_leakage: trajectory.mean_leakage(),
        max_fid_b1: trajectory.max_fidelity_b1(),
        max_fid_b2: trajectory.max_fidelity_b2(),
        bell_event_count: events.iter().filter(|e| e.kind == EventKind::Bell).count(),
        separable_event_count: events
            .iter()
            .filter(|e| e.kind == EventKind::Separable)
            .count(),
        max_norm_error: trajectory.max_norm_error(),
        runtime_seconds: started.elapsed().as_secs_f64(),
    };
    let summary_path = output_dir.join(scenario.summary_filename());
    write_json(&summary, &summary_path)?;

    Ok(RunOutput {
        csv_path,
        summary_path,
        summary,
        trajectory,
    })
}

fn write_trajectory_csv(trajectory: &KickTrajectory, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(CliError::io(path))?;
    let mut out = BufWriter::new(file);
    let io_err = |e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    };
    writeln!(out, "{CSV_HEADER}").map_err(io_err)?;
    for r in trajectory.records() {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.kick,
            fmt(r.time),
            fmt(r.qubit_prob(0, 0)),
            fmt(r.qubit_prob(0, 1)),
            fmt(r.qubit_prob(1, 0)),
            fmt(r.qubit_prob(1, 1)),
            fmt(r.leakage),
            fmt(r.fidelity_b1),
            fmt(r.fidelity_b2),
            fmt(r.entropy),
            fmt(r.norm_error),
        )
        .map_err(io_err)?;
    }
    out.flush().map_err(io_err)?;
    Ok(())
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::usage(format!("serializing {}: {e}", path.display())))?;
    fs::write(path, text + "\n").map_err(CliError::io(path))?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct SweepPairReport {
    pub from: String,
    pub to: String,
    /// Max over kicks and tracked labels of the probability difference;
    /// absent when the two runs are not comparable kick by kick.
    pub max_tracked_prob_diff: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub scenario: String,
    pub key: String,
    pub values: Vec<String>,
    pub runs: Vec<Summary>,
    pub convergence: Vec<SweepPairReport>,
}

#[derive(Debug)]
pub struct SweepOutput {
    pub csv_paths: Vec<PathBuf>,
    pub report_path: Option<PathBuf>,
    pub report: Option<SweepReport>,
}

/// Run the base scenario once per value of `key`, concurrently, then write
/// one CSV per value and an aggregate report. An empty value list writes
/// nothing and succeeds.
pub fn run_sweep(
    base: &Scenario,
    key: &str,
    values: &[String],
    output_dir: &Path,
) -> Result<SweepOutput> {
    if !NUMERIC_KEYS.contains(&key) {
        return Err(CliError::usage(format!(
            "sweep key must be numeric, got '{key}' (valid: {})",
            NUMERIC_KEYS.join(", ")
        )));
    }
    if values.is_empty() {
        return Ok(SweepOutput {
            csv_paths: Vec::new(),
            report_path: None,
            report: None,
        });
    }

    // resolve every point up front so a bad value fails before any work
    let mut scenarios = Vec::with_capacity(values.len());
    for value in values {
        let mut delta = base.to_delta();
        delta.set_key(key, value, "sweep value: ")?;
        let name = format!("{}_{key}_{value}", base.name);
        scenarios.push(resolve(name, delta)?);
    }

    let outputs: Vec<RunOutput> = scenarios
        .par_iter()
        .map(|scenario| run_scenario(scenario, output_dir))
        .collect::<Result<Vec<_>>>()?;

    let convergence = outputs
        .windows(2)
        .zip(values.windows(2))
        .map(|(pair, tokens)| SweepPairReport {
            from: tokens[0].clone(),
            to: tokens[1].clone(),
            max_tracked_prob_diff: tracked_prob_diff(&pair[0].trajectory, &pair[1].trajectory),
        })
        .collect();

    let report = SweepReport {
        scenario: base.name.clone(),
        key: key.to_string(),
        values: values.to_vec(),
        runs: outputs.iter().map(|o| o.summary.clone()).collect(),
        convergence,
    };
    let report_path = output_dir.join(format!("{}_sweep_{key}.json", base.name));
    write_json(&report, &report_path)?;

    Ok(SweepOutput {
        csv_paths: outputs.into_iter().map(|o| o.csv_path).collect(),
        report_path: Some(report_path),
        report: Some(report),
    })
}

/// Max per-kick difference of tracked-state probabilities between two runs,
/// when they share the same kick count and tracked arity.
fn tracked_prob_diff(a: &KickTrajectory, b: &KickTrajectory) -> Option<f64> {
    if a.records().len() != b.records().len() || a.tracked().len() != b.tracked().len() {
        return None;
    }
    let mut max = 0.0f64;
    for (ra, rb) in a.records().iter().zip(b.records()) {
        for (pa, pb) in ra.tracked_probs.iter().zip(&rb.tracked_probs) {
            max = max.max((pa - pb).abs());
        }
    }
    Some(max)
}

impl Scenario {
    /// Re-express as a fully populated delta, the starting point for sweeps.
    pub fn to_delta(&self) -> ConfigDelta {
        ConfigDelta {
            chi_a: Some(self.cfg.chi_a),
            chi_b: Some(self.cfg.chi_b),
            chi_ab: Some(self.cfg.chi_ab),
            epsilon_re: Some(self.cfg.epsilon.re),
            epsilon_im: Some(self.cfg.epsilon.im),
            alpha_re: Some(self.cfg.alpha.re),
            alpha_im: Some(self.cfg.alpha.im),
            t: Some(self.cfg.t),
            dim_a: Some(self.cfg.dim_a),
            dim_b: Some(self.cfg.dim_b),
            n_kicks: Some(self.cfg.n_kicks),
            tracked: Some(self.tracked_spec.clone()),
            initial_state: Some(self.initial_state),
            event_tol: Some(self.event_tol),
        }
    }
}
