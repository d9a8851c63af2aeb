//! Scenario presets and resolution of layered configuration into a runnable
//! scenario.

use std::f64::consts::PI;

use coupler_core::{CouplerConfig, FockBasis, StateVector, TrackedSet};
use num_complex::Complex64 as C64;

use crate::config::{ConfigDelta, InitialState, TrackedSpec};
use crate::error::{CliError, Result};

/// A fully resolved run: parameters, tracked set, initial state, event
/// tolerance, and a name that fixes the output file paths.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub cfg: CouplerConfig,
    pub tracked_spec: TrackedSpec,
    pub initial_state: InitialState,
    pub event_tol: f64,
}

impl Scenario {
    pub fn tracked_set(&self) -> Result<TrackedSet> {
        self.tracked_spec.to_set()
    }

    pub fn basis(&self) -> Result<FockBasis> {
        self.cfg
            .basis()
            .map_err(|e| CliError::usage(e.to_string()))
    }

    pub fn initial(&self) -> Result<StateVector> {
        Ok(self.initial_state.build(self.basis()?)?)
    }

    pub fn csv_filename(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn summary_filename(&self) -> String {
        format!("{}.json", self.name)
    }
}

pub const PRESET_NAMES: [&str; 2] = ["fig1", "fig3"];

/// Built-in parameter sets. Both use T = pi, alpha = 1/25, epsilon = 1/100,
/// chi_a = chi_b = 1, 10x10 levels, vacuum start, 1000 kicks; they differ
/// only in the cross-coupling strength and the tracked set.
pub fn preset(name: &str) -> Option<ConfigDelta> {
    let base = ConfigDelta {
        chi_a: Some(1.0),
        chi_b: Some(1.0),
        chi_ab: Some(1.0),
        epsilon_re: Some(0.01),
        epsilon_im: Some(0.0),
        alpha_re: Some(0.04),
        alpha_im: Some(0.0),
        t: Some(PI),
        dim_a: Some(10),
        dim_b: Some(10),
        n_kicks: Some(1000),
        tracked: Some(TrackedSpec::Three),
        initial_state: Some(InitialState::Vacuum),
        event_tol: Some(0.02),
    };
    match name {
        "fig1" => Some(base),
        "fig3" => Some(ConfigDelta {
            chi_ab: Some(0.0),
            tracked: Some(TrackedSpec::Four),
            ..base
        }),
        _ => None,
    }
}

/// Turn a fully layered delta into a scenario, checking that every required
/// key is present and the run controls are valid.
pub fn resolve(name: String, delta: ConfigDelta) -> Result<Scenario> {
    let mut missing: Vec<&str> = Vec::new();
    macro_rules! require {
        ($field:ident, $key:literal) => {
            match delta.$field {
                Some(v) => v,
                None => {
                    missing.push($key);
                    Default::default()
                }
            }
        };
    }
    let chi_a = require!(chi_a, "chi_a");
    let chi_b = require!(chi_b, "chi_b");
    let chi_ab = require!(chi_ab, "chi_ab");
    let epsilon_re = require!(epsilon_re, "epsilon_re");
    let alpha_re = require!(alpha_re, "alpha_re");
    let t = require!(t, "T");
    let dim_a = require!(dim_a, "dim_a");
    let dim_b = require!(dim_b, "dim_b");
    let n_kicks = require!(n_kicks, "n_kicks");
    if !missing.is_empty() {
        return Err(CliError::usage(format!(
            "missing required keys: {}",
            missing.join(", ")
        )));
    }

    let cfg = CouplerConfig {
        chi_a,
        chi_b,
        chi_ab,
        epsilon: C64::new(epsilon_re, delta.epsilon_im.unwrap_or(0.0)),
        alpha: C64::new(alpha_re, delta.alpha_im.unwrap_or(0.0)),
        t,
        dim_a,
        dim_b,
        n_kicks,
    };
    cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;

    let event_tol = delta.event_tol.unwrap_or(0.02);
    if !(event_tol > 0.0 && event_tol <= 0.1) {
        return Err(CliError::usage(format!(
            "key 'event_tol': must lie in (0, 0.1], got {event_tol}"
        )));
    }

    let scenario = Scenario {
        name,
        cfg,
        tracked_spec: delta.tracked.unwrap_or(TrackedSpec::Three),
        initial_state: delta.initial_state.unwrap_or(InitialState::Vacuum),
        event_tol,
    };
    // surface bad tracked labels now rather than mid-run
    let tracked = scenario.tracked_set()?;
    let basis = scenario.basis()?;
    tracked
        .check_within(basis)
        .map_err(|e| CliError::usage(e.to_string()))?;
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_encode_reference_parameters() {
        for name in PRESET_NAMES {
            let scenario = resolve(name.into(), preset(name).unwrap()).unwrap();
            assert_eq!(scenario.cfg.chi_a, 1.0);
            assert_eq!(scenario.cfg.chi_b, 1.0);
            assert_eq!(scenario.cfg.epsilon, C64::new(0.01, 0.0));
            assert_eq!(scenario.cfg.alpha, C64::new(0.04, 0.0));
            assert_eq!(scenario.cfg.t, PI);
            assert_eq!((scenario.cfg.dim_a, scenario.cfg.dim_b), (10, 10));
            assert_eq!(scenario.cfg.n_kicks, 1000);
            assert_eq!(scenario.initial_state, InitialState::Vacuum);
            assert_eq!(scenario.event_tol, 0.02);
        }
        let fig1 = resolve("fig1".into(), preset("fig1").unwrap()).unwrap();
        let fig3 = resolve("fig3".into(), preset("fig3").unwrap()).unwrap();
        assert_eq!(fig1.cfg.chi_ab, 1.0);
        assert_eq!(fig3.cfg.chi_ab, 0.0);
        assert_eq!(fig1.tracked_spec, TrackedSpec::Three);
        assert_eq!(fig3.tracked_spec, TrackedSpec::Four);
    }

    #[test]
    fn presets_differ_only_in_cross_coupling_and_tracked_set() {
        let mut fig1 = preset("fig1").unwrap();
        let fig3 = preset("fig3").unwrap();
        // after aligning the two distinguished fields the deltas must agree
        fig1.chi_ab = fig3.chi_ab;
        fig1.tracked = fig3.tracked.clone();
        assert_eq!(fig1, fig3);
    }

    #[test]
    fn unknown_preset_is_none() {
        assert!(preset("fig2").is_none());
    }

    #[test]
    fn missing_keys_are_reported_by_name() {
        let delta = ConfigDelta {
            chi_a: Some(1.0),
            ..Default::default()
        };
        let err = resolve("x".into(), delta).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("chi_b"));
        assert!(msg.contains("n_kicks"));
        assert!(!msg.contains("chi_a,"));
    }

    #[test]
    fn sub_qubit_dimension_is_a_usage_error() {
        let mut delta = preset("fig1").unwrap();
        delta.dim_a = Some(1);
        let err = resolve("x".into(), delta).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn event_tolerance_bounds_are_enforced() {
        let mut delta = preset("fig1").unwrap();
        delta.event_tol = Some(0.5);
        assert!(resolve("x".into(), delta).is_err());
    }

    #[test]
    fn flag_overlay_wins_over_file() {
        let file = ConfigDelta::parse_str("chi_ab=0.7\nn_kicks=50").unwrap();
        let flags = ConfigDelta {
            chi_ab: Some(0.3),
            ..Default::default()
        };
        let merged = preset("fig1").unwrap().overlay(file).overlay(flags);
        let scenario = resolve("fig1".into(), merged).unwrap();
        assert_eq!(scenario.cfg.chi_ab, 0.3);
        assert_eq!(scenario.cfg.n_kicks, 50);
    }
}
