//! Flat key=value configuration: file parsing, flag overlay, and resolution
//! into a full scenario.

use std::fmt;
use std::path::Path;

use coupler_core::{CoherentState, FockBasis, StateVector, TrackedSet};
use num_complex::Complex64 as C64;

use crate::error::{CliError, Result};

/// Every key the config format accepts, in canonical order.
pub const CONFIG_KEYS: [&str; 14] = [
    "chi_a",
    "chi_b",
    "chi_ab",
    "epsilon_re",
    "epsilon_im",
    "alpha_re",
    "alpha_im",
    "T",
    "dim_a",
    "dim_b",
    "n_kicks",
    "tracked",
    "initial_state",
    "event_tol",
];

/// Keys that hold a single number and are therefore sweepable.
pub const NUMERIC_KEYS: [&str; 12] = [
    "chi_a",
    "chi_b",
    "chi_ab",
    "epsilon_re",
    "epsilon_im",
    "alpha_re",
    "alpha_im",
    "T",
    "dim_a",
    "dim_b",
    "n_kicks",
    "event_tol",
];

/// Which Fock labels the run tracks for leakage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrackedSpec {
    /// {(0,0), (0,1), (1,0)}
    Three,
    /// {(0,0), (0,1), (1,0), (1,1)}
    Four,
    /// An explicit `m,n;m,n;...` list.
    Explicit(Vec<(usize, usize)>),
}

impl TrackedSpec {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        match text {
            "three" => Ok(Self::Three),
            "four" => Ok(Self::Four),
            other => {
                let mut labels = Vec::new();
                for part in other.split(';') {
                    let (m, n) = part
                        .split_once(',')
                        .ok_or_else(|| format!("expected 'm,n' pair, got '{part}'"))?;
                    let m = m.trim().parse::<usize>().map_err(|e| e.to_string())?;
                    let n = n.trim().parse::<usize>().map_err(|e| e.to_string())?;
                    labels.push((m, n));
                }
                if labels.is_empty() {
                    return Err("tracked set must not be empty".into());
                }
                Ok(Self::Explicit(labels))
            }
        }
    }

    pub fn to_set(&self) -> Result<TrackedSet> {
        match self {
            Self::Three => Ok(TrackedSet::three_state()),
            Self::Four => Ok(TrackedSet::four_state()),
            Self::Explicit(labels) => TrackedSet::new(labels.clone())
                .map_err(|e| CliError::usage(format!("key 'tracked': {e}"))),
        }
    }
}

impl fmt::Display for TrackedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Three => write!(f, "three"),
            Self::Four => write!(f, "four"),
            Self::Explicit(labels) => {
                let parts: Vec<String> =
                    labels.iter().map(|(m, n)| format!("{m},{n}")).collect();
                write!(f, "{}", parts.join(";"))
            }
        }
    }
}

/// Initial state of the run: the two-mode vacuum, or a coherent state in
/// mode a tensored with the mode-b vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Vacuum,
    CoherentA(C64),
}

impl InitialState {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        if text == "vacuum" {
            return Ok(Self::Vacuum);
        }
        if let Some(rest) = text.strip_prefix("coherent:") {
            let (re, im) = rest
                .split_once(',')
                .ok_or_else(|| format!("expected 'coherent:<re>,<im>', got '{text}'"))?;
            let re = re.trim().parse::<f64>().map_err(|e| e.to_string())?;
            let im = im.trim().parse::<f64>().map_err(|e| e.to_string())?;
            return Ok(Self::CoherentA(C64::new(re, im)));
        }
        Err(format!(
            "expected 'vacuum' or 'coherent:<re>,<im>', got '{text}'"
        ))
    }

    pub fn build(&self, basis: FockBasis) -> coupler_core::Result<StateVector> {
        match self {
            Self::Vacuum => Ok(coupler_core::vacuum_state(basis)),
            Self::CoherentA(alpha) => {
                let coherent: CoherentState =
                    coupler_core::coherent_state(*alpha, basis.dim_a())?;
                coherent.tensor_with_vacuum(basis)
            }
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Vacuum => write!(f, "vacuum"),
            Self::CoherentA(alpha) => write!(f, "coherent:{},{}", alpha.re, alpha.im),
        }
    }
}

/// A partial configuration; `None` fields fall through to lower-precedence
/// sources (preset < file < flags).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigDelta {
    pub chi_a: Option<f64>,
    pub chi_b: Option<f64>,
    pub chi_ab: Option<f64>,
    pub epsilon_re: Option<f64>,
    pub epsilon_im: Option<f64>,
    pub alpha_re: Option<f64>,
    pub alpha_im: Option<f64>,
    pub t: Option<f64>,
    pub dim_a: Option<usize>,
    pub dim_b: Option<usize>,
    pub n_kicks: Option<usize>,
    pub tracked: Option<TrackedSpec>,
    pub initial_state: Option<InitialState>,
    pub event_tol: Option<f64>,
}

impl ConfigDelta {
    /// Overlay `higher` on `self`: populated fields of `higher` win.
    pub fn overlay(mut self, higher: ConfigDelta) -> ConfigDelta {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if higher.$field.is_some() { self.$field = higher.$field; })*
            };
        }
        take!(
            chi_a, chi_b, chi_ab, epsilon_re, epsilon_im, alpha_re, alpha_im, t,
            dim_a, dim_b, n_kicks, tracked, initial_state, event_tol
        );
        self
    }

    /// Assign one key from its textual value. `context` prefixes error
    /// messages (e.g. "line 3: ").
    pub fn set_key(&mut self, key: &str, value: &str, context: &str) -> Result<()> {
        let bad_number = |e: std::num::ParseFloatError| {
            CliError::usage(format!("{context}key '{key}': malformed number '{value}': {e}"))
        };
        let bad_integer = |e: std::num::ParseIntError| {
            CliError::usage(format!("{context}key '{key}': malformed integer '{value}': {e}"))
        };
        match key {
            "chi_a" => self.chi_a = Some(value.parse().map_err(bad_number)?),
            "chi_b" => self.chi_b = Some(value.parse().map_err(bad_number)?),
            "chi_ab" => self.chi_ab = Some(value.parse().map_err(bad_number)?),
            "epsilon_re" => self.epsilon_re = Some(value.parse().map_err(bad_number)?),
            "epsilon_im" => self.epsilon_im = Some(value.parse().map_err(bad_number)?),
            "alpha_re" => self.alpha_re = Some(value.parse().map_err(bad_number)?),
            "alpha_im" => self.alpha_im = Some(value.parse().map_err(bad_number)?),
            "T" => self.t = Some(value.parse().map_err(bad_number)?),
            "dim_a" => self.dim_a = Some(value.parse().map_err(bad_integer)?),
            "dim_b" => self.dim_b = Some(value.parse().map_err(bad_integer)?),
            "n_kicks" => self.n_kicks = Some(value.parse().map_err(bad_integer)?),
            "event_tol" => self.event_tol = Some(value.parse().map_err(bad_number)?),
            "tracked" => {
                self.tracked = Some(TrackedSpec::parse(value).map_err(|e| {
                    CliError::usage(format!("{context}key 'tracked': {e}"))
                })?)
            }
            "initial_state" => {
                self.initial_state = Some(InitialState::parse(value).map_err(|e| {
                    CliError::usage(format!("{context}key 'initial_state': {e}"))
                })?)
            }
            unknown => {
                return Err(CliError::usage(format!(
                    "{context}unknown key '{unknown}' (valid keys: {})",
                    CONFIG_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Parse a flat key=value file. Blank lines and `#` comments are
    /// ignored; every problem is reported with its key and line number.
    pub fn from_file(path: &Path) -> Result<ConfigDelta> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> Result<ConfigDelta> {
        let mut delta = ConfigDelta::default();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let context = format!("line {}: ", index + 1);
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!("{context}expected 'key=value', got '{line}'"))
            })?;
            delta.set_key(key.trim(), value.trim(), &context)?;
        }
        Ok(delta)
    }
}
