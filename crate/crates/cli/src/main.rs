use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use coupler_cli::{
    preset, resolve, run_scenario, run_sweep, CliError, ConfigDelta, Result, Scenario,
    PRESET_NAMES,
};

#[derive(Parser)]
#[command(
    name = "coupler",
    about = "Stroboscopic simulation of a pulsed two-mode Kerr nonlinear coupler",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its trajectory CSV and JSON summary.
    Run(ScenarioArgs),
    /// Run the scenario once per value of a numeric key, concurrently.
    Sweep(SweepArgs),
    /// List the built-in presets in config-file form.
    Presets,
}

/// Configuration layering: preset, then config file, then flags, each
/// overriding the last. Flags carry the exact config key names.
#[derive(Args)]
struct ScenarioArgs {
    /// Built-in parameter set (fig1 or fig3).
    #[arg(long)]
    preset: Option<String>,

    /// Flat key=value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Scenario name, used for output file names.
    #[arg(long)]
    name: Option<String>,

    /// Directory receiving the CSV and JSON outputs.
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,

    #[arg(long = "chi_a", value_name = "X")]
    chi_a: Option<String>,
    #[arg(long = "chi_b", value_name = "X")]
    chi_b: Option<String>,
    #[arg(long = "chi_ab", value_name = "X")]
    chi_ab: Option<String>,
    #[arg(long = "epsilon_re", value_name = "X")]
    epsilon_re: Option<String>,
    #[arg(long = "epsilon_im", value_name = "X")]
    epsilon_im: Option<String>,
    #[arg(long = "alpha_re", value_name = "X")]
    alpha_re: Option<String>,
    #[arg(long = "alpha_im", value_name = "X")]
    alpha_im: Option<String>,
    #[arg(long = "T", value_name = "X")]
    t: Option<String>,
    #[arg(long = "dim_a", value_name = "N")]
    dim_a: Option<String>,
    #[arg(long = "dim_b", value_name = "N")]
    dim_b: Option<String>,
    #[arg(long = "n_kicks", value_name = "N")]
    n_kicks: Option<String>,
    #[arg(long = "tracked", value_name = "SET")]
    tracked: Option<String>,
    #[arg(long = "initial_state", value_name = "STATE")]
    initial_state: Option<String>,
    #[arg(long = "event_tol", value_name = "X")]
    event_tol: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,

    /// Numeric config key to sweep.
    #[arg(long)]
    key: String,

    /// Comma-separated values for the swept key.
    #[arg(long, value_delimiter = ',')]
    values: Vec<String>,
}

impl ScenarioArgs {
    fn flag_delta(&self) -> Result<ConfigDelta> {
        let mut delta = ConfigDelta::default();
        let pairs: [(&str, &Option<String>); 14] = [
            ("chi_a", &self.chi_a),
            ("chi_b", &self.chi_b),
            ("chi_ab", &self.chi_ab),
            ("epsilon_re", &self.epsilon_re),
            ("epsilon_im", &self.epsilon_im),
            ("alpha_re", &self.alpha_re),
            ("alpha_im", &self.alpha_im),
            ("T", &self.t),
            ("dim_a", &self.dim_a),
            ("dim_b", &self.dim_b),
            ("n_kicks", &self.n_kicks),
            ("tracked", &self.tracked),
            ("initial_state", &self.initial_state),
            ("event_tol", &self.event_tol),
        ];
        for (key, value) in pairs {
            if let Some(value) = value {
                delta.set_key(key, value, "flag: ")?;
            }
        }
        Ok(delta)
    }

    fn resolve(&self) -> Result<Scenario> {
        let mut delta = ConfigDelta::default();
        if let Some(name) = &self.preset {
            delta = preset(name).ok_or_else(|| {
                CliError::usage(format!(
                    "unknown preset '{name}' (available: {})",
                    PRESET_NAMES.join(", ")
                ))
            })?;
        }
        if let Some(path) = &self.config {
            delta = delta.overlay(ConfigDelta::from_file(path)?);
        }
        delta = delta.overlay(self.flag_delta()?);

        let name = self
            .name
            .clone()
            .or_else(|| self.preset.clone())
            .or_else(|| {
                self.config
                    .as_ref()
                    .and_then(|p| p.file_stem())
                    .map(|s| s.to_string_lossy().into_owned())
            })
            .unwrap_or_else(|| "custom".to_string());
        resolve(name, delta)
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let scenario = args.resolve()?;
            let output = run_scenario(&scenario, &args.output_dir)?;
            let s = &output.summary;
            println!(
                "{}: {} kicks, max leakage {:.3e}, max fidelity {:.4}, {} bell / {} separable events",
                s.scenario,
                s.config.n_kicks,
                s.max_leakage,
                s.max_fid_b1.max(s.max_fid_b2),
                s.bell_event_count,
                s.separable_event_count,
            );
            println!("wrote {}", output.csv_path.display());
            println!("wrote {}", output.summary_path.display());
        }
        Command::Sweep(args) => {
            let base = args.scenario.resolve()?;
            let output = run_sweep(&base, &args.key, &args.values, &args.scenario.output_dir)?;
            for path in &output.csv_paths {
                println!("wrote {}", path.display());
            }
            match &output.report_path {
                Some(path) => println!("wrote {}", path.display()),
                None => println!("no values supplied; nothing to do"),
            }
        }
        Command::Presets => {
            for name in PRESET_NAMES {
                let scenario = resolve(name.to_string(), preset(name).expect("built-in"))
                    .expect("presets are valid");
                println!("# {name}");
                println!("{}", preset_as_config(&scenario));
            }
        }
    }
    Ok(())
}

fn preset_as_config(scenario: &Scenario) -> String {
    let cfg = &scenario.cfg;
    format!(
        "chi_a={}\nchi_b={}\nchi_ab={}\nepsilon_re={}\nepsilon_im={}\nalpha_re={}\nalpha_im={}\nT={}\ndim_a={}\ndim_b={}\nn_kicks={}\ntracked={}\ninitial_state={}\nevent_tol={}\n",
        cfg.chi_a,
        cfg.chi_b,
        cfg.chi_ab,
        cfg.epsilon.re,
        cfg.epsilon.im,
        cfg.alpha.re,
        cfg.alpha.im,
        cfg.t,
        cfg.dim_a,
        cfg.dim_b,
        cfg.n_kicks,
        scenario.tracked_spec,
        scenario.initial_state,
        scenario.event_tol,
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
