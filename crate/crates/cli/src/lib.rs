//! Command-line front end for `relaycap-core`.
//!
//! Scenarios come from a JSON file (`--config`) or a built-in preset (`--preset`),
//! with a few fields overridable by flags. Rates are printed in nats unless `--bits`
//! is given. Every run is deterministic: the same scenario and seed give the same bytes.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relaycap_core::RateMode;

use crate::commands::{CheckSettings, Outcome, Suite};
use crate::config::{RhoSpec, ScenarioConfig};
pub use crate::error::{CliError, Result};
use crate::output::Unit;
use crate::presets::Preset;

#[derive(Debug, Parser)]
#[command(
    name = "relaycap",
    version,
    about = "Capacity bounds and relay placement for Gaussian multicast relay channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate rate bounds with the relay at a fixed position.
    Rate(RunArgs),
    /// Find the relay position that maximizes one bound.
    Optimize(RunArgs),
    /// Evaluate one bound on a grid of relay positions and write CSV.
    Sweep(RunArgs),
    /// Run numerical concavity and quasi-concavity certificates.
    Check(CheckArgs),
    /// Built-in scenarios.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum PresetAction {
    /// List preset names.
    List,
    /// Print a preset as a config file.
    Show { name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    #[value(name = "low_snr", alias = "low-snr")]
    LowSnr,
}

impl From<ModeArg> for RateMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => RateMode::Exact,
            ModeArg::LowSnr => RateMode::LowSnr,
        }
    }
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Scenario JSON file.
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in scenario (see `preset list`).
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    /// Bound or objective name; for `rate`, a comma-separated list or `all`.
    #[arg(long)]
    pub bound: Option<String>,
    /// Correlation in [0, 1] or `optimize`.
    #[arg(long)]
    pub rho: Option<String>,
    /// Relay coordinates, comma-separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub relay: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Grid points per axis, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub resolution: Option<Vec<usize>>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Write the output to a file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Report rates in bits instead of nats.
    #[arg(long)]
    pub bits: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    /// Bordered-Hessian minor signs of the building-block functions.
    #[value(alias = "lemma6")]
    Minors,
    /// Covariance and correlation forms of the cut-set bound agree.
    EquivalenceCs,
    /// Quasi-concavity sampling of one `--target`.
    #[value(alias = "lemma2")]
    Sample,
    /// Concavity and quasi-concavity claims for the rate bounds.
    #[value(alias = "theorems")]
    Claims,
    /// Composition rules that preserve quasi-concavity.
    #[value(alias = "lemma5")]
    Composition,
    /// Eigenstructure of the coherent-combining Hessian.
    #[value(alias = "lemma1")]
    Eigen,
    /// Concavity of log-det ratios of positive-definite matrices.
    Logdet,
    All,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub suite: SuiteArg,
    /// Function or claim to test (`sample`, `minors`).
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Rate mode for mode-dependent suites; both when omitted.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

impl ScenarioArgs {
    /// Loads the config or preset and applies flag overrides.
    pub fn resolve(&self) -> Result<ScenarioConfig> {
        let mut c = match (&self.config, &self.preset) {
            (Some(path), _) => ScenarioConfig::load(path)?,
            (None, Some(name)) => Preset::from_name(name)
                .ok_or_else(|| {
                    CliError::Usage(format!(
                        "unknown preset `{name}`; see `relaycap preset list`"
                    ))
                })?
                .config(),
            (None, None) => {
                return Err(CliError::Usage(
                    "one of --config or --preset is required".to_string(),
                ))
            }
        };
        if let Some(b) = &self.bound {
            c.bound = Some(b.clone());
        }
        if let Some(r) = &self.rho {
            c.rho = Some(RhoSpec::parse(r));
        }
        if let Some(r) = &self.relay {
            c.set_relay(r.clone());
        }
        if let Some(m) = self.mode {
            c.mode = m.into();
        }
        if let Some(r) = &self.resolution {
            c.resolution = Some(r.clone());
        }
        if let Some(t) = self.tol {
            c.tol = Some(t);
        }
        if let Some(s) = self.seed {
            c.seed = Some(s);
        }
        Ok(c)
    }
}

/// Output of a command, plus where it should go.
#[derive(Debug)]
pub struct Run {
    pub outcome: Outcome,
    pub out: Option<PathBuf>,
}

pub fn run(cli: &Cli) -> Result<Run> {
    match &cli.command {
        Command::Rate(a) | Command::Optimize(a) | Command::Sweep(a) => {
            let scenario = a.scenario.resolve()?.validate()?;
            let unit = Unit::from_flag(a.bits);
            let outcome = match &cli.command {
                Command::Rate(_) => commands::cmd_rate(&scenario, unit, a.json)?,
                Command::Optimize(_) => commands::cmd_optimize(&scenario, unit, a.json)?,
                _ => {
                    let (_, csv) = commands::cmd_sweep(&scenario, unit)?;
                    Outcome {
                        text: csv,
                        passed: true,
                    }
                }
            };
            Ok(Run {
                outcome,
                out: a.out.clone(),
            })
        }
        Command::Check(a) => {
            let suite = match a.suite {
                SuiteArg::Minors => Suite::Minors,
                SuiteArg::EquivalenceCs => Suite::EquivalenceCs,
                SuiteArg::Sample => Suite::Sample,
                SuiteArg::Claims => Suite::Claims,
                SuiteArg::Composition => Suite::Composition,
                SuiteArg::Eigen => Suite::Eigen,
                SuiteArg::Logdet => Suite::Logdet,
                SuiteArg::All => Suite::All,
            };
            if !(a.tol.is_finite() && a.tol > 0.0) {
                return Err(CliError::field("tol", "must be positive"));
            }
            let set = CheckSettings {
                suite,
                target: a.target.clone(),
                trials: a.trials,
                seed: a.seed,
                tol: a.tol,
                mode: a.mode.map(Into::into),
            };
            Ok(Run {
                outcome: commands::cmd_check(&set, a.json)?,
                out: a.out.clone(),
            })
        }
        Command::Preset { action } => {
            let text = match action {
                PresetAction::List => Preset::ALL
                    .iter()
                    .map(|p| format!("{:<12} {}\n", p.name(), p.description()))
                    .collect(),
                PresetAction::Show { name } => {
                    let p = Preset::from_name(name)
                        .ok_or_else(|| CliError::Usage(format!("unknown preset `{name}`")))?;
                    let mut s =
                        serde_json::to_string_pretty(&p.config()).expect("config serializes");
                    s.push('\n');
                    s
                }
            };
            Ok(Run {
                outcome: Outcome { text, passed: true },
                out: None,
            })
        }
    }
}

/// Runs the command and writes its output; returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    let result = run(cli).and_then(|r| {
        match &r.out {
            Some(path) => output::write_file(path, &r.outcome.text)?,
            None => print!("{}", r.outcome.text),
        }
        Ok(r.outcome.passed)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
