//! `dyncool`: command-line driver that regenerates cooling curves, noise
//! sweeps and circuits as CSV/JSON with a run manifest.

mod commands;
mod config;
mod error;
mod output;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dyncool::{Execution, Permutation};

use crate::config::Config;
use crate::error::CliError;
use crate::output::{emit_table, sibling, write_artifacts, Table};

#[derive(Debug, Parser)]
#[command(
    name = "dyncool",
    version,
    about = "Heat-bath algorithmic cooling curves, circuits and noise sweeps"
)]
struct Cli {
    /// INI-style settings file (`key = value`, `[section]` prefixes keys).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Named preset applied before the config file.
    #[arg(long, global = true)]
    profile: Option<String>,
    /// Master seed for stochastic commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo shots per sweep cell.
    #[arg(long, global = true)]
    shots: Option<u64>,
    /// Output file; JSON and manifest files are written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Individual `key=value` override, applied last.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Run sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cooled excited population versus initial population for several register sizes.
    PopulationCurves,
    /// Minimal final temperature versus initial temperature, with asymptotes.
    TemperatureCurves,
    /// Per-qubit minimal work versus initial population.
    WorkCurves,
    /// Large-register work limit versus temperature, with device markers.
    WorkTemperature,
    /// Monte Carlo final temperature under Pauli noise.
    NoiseSweep,
    /// Noise sweep of optimal registers followed by clustered cooling.
    Suboptimal,
    /// Work of clustered cooling versus the optimal protocol.
    SuboptimalWork,
    /// MCX and CNOT counts of the mirror protocol per register size.
    GatecountScaling,
    /// Synthesize an MCX circuit from a permutation file (stdin if omitted).
    Synth { permutation: Option<PathBuf> },
    /// Print the permutation of the configured protocol.
    Protocol {
        #[arg(long)]
        qubits: usize,
    },
    /// Summary of the cooling limits for one register.
    Analyze {
        #[arg(long)]
        qubits: usize,
    },
    /// List the named profiles.
    Profiles,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::PopulationCurves => "population-curves",
            Command::TemperatureCurves => "temperature-curves",
            Command::WorkCurves => "work-curves",
            Command::WorkTemperature => "work-temperature",
            Command::NoiseSweep => "noise-sweep",
            Command::Suboptimal => "suboptimal",
            Command::SuboptimalWork => "suboptimal-work",
            Command::GatecountScaling => "gatecount-scaling",
            Command::Synth { .. } => "synth",
            Command::Protocol { .. } => "protocol",
            Command::Analyze { .. } => "analyze",
            Command::Profiles => "profiles",
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<Config, CliError> {
    let mut cfg = Config::with_defaults();
    if let Some(name) = &cli.profile {
        cfg.apply_profile(name)?;
    }
    if let Some(path) = &cli.config {
        cfg.merge_file(path)?;
    }
    for o in &cli.overrides {
        cfg.merge_override(o)?;
    }
    if let Some(seed) = cli.seed {
        cfg.set("seed", &seed.to_string());
    }
    if let Some(shots) = cli.shots {
        cfg.set("shots", &shots.to_string());
    }
    Ok(cfg)
}

fn emit_text(command: &str, cfg: &Config, text: String, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => write_artifacts(
            command,
            cfg,
            &[(path.to_path_buf(), text.into_bytes())],
            &sibling(path, ".manifest.json"),
        ),
    }
}

fn read_permutation(path: Option<&Path>) -> Result<Permutation, CliError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    Ok(Permutation::parse_text(&text)?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = resolve_config(&cli)?;
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let name = cli.command.name();
    let out = cli.out.as_deref();
    let table: Table = match &cli.command {
        Command::PopulationCurves => commands::population_curves_table(&cfg, exec)?,
        Command::TemperatureCurves => commands::temperature_curves_table(&cfg, exec)?,
        Command::WorkCurves => commands::work_curves_table(&cfg, exec)?,
        Command::WorkTemperature => commands::work_temperature_table(&cfg)?,
        Command::NoiseSweep => commands::noise_sweep_table(&cfg, exec)?,
        Command::Suboptimal => commands::suboptimal_table(&cfg, exec)?,
        Command::SuboptimalWork => commands::suboptimal_work_table(&cfg, exec)?,
        Command::GatecountScaling => commands::gatecount_table(&cfg)?,
        Command::Analyze { qubits } => commands::analyze_table(&cfg, *qubits)?,
        Command::Synth { permutation } => {
            let perm = read_permutation(permutation.as_deref())?;
            let text = commands::synth_text(&perm, &commands::cnot_model(&cfg)?);
            return emit_text(name, &cfg, text, out);
        }
        Command::Protocol { qubits } => {
            return emit_text(name, &cfg, commands::protocol_text(&cfg, *qubits)?, out);
        }
        Command::Profiles => {
            let mut text = String::new();
            for (profile, entries) in config::PROFILES {
                let body: Vec<String> = entries.iter().map(|(k, v)| format!("{k}={v}")).collect();
                text.push_str(&format!("{profile}: {}\n", body.join(" ")));
            }
            return emit_text(name, &cfg, text, out);
        }
    };
    emit_table(name, &cfg, &table, out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dyncool: {e}");
            e.exit_code()
        }
    }
}
