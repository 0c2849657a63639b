// Copyright 2026 The kitten-core Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kitten_cli::commands::{self, GridKind};
use kitten_cli::config::RunConfig;
use kitten_cli::error::{CliError, Origin};

#[derive(Parser, Debug)]
#[command(name = "kitten", version, about = "Batch driver for qubit-oscillator kitten-state simulations")]
struct Cli {
    /// key=value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one configuration key (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    sets: Vec<String>,
    /// Worker threads (0 = all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Entropy, Wehrl entropy, negativity and purity over the configured times
    Evolve,
    /// Phase-space dump with a sidecar of functionals
    Grid {
        #[arg(long, value_enum)]
        kind: GridKind,
    },
    /// Quadrature means and covariances
    Moments,
    /// Fit a p-kitten ensemble, or score a given one
    Reconstruct {
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long)]
        ensemble: Option<PathBuf>,
    },
    /// Moment-matched thermal mixture, or a given one, against the state
    ThermalCompare {
        #[arg(long, default_value_t = 4)]
        count: usize,
        #[arg(long)]
        ensemble: Option<PathBuf>,
    },
    /// Cross-module identity checks; nonzero exit on any failure
    Validate,
    /// Print the effective configuration in canonical form
    ShowConfig,
}

fn load(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::parse(&std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?)?,
        None => RunConfig::default(),
    };
    for (k, s) in cli.sets.iter().enumerate() {
        let origin = Origin::Override(k + 1);
        let (key, value) =
            s.split_once('=').ok_or_else(|| CliError::parse(origin.clone(), format!("expected key=value, got {s:?}")))?;
        cfg.set(key.trim(), value.trim(), origin)?;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    Ok(cfg)
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<(), CliError> {
    let written = match &cli.cmd {
        Cmd::Evolve => commands::evolve(cfg)?,
        Cmd::Grid { kind } => commands::grid(cfg, *kind)?,
        Cmd::Moments => commands::moments(cfg)?,
        Cmd::Reconstruct { p, ensemble } => commands::reconstruct(cfg, *p, ensemble.as_deref())?,
        Cmd::ThermalCompare { count, ensemble } => commands::thermal_compare(cfg, *count, ensemble.as_deref())?,
        Cmd::Validate => return commands::validate(cfg),
        Cmd::ShowConfig => {
            print!("{}", cfg.serialize());
            return Ok(());
        }
    };
    for p in written {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load(&cli).and_then(|cfg| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
        pool.install(|| run(&cli, &cfg))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kitten: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
