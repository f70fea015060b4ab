// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand};

use crate::config::{ScenarioConfig, ScenarioName};
use crate::output::verify_dir;
use crate::{scenarios, CliError, OUT_DIR_ENV};

#[derive(Debug, Parser)]
#[command(name = "sqlaser", version, about = "Squeezed-vacuum laser scenarios")]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full three-level model against the effective two-level interaction.
    ValidateEffective(RunArgs),
    /// Sequential atom injection building the squeezed field.
    RunLaser(RunArgs),
    /// Generalized coherent state next to the ideal squeezed vacuum.
    CompareStates(RunArgs),
    /// Engineered-reservoir fidelity swept over the residual decay rate.
    ReservoirBaseline(RunArgs),
    /// Re-hash the data files listed in a run manifest.
    Verify {
        /// Directory holding manifest.json.
        dir: PathBuf,
    },
    /// Run several configs (each naming its scenario) on a worker pool.
    Sweep(SweepArgs),
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// TOML config file; every key is optional.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (default: `$SQLASER_OUT_DIR/<scenario>`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override a config key, e.g. `--set lambda.delta_g1=1000`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    #[arg(long = "config", required = true)]
    pub configs: Vec<PathBuf>,
    /// Parent directory; each run writes to `<out>/<config stem>`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override applied to every config.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
}

fn default_base() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("sqlaser-out"))
}

/// `--out`, then `output.dir`, then the default base joined with the
/// scenario name.
pub fn output_dir(flag: Option<&Path>, cfg: &ScenarioConfig, name: ScenarioName) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| default_base().join(name.as_str()))
}

fn run_one(name: ScenarioName, args: &RunArgs) -> Result<PathBuf, CliError> {
    let cfg = ScenarioConfig::load(args.config.as_deref(), &args.set)?.for_scenario(name)?;
    cfg.validate()?;
    let dir = output_dir(args.out.as_deref(), &cfg, name);
    let manifest = scenarios::run(&cfg, &dir)?;
    for w in &manifest.warnings {
        eprintln!("warning: {w}");
    }
    Ok(dir)
}

fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let base = args.out.clone().unwrap_or_else(default_base);
    let mut jobs = Vec::new();
    for (i, path) in args.configs.iter().enumerate() {
        let cfg = ScenarioConfig::load(Some(path), &args.set)?;
        let name = cfg.scenario_name()?;
        cfg.validate()?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| name.to_string());
        let unique = if args.configs[..i].iter().any(|p| p.file_stem() == path.file_stem()) {
            format!("{stem}-{i}")
        } else {
            stem
        };
        jobs.push((cfg, base.join(unique)));
    }
    let workers = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .clamp(1, jobs.len().max(1));
    let next = AtomicUsize::new(0);
    let failures: Mutex<Vec<(PathBuf, CliError)>> = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some((cfg, dir)) = jobs.get(k) else { break };
                match scenarios::run(cfg, dir) {
                    Ok(_) => println!("{}", dir.display()),
                    Err(e) => failures.lock().expect("no panics while held").push((dir.clone(), e)),
                }
            });
        }
    });
    let mut failures = failures.into_inner().expect("workers joined");
    failures.sort_by_key(|(_, e)| std::cmp::Reverse(e.exit_code()));
    for (dir, e) in &failures {
        eprintln!("{}: {e}", dir.display());
    }
    match failures.into_iter().next() {
        Some((_, e)) => Err(e),
        None => Ok(()),
    }
}

/// Runs the parsed command and returns the process exit code.
pub fn main_with(args: Args) -> i32 {
    let result = match &args.command {
        Command::ValidateEffective(a) => run_one(ScenarioName::ValidateEffective, a).map(report),
        Command::RunLaser(a) => run_one(ScenarioName::RunLaser, a).map(report),
        Command::CompareStates(a) => run_one(ScenarioName::CompareStates, a).map(report),
        Command::ReservoirBaseline(a) => run_one(ScenarioName::ReservoirBaseline, a).map(report),
        Command::Verify { dir } => verify_dir(dir).and_then(|bad| {
            if bad.is_empty() {
                println!("all checksums match");
                Ok(())
            } else {
                Err(CliError::Verify(format!("mismatched files: {}", bad.join(", "))))
            }
        }),
        Command::Sweep(a) => sweep(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn report(dir: PathBuf) {
    println!("{}", dir.display());
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Args::command().debug_assert();
    }

    #[test]
    fn parses_scenario_flags() {
        let a = Args::try_parse_from([
            "sqlaser",
            "run-laser",
            "--config",
            "c.toml",
            "--set",
            "laser.loss_c=0.3",
            "--set",
            "truncation.dim=30",
        ])
        .unwrap();
        match a.command {
            Command::RunLaser(r) => {
                assert_eq!(r.config.as_deref(), Some(Path::new("c.toml")));
                assert_eq!(r.set.len(), 2);
                assert!(r.out.is_none());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn out_flag_wins() {
        let cfg = ScenarioConfig {
            output: crate::config::OutputSection {
                dir: Some("from-config".into()),
            },
            ..Default::default()
        };
        let name = ScenarioName::RunLaser;
        assert_eq!(output_dir(Some(Path::new("x")), &cfg, name), PathBuf::from("x"));
        assert_eq!(output_dir(None, &cfg, name), PathBuf::from("from-config"));
    }
}
