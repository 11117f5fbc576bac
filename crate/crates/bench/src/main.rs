use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use moaccel_bench::oracle::run_oracle_suite;
use moaccel_bench::{run_experiment, BenchError, ExperimentConfig, RunSettings};

/// Run multiobjective solver experiments from JSON configs.
#[derive(Debug, Parser)]
#[command(name = "moaccel", version)]
struct Cli {
    /// Output directory (overrides `outputs.dir`).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Replace every seed in the config.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, value_name = "K", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every (solver, start) cell and write traces and a summary.
    Run { config: PathBuf },
    /// Parse and validate a config without running it.
    Validate { config: PathBuf },
    /// Compare the simplex solver against the brute-force grid oracle.
    Oracle {
        #[arg(long, default_value_t = 500)]
        cases: usize,
        #[arg(long, default_value_t = 1e-3)]
        resolution: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

fn load(path: &PathBuf, seed: Option<u64>) -> Result<ExperimentConfig, BenchError> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(seed) = seed {
        cfg.override_seed(seed);
        cfg.validate()?;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run { config } => load(config, cli.seed).and_then(|cfg| {
            let settings = RunSettings {
                out_dir: cli.out.clone(),
                threads: cli.threads,
            };
            let (dir, summary) = run_experiment(&cfg, &settings)?;
            for t in &summary.totals {
                println!(
                    "{:<10} runs {:>4}  iterations {:>8}  failures {:>3}  time {:.3}s",
                    t.solver, t.runs, t.total_iterations, t.failures, t.wall_time_s
                );
            }
            println!("wrote {}", dir.display());
            Ok(if summary.failures() > 0 { 2 } else { 0 })
        }),
        Command::Validate { config } => load(config, cli.seed).map(|cfg| {
            println!("{}: ok ({} solvers)", config.display(), cfg.solvers.len());
            0
        }),
        Command::Oracle {
            cases,
            resolution,
            tol,
        } => run_oracle_suite(*cases, cli.seed.unwrap_or(1), *resolution).map(|report| {
            let worst = report.max_abs_diff();
            println!(
                "{} cases, max |solver - oracle| = {worst:.3e}, {:.2}s",
                report.cases.len(),
                report.elapsed.as_secs_f64()
            );
            if worst <= *tol {
                0
            } else {
                1
            }
        }),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
