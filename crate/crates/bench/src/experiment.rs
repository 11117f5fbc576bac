//! Batch execution of (solver, start) cells and their on-disk artifacts.
//!
//! Layout under the output directory:
//!
//! ```text
//! summary.json
//! traces/<solver>/start_<id>.csv
//! plot/*.csv            (when outputs.plot_data is set)
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use moaccel::diagnostics::{self, EnergyKind};
use moaccel::{run_with, Method, MoProblem, RunOptions, RunRecord, TerminationReason, Thinning};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, SolverEntry};
use crate::error::{io_err, BenchError, Result};

/// One (solver, start) outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub solver: String,
    pub start_id: usize,
    /// Index of the last iterate reached, `x^{k_final}`.
    pub iterations: usize,
    pub termination: TerminationReason,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub final_values: Vec<f64>,
    pub final_kkt_residual: Option<f64>,
    pub final_pareto_distance: Option<f64>,
    pub wall_time_s: f64,
}

impl SummaryRow {
    pub fn failed(&self) -> bool {
        self.termination == TerminationReason::EvalFailure || self.error.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverTotals {
    pub solver: String,
    pub runs: usize,
    pub total_iterations: usize,
    pub failures: usize,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub name: String,
    pub problem: String,
    pub dim: usize,
    pub num_objectives: usize,
    pub rows: Vec<SummaryRow>,
    pub totals: Vec<SolverTotals>,
}

impl Summary {
    pub fn totals_for(&self, solver: &str) -> Option<&SolverTotals> {
        self.totals.iter().find(|t| t.solver == solver)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.failed()).count()
    }
}

/// In-memory result of one cell: the summary row and the run it came from.
#[derive(Debug, Clone)]
pub struct Cell {
    pub row: SummaryRow,
    pub record: Option<RunRecord>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub summary: Summary,
    pub starts: Vec<Vec<f64>>,
    pub cells: Vec<Cell>,
}

/// Execution knobs that are not part of the experiment itself.
#[derive(Debug, Clone, Default)]
pub struct RunSettings {
    /// Overrides `outputs.dir`.
    pub out_dir: Option<PathBuf>,
    /// Worker threads; `0` means the rayon default.
    pub threads: usize,
}

fn solve_cell(p: &MoProblem, entry: &SolverEntry, start_id: usize, x0: &[f64]) -> Cell {
    let name = entry.name();
    match run_with(
        p,
        x0,
        &entry.config,
        RunOptions {
            record_kkt: true,
            thinning: Thinning::Auto,
        },
    ) {
        Ok(record) => {
            let row = SummaryRow {
                solver: name,
                start_id,
                iterations: record.k_final(),
                termination: record.termination.reason,
                error: record.termination.detail.clone(),
                final_values: record.final_values().to_vec(),
                final_kkt_residual: record
                    .kkt_residuals
                    .as_ref()
                    .and_then(|k| k.last().copied()),
                final_pareto_distance: diagnostics::pareto_distance(p, record.final_point()).ok(),
                wall_time_s: record.solve_time.as_secs_f64(),
            };
            Cell {
                row,
                record: Some(record),
            }
        }
        Err(e) => Cell {
            row: SummaryRow {
                solver: name,
                start_id,
                iterations: 0,
                termination: TerminationReason::EvalFailure,
                error: Some(e.to_string()),
                final_values: Vec::new(),
                final_kkt_residual: None,
                final_pareto_distance: None,
                wall_time_s: 0.0,
            },
            record: None,
        },
    }
}

/// Run every cell of `cfg` and return the results without touching disk.
pub fn execute(cfg: &ExperimentConfig, threads: usize) -> Result<ExperimentResult> {
    cfg.validate()?;
    let problem = cfg.problem.build()?;
    let starts = cfg.starts.materialize(problem.dim());
    let jobs: Vec<(usize, usize)> = (0..cfg.solvers.len())
        .flat_map(|s| (0..starts.len()).map(move |i| (s, i)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| BenchError::Config(format!("cannot build thread pool: {e}")))?;
    let cells: Vec<Cell> = pool.install(|| {
        jobs.par_iter()
            .map(|&(s, i)| solve_cell(&problem, &cfg.solvers[s], i, &starts[i]))
            .collect()
    });
    let totals = cfg
        .solvers
        .iter()
        .map(|entry| {
            let name = entry.name();
            let rows: Vec<&SummaryRow> = cells
                .iter()
                .map(|c| &c.row)
                .filter(|r| r.solver == name)
                .collect();
            SolverTotals {
                runs: rows.len(),
                total_iterations: rows.iter().map(|r| r.iterations).sum(),
                failures: rows.iter().filter(|r| r.failed()).count(),
                wall_time_s: rows.iter().map(|r| r.wall_time_s).sum(),
                solver: name,
            }
        })
        .collect();
    let summary = Summary {
        name: cfg.name.clone(),
        problem: problem.name().to_string(),
        dim: problem.dim(),
        num_objectives: problem.num_objectives(),
        rows: cells.iter().map(|c| c.row.clone()).collect(),
        totals,
    };
    Ok(ExperimentResult {
        summary,
        starts,
        cells,
    })
}

/// Largest dimension for which traces carry iterate coordinates.
pub const TRACE_COORDINATE_MAX_DIM: usize = 8;

/// Energy kind and parameter used for the optional energy columns.
fn energy_parameter(entry: &SolverEntry) -> (EnergyKind, f64) {
    match (entry.config.method, entry.config.h) {
        (Method::Inertial, Some(h)) => (EnergyKind::InertialH2, h),
        _ => (EnergyKind::AcceleratedS, entry.config.step_size),
    }
}

/// Trace rows kept for output: `k = 1 mod thin` and the last one.
pub fn trace_ks(len: usize, thin: usize) -> Vec<usize> {
    let mut ks: Vec<usize> = (1..=len).filter(|k| (k - 1) % thin == 0).collect();
    if len > 0 && ks.last() != Some(&len) {
        ks.push(len);
    }
    ks
}

/// CSV trace of one run: `k, f_1..f_m, step_size, kkt_residual,
/// [energy_1..energy_m], [x_1..x_n]`.
pub fn trace_csv(
    record: &RunRecord,
    entry: &SolverEntry,
    thin: usize,
    energy: bool,
) -> Result<String> {
    let m = record.values.first().map_or(0, Vec::len);
    let n = record.dim;
    let coords = n <= TRACE_COORDINATE_MAX_DIM;
    let energies = if energy {
        let (kind, param) = energy_parameter(entry);
        Some(diagnostics::energy_trace(record, kind, param)?.energies)
    } else {
        None
    };
    let mut out = String::from("k");
    for i in 1..=m {
        let _ = write!(out, ",f_{i}");
    }
    out.push_str(",step_size,kkt_residual");
    if energies.is_some() {
        for i in 1..=m {
            let _ = write!(out, ",energy_{i}");
        }
    }
    if coords {
        for j in 1..=n {
            let _ = write!(out, ",x_{j}");
        }
    }
    out.push('\n');
    for k in trace_ks(record.values.len(), thin) {
        let idx = k - 1;
        let _ = write!(out, "{k}");
        for v in &record.values[idx] {
            let _ = write!(out, ",{v:e}");
        }
        let _ = write!(out, ",{:e}", record.step_sizes[idx]);
        match record.kkt_residuals.as_ref().map(|r| r[idx]) {
            Some(r) => {
                let _ = write!(out, ",{r:e}");
            }
            None => out.push(','),
        }
        if let Some(e) = &energies {
            for v in &e[idx] {
                let _ = write!(out, ",{v:e}");
            }
        }
        if coords {
            let x = record
                .iterate(k)
                .ok_or_else(|| BenchError::Config(format!("iterate {k} was not stored")))?;
            for v in x {
                let _ = write!(out, ",{v:e}");
            }
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn trace_path(dir: &Path, solver: &str, start_id: usize) -> PathBuf {
    dir.join("traces")
        .join(solver)
        .join(format!("start_{start_id:04}.csv"))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    fs::write(path, contents).map_err(io_err(path))
}

/// Write the summary, traces and (optionally) plot bundles of `result`.
pub fn write_outputs(cfg: &ExperimentConfig, result: &ExperimentResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for cell in &result.cells {
        let Some(record) = &cell.record else { continue };
        let entry = cfg
            .solvers
            .iter()
            .find(|e| e.name() == cell.row.solver)
            .ok_or_else(|| BenchError::Config(format!("unknown solver {}", cell.row.solver)))?;
        let csv = trace_csv(record, entry, cfg.outputs.thin, cfg.outputs.energy)?;
        write_file(&trace_path(dir, &cell.row.solver, cell.row.start_id), &csv)?;
    }
    let json = serde_json::to_string_pretty(&result.summary)
        .map_err(|e| BenchError::Config(format!("cannot serialize summary: {e}")))?;
    write_file(&dir.join("summary.json"), &(json + "\n"))?;
    if cfg.outputs.plot_data {
        crate::plot::emit_plot_data(result, &dir.join("plot"))?;
    }
    Ok(())
}

/// Execute `cfg` and write its artifacts. Returns the output directory and
/// the summary.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    settings: &RunSettings,
) -> Result<(PathBuf, Summary)> {
    let dir = settings
        .out_dir
        .clone()
        .unwrap_or_else(|| cfg.outputs.dir.clone());
    let result = execute(cfg, settings.threads)?;
    write_outputs(cfg, &result, &dir)?;
    Ok((dir, result.summary))
}
