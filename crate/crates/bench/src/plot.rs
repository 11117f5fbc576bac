//! Tidy CSV bundles for plotting, keyed `figure_id, series, k, value`.
//!
//! * `iterate_paths.csv`: series `<solver>/start_<id>/x_<j>`, one row per
//!   stored iterate (problems with `n <= 8` only).
//! * `value_curves.csv`: series `<solver>/start_<id>/f_<i>`, one row per
//!   iteration.
//! * `image_scatter.csv`: series `<solver>/f_<i>`, `k` is the start id and
//!   `value` the final objective value.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{io_err, Result};
use crate::experiment::{ExperimentResult, TRACE_COORDINATE_MAX_DIM};

pub const HEADER: &str = "figure_id,series,k,value\n";

fn row(out: &mut String, figure: &str, series: &str, k: usize, value: f64) {
    let _ = writeln!(out, "{figure},{series},{k},{value:e}");
}

pub fn iterate_paths(result: &ExperimentResult) -> String {
    let mut out = String::from(HEADER);
    if result.summary.dim > TRACE_COORDINATE_MAX_DIM {
        return out;
    }
    for cell in &result.cells {
        let Some(rec) = &cell.record else { continue };
        for it in &rec.iterates {
            for (j, v) in it.x.iter().enumerate() {
                let series = format!(
                    "{}/start_{:04}/x_{}",
                    cell.row.solver,
                    cell.row.start_id,
                    j + 1
                );
                row(&mut out, "iterate_paths", &series, it.k, *v);
            }
        }
    }
    out
}

pub fn value_curves(result: &ExperimentResult) -> String {
    let mut out = String::from(HEADER);
    for cell in &result.cells {
        let Some(rec) = &cell.record else { continue };
        for (idx, values) in rec.values.iter().enumerate() {
            for (i, v) in values.iter().enumerate() {
                let series = format!(
                    "{}/start_{:04}/f_{}",
                    cell.row.solver,
                    cell.row.start_id,
                    i + 1
                );
                row(&mut out, "value_curves", &series, idx + 1, *v);
            }
        }
    }
    out
}

pub fn image_scatter(result: &ExperimentResult) -> String {
    let mut out = String::from(HEADER);
    for r in &result.summary.rows {
        for (i, v) in r.final_values.iter().enumerate() {
            row(
                &mut out,
                "image_scatter",
                &format!("{}/f_{}", r.solver, i + 1),
                r.start_id,
                *v,
            );
        }
    }
    out
}

/// Write the three bundles into `dir`.
pub fn emit_plot_data(result: &ExperimentResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for (name, body) in [
        ("iterate_paths.csv", iterate_paths(result)),
        ("value_curves.csv", value_curves(result)),
        ("image_scatter.csv", image_scatter(result)),
    ] {
        let path = dir.join(name);
        fs::write(&path, body).map_err(io_err(&path))?;
    }
    Ok(())
}
