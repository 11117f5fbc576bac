//! Multiobjective first-order methods: steepest descent, an inertial
//! discretisation, the accelerated gradient method (with and without its
//! quadratic subproblem), plus the test problems and diagnostics used to
//! study them.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod diagnostics;
pub mod error;
pub mod linalg;
pub mod problem;
pub mod simplex;
pub mod solvers;
pub mod suite;

pub use error::{Error, Result};
pub use problem::{Evaluation, MoProblem, Objective, ParetoSet};
pub use simplex::{
    min_norm_element, solve_hull_least_squares, HullProblem, HullSolution, SimplexWeights,
};
pub use solvers::{
    run, run_with, Method, RunOptions, RunRecord, SolverConfig, Termination, TerminationReason,
    Thinning,
};
