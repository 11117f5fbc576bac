//! Cross-check of the simplex least-squares solver against the brute-force
//! grid oracle on seeded random instances.

use std::time::{Duration, Instant};

use moaccel::simplex::oracle::brute_force_simplex_oracle;
use moaccel::simplex::{HullProblem, DEFAULT_TOL};
use moaccel::solve_hull_least_squares;
use moaccel::suite::SeededUniform;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCase {
    pub m: usize,
    pub n: usize,
    pub solver: f64,
    pub oracle: f64,
}

impl OracleCase {
    pub fn abs_diff(&self) -> f64 {
        (self.solver - self.oracle).abs()
    }
}

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub cases: Vec<OracleCase>,
    pub elapsed: Duration,
}

impl OracleReport {
    pub fn max_abs_diff(&self) -> f64 {
        self.cases
            .iter()
            .map(OracleCase::abs_diff)
            .fold(0.0, f64::max)
    }
}

/// Random instance with columns and target in `[-1, 1]^n`.
pub fn random_hull_problem(rng: &mut SeededUniform, m: usize, n: usize) -> HullProblem {
    let columns = (0..m).map(|_| rng.point_in_box(n, -1.0, 1.0)).collect();
    let target = rng.point_in_box(n, -1.0, 1.0);
    HullProblem::new(columns, target).expect("finite random instance")
}

/// `count` instances cycling through `m in {2, 3}` and `n in {2, 5, 20}`.
pub fn run_oracle_suite(count: usize, seed: u64, resolution: f64) -> Result<OracleReport> {
    const SHAPES: [(usize, usize); 6] = [(2, 2), (2, 5), (2, 20), (3, 2), (3, 5), (3, 20)];
    let start = Instant::now();
    let mut rng = SeededUniform::new(seed);
    let mut cases = Vec::with_capacity(count);
    for idx in 0..count {
        let (m, n) = SHAPES[idx % SHAPES.len()];
        let hp = random_hull_problem(&mut rng, m, n);
        let solver = solve_hull_least_squares(&hp, DEFAULT_TOL)?.objective;
        let oracle = brute_force_simplex_oracle(&hp, resolution)?;
        cases.push(OracleCase {
            m,
            n,
            solver,
            oracle,
        });
    }
    Ok(OracleReport {
        cases,
        elapsed: start.elapsed(),
    })
}
