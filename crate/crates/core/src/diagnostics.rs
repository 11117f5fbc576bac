//! Certificates computed from problems and run records: KKT residuals,
//! discrete energies, merit-function estimates, Pareto-set distances and the
//! `O(k^-2)` rate check for the accelerated method.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::problem::MoProblem;
use crate::simplex;
use crate::solvers::RunRecord;

/// `||proj_{C(x)}(0)||`, zero exactly at Pareto critical points.
pub fn kkt_residual(p: &MoProblem, x: &[f64]) -> Result<f64> {
    let eval = p.evaluate_all(x)?;
    let (_, element) = simplex::min_norm_element(&eval.gradients, simplex::DEFAULT_TOL)?;
    Ok(linalg::norm(&element))
}

/// `min_i f_i(x^k) - f_i(z)`.
pub fn sigma_k(values_k: &[f64], values_z: &[f64]) -> f64 {
    assert_eq!(
        values_k.len(),
        values_z.len(),
        "value vectors differ in length"
    );
    values_k
        .iter()
        .zip(values_z)
        .map(|(a, b)| a - b)
        .fold(f64::INFINITY, f64::min)
}

/// `max_{z in Z} min_i f_i(x) - f_i(z)`: a lower bound of the merit function
/// `u_0(x) = sup_z min_i f_i(x) - f_i(z)`.
pub fn u0_estimate(p: &MoProblem, x: &[f64], reference: &[Vec<f64>]) -> Result<f64> {
    if reference.is_empty() {
        return Err(Error::InvalidProblem(
            "reference set must be nonempty".into(),
        ));
    }
    let fx = p.evaluate_values(x)?;
    let mut best = f64::NEG_INFINITY;
    for z in reference {
        best = best.max(sigma_k(&fx, &p.evaluate_values(z)?));
    }
    Ok(best)
}

/// Distance from `x` to the problem's known Pareto set.
pub fn pareto_distance(p: &MoProblem, x: &[f64]) -> Result<f64> {
    p.known_pareto()
        .map(|set| set.distance(x))
        .ok_or_else(|| Error::Unsupported(format!("problem {} has no known Pareto set", p.name())))
}

/// Which kinetic term an energy uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyKind {
    /// `||x^k - x^{k-1}||^2 / (2 h^2)` for the inertial method.
    InertialH2,
    /// `||x^k - x^{k-1}||^2 / (2 s)` for the accelerated methods.
    AcceleratedS,
}

/// `E_{i,k} = f_i(x^k) + kinetic(x^k - x^{k-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTrace {
    pub kind: EnergyKind,
    /// `energies[k-1][i]`.
    pub energies: Vec<Vec<f64>>,
    /// `deltas[k-1][i] = E_{i,k+1} - E_{i,k}`; one shorter than `energies`.
    pub deltas: Vec<Vec<f64>>,
}

impl EnergyTrace {
    pub fn max_delta(&self) -> f64 {
        self.deltas
            .iter()
            .flatten()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Fill the energies of a run. `h_or_s` is `h` for [`EnergyKind::InertialH2`]
/// and `s` for [`EnergyKind::AcceleratedS`].
pub fn energy_trace(run: &RunRecord, kind: EnergyKind, h_or_s: f64) -> Result<EnergyTrace> {
    if run.step_norms_sq.len() != run.values.len() {
        return Err(Error::Unsupported(
            "run record does not carry per-iteration step norms".into(),
        ));
    }
    let denom = match kind {
        EnergyKind::InertialH2 => 2.0 * h_or_s * h_or_s,
        EnergyKind::AcceleratedS => 2.0 * h_or_s,
    };
    let energies: Vec<Vec<f64>> = run
        .values
        .iter()
        .zip(&run.step_norms_sq)
        .map(|(f, d)| f.iter().map(|fi| fi + d / denom).collect())
        .collect();
    let deltas = energies
        .windows(2)
        .map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect())
        .collect();
    Ok(EnergyTrace {
        kind,
        energies,
        deltas,
    })
}

/// Largest violation of `E_{i,k+1} - E_{i,k} <= -(3 / (2 s (k + 2))) ||x^k - x^{k-1}||^2`
/// over all `i, k` (nonpositive when the inequality holds everywhere).
pub fn accelerated_energy_violation(run: &RunRecord, s: f64) -> Result<f64> {
    let trace = energy_trace(run, EnergyKind::AcceleratedS, s)?;
    let mut worst = f64::NEG_INFINITY;
    for (idx, delta) in trace.deltas.iter().enumerate() {
        let k = (idx + 1) as f64;
        let bound = -3.0 / (2.0 * s * (k + 2.0)) * run.step_norms_sq[idx];
        for d in delta {
            worst = worst.max(d - bound);
        }
    }
    Ok(worst)
}

/// Largest `f_i(x^k) - f_i(x^1)` over the run.
pub fn level_set_violation(run: &RunRecord) -> f64 {
    let Some(first) = run.values.first() else {
        return 0.0;
    };
    run.values
        .iter()
        .flat_map(|v| v.iter().zip(first).map(|(a, b)| a - b))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Per-iterate merit estimates against a finite reference set.
#[derive(Debug, Clone, PartialEq)]
pub struct MeritEstimate {
    pub reference: Vec<Vec<f64>>,
    /// `sigma_values[k-1][j] = sigma_k(z_j)`.
    pub sigma_values: Vec<Vec<f64>>,
    /// `u0_hat[k-1] = max_j sigma_k(z_j)`.
    pub u0_hat: Vec<f64>,
}

pub fn merit_estimate(
    p: &MoProblem,
    run: &RunRecord,
    reference: &[Vec<f64>],
) -> Result<MeritEstimate> {
    if reference.is_empty() {
        return Err(Error::InvalidProblem(
            "reference set must be nonempty".into(),
        ));
    }
    let ref_values = reference
        .iter()
        .map(|z| p.evaluate_values(z))
        .collect::<Result<Vec<_>>>()?;
    let sigma_values: Vec<Vec<f64>> = run
        .values
        .iter()
        .map(|fk| ref_values.iter().map(|fz| sigma_k(fk, fz)).collect())
        .collect();
    let u0_hat = sigma_values
        .iter()
        .map(|row| row.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    Ok(MeritEstimate {
        reference: reference.to_vec(),
        sigma_values,
        u0_hat,
    })
}

/// Absolute slack allowed by [`check_rate_bound`].
pub const RATE_SLACK: f64 = 1e-9;

/// Outcome of [`check_rate_bound`]. Margins are `bound - observed`, so
/// nonnegative margins mean the bound holds.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    /// `sigma_margins[k-1][j]` for reference point `z_j`.
    pub sigma_margins: Vec<Vec<f64>>,
    /// `4 R / s - u0_hat(x^k) (k + 1)^2` per iterate.
    pub u0_margins: Vec<f64>,
    /// Finite-sample `R = max_{j in {1,2}, z in Z} ||x^j - z||^2`.
    pub r_hat: f64,
    pub worst_sigma_margin: f64,
    pub worst_u0_margin: f64,
    pub passed: bool,
}

/// Check `sigma_k(z) <= 2 (||x^1 - z||^2 + ||x^2 - z||^2) / (s (k + 1)^2)`
/// for every recorded `k` and `z`, and `u0_hat(x^k) (k + 1)^2 <= 4 R / s`.
pub fn check_rate_bound(
    p: &MoProblem,
    run: &RunRecord,
    reference: &[Vec<f64>],
    s: f64,
) -> Result<RateReport> {
    let x1 = run
        .iterate(1)
        .ok_or_else(|| Error::Unsupported("run record lacks x^1".into()))?;
    let x2 = run.iterate(2).unwrap_or(x1);
    let merit = merit_estimate(p, run, reference)?;
    let numerators: Vec<f64> = reference
        .iter()
        .map(|z| 2.0 * (linalg::dist_sq(x1, z) + linalg::dist_sq(x2, z)))
        .collect();
    let r_hat = reference
        .iter()
        .map(|z| linalg::dist_sq(x1, z).max(linalg::dist_sq(x2, z)))
        .fold(0.0, f64::max);

    let mut sigma_margins = Vec::with_capacity(run.values.len());
    let mut u0_margins = Vec::with_capacity(run.values.len());
    for (idx, row) in merit.sigma_values.iter().enumerate() {
        let k1 = (idx + 2) as f64;
        let denom = s * k1 * k1;
        sigma_margins.push(
            row.iter()
                .zip(&numerators)
                .map(|(sig, num)| num / denom - sig)
                .collect::<Vec<f64>>(),
        );
        u0_margins.push(4.0 * r_hat / s - merit.u0_hat[idx] * k1 * k1);
    }
    let worst_sigma_margin = sigma_margins
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let worst_u0_margin = u0_margins.iter().copied().fold(f64::INFINITY, f64::min);
    let passed = worst_sigma_margin >= -RATE_SLACK && worst_u0_margin >= -RATE_SLACK;
    Ok(RateReport {
        sigma_margins,
        u0_margins,
        r_hat,
        worst_sigma_margin,
        worst_u0_margin,
        passed,
    })
}
