//! Brute-force reference for the simplex least-squares problem.
//!
//! Enumerates a barycentric grid of the simplex, then refines the best grid
//! point with exact pairwise line searches (moving weight between two
//! coordinates at a time). Shares no code with the face-enumeration solver.

use super::HullProblem;
use crate::error::{Error, Result};

const REFINE_MAX_STEPS: usize = 1_000_000;

/// Minimum of `||sum theta_i c_i - t||^2` over a barycentric grid with the
/// given `resolution`, followed by local refinement.
///
/// Only `m <= 4` is accepted; the grid has `O(resolution^(1-m))` points.
pub fn brute_force_simplex_oracle(hp: &HullProblem, resolution: f64) -> Result<f64> {
    let m = hp.num_columns();
    if m > 4 {
        return Err(Error::OracleTooLarge(m));
    }
    assert!(
        resolution > 0.0 && resolution <= 1.0,
        "grid resolution must lie in (0, 1]"
    );
    let cols = hp.columns();
    let t = hp.target();
    let inner = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut g = [[0.0f64; 4]; 4];
    let mut b = [0.0f64; 4];
    for i in 0..m {
        for j in 0..m {
            g[i][j] = inner(&cols[i], &cols[j]);
        }
        b[i] = inner(&cols[i], t);
    }
    let tt = inner(t, t);
    let eval = |theta: &[f64; 4]| -> f64 {
        let mut q = tt;
        for i in 0..m {
            q -= 2.0 * b[i] * theta[i];
            for j in 0..m {
                q += theta[i] * g[i][j] * theta[j];
            }
        }
        q
    };

    let steps = (1.0 / resolution).round() as usize;
    let mut best_theta = [0.0f64; 4];
    let mut best = f64::INFINITY;
    let mut counts = [0usize; 4];
    grid_walk(m, 0, steps, &mut counts, &mut |counts| {
        let mut theta = [0.0f64; 4];
        for i in 0..m {
            theta[i] = counts[i] as f64 / steps as f64;
        }
        let v = eval(&theta);
        if v < best {
            best = v;
            best_theta = theta;
        }
    });

    // Exact line search along e_i - e_j for the most violating pair.
    let mut theta = best_theta;
    for _ in 0..REFINE_MAX_STEPS {
        let mut grad = [0.0f64; 4];
        for i in 0..m {
            grad[i] = (0..m).map(|j| g[i][j] * theta[j]).sum::<f64>() - b[i];
        }
        let up = (0..m)
            .min_by(|&i, &j| grad[i].total_cmp(&grad[j]))
            .unwrap_or(0);
        let down = (0..m)
            .filter(|&j| theta[j] > 0.0)
            .max_by(|&i, &j| grad[i].total_cmp(&grad[j]))
            .unwrap_or(0);
        if up == down || grad[down] - grad[up] <= 1e-17 {
            break;
        }
        // objective along theta + s (e_up - e_down) has slope
        // 2 (grad_up - grad_down) and curvature 2 ||c_up - c_down||^2
        let curvature = g[up][up] - 2.0 * g[up][down] + g[down][down];
        let slope = grad[up] - grad[down];
        let mut s = if curvature > 0.0 {
            -slope / curvature
        } else {
            theta[down]
        };
        s = s.min(theta[down]);
        if !(s > 0.0) {
            break;
        }
        theta[up] += s;
        theta[down] -= s;
        if theta[down] < 1e-300 {
            theta[down] = 0.0;
        }
    }
    let refined = hp.objective(&theta[..m]);
    Ok(refined.min(best))
}

fn grid_walk(
    m: usize,
    depth: usize,
    remaining: usize,
    counts: &mut [usize; 4],
    visit: &mut impl FnMut(&[usize; 4]),
) {
    if depth + 1 == m {
        counts[depth] = remaining;
        visit(counts);
        return;
    }
    for c in 0..=remaining {
        counts[depth] = c;
        grid_walk(m, depth + 1, remaining - c, counts, visit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_and_symmetric_cases() {
        let e = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let hp = HullProblem::new(e.clone(), vec![1.0, 0.0]).unwrap();
        assert!(brute_force_simplex_oracle(&hp, 1e-3).unwrap().abs() < 1e-15);
        let hp = HullProblem::new(e, vec![0.0, 0.0]).unwrap();
        assert!((brute_force_simplex_oracle(&hp, 1e-3).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_edge_value() {
        let hp = HullProblem::min_norm(vec![vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let v = brute_force_simplex_oracle(&hp, 1e-2).unwrap();
        assert!((v - 0.8).abs() < 1e-12);
    }

    #[test]
    fn refuses_large_m() {
        let hp = HullProblem::min_norm(vec![vec![1.0]; 5]).unwrap();
        assert_eq!(
            brute_force_simplex_oracle(&hp, 0.1),
            Err(Error::OracleTooLarge(5))
        );
    }
}
