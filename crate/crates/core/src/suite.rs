//! Test problems: the log-sum-exp family, the Witting biobjective problem,
//! quadratic oracles with analytic Pareto sets and single-objective wrappers.
//!
//! Random data comes from [`SeededUniform`], a SplitMix64 stream mapped to
//! `[0, 1)` with the top 53 bits. It is stable across platforms and crate
//! versions, so a seed fully determines every generated matrix and start.

use std::sync::Arc;

use rand_core::RngCore;
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::problem::{MoProblem, Objective, ParetoSet};

/// Uniform reals from a SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct SeededUniform {
    inner: SplitMix64,
}

impl SeededUniform {
    pub fn new(seed: u64) -> Self {
        use rand_core::SeedableRng;
        Self {
            inner: SplitMix64::seed_from_u64(seed),
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn next_unit(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[low, high)`.
    pub fn next_in(&mut self, low: f64, high: f64) -> f64 {
        low + (high - low) * self.next_unit()
    }

    pub fn point_in_box(&mut self, dim: usize, low: f64, high: f64) -> Vec<f64> {
        (0..dim).map(|_| self.next_in(low, high)).collect()
    }
}

/// `ln(sum_j exp(<a_j, x>))` for the rows `a_j` of a `p x n` matrix.
#[derive(Debug, Clone)]
pub struct LogSumExp {
    rows: usize,
    cols: usize,
    /// Row-major.
    a: Vec<f64>,
}

impl LogSumExp {
    pub fn new(rows: usize, cols: usize, a: Vec<f64>) -> Self {
        assert_eq!(a.len(), rows * cols, "matrix data does not match its shape");
        assert!(rows > 0 && cols > 0, "matrix must be nonempty");
        Self { rows, cols, a }
    }

    pub fn matrix(&self) -> &[f64] {
        &self.a
    }

    fn logits(&self, x: &[f64]) -> Vec<f64> {
        self.a
            .chunks_exact(self.cols)
            .map(|row| linalg::dot(row, x))
            .collect()
    }

    /// Largest eigenvalue of `A^T A` by power iteration.
    fn gram_spectral_norm(&self) -> f64 {
        let mut v = vec![1.0; self.cols];
        let mut lambda = 0.0;
        for _ in 0..500 {
            let av = self.logits(&v);
            let mut w = vec![0.0; self.cols];
            for (row, s) in self.a.chunks_exact(self.cols).zip(&av) {
                for (wj, aj) in w.iter_mut().zip(row) {
                    *wj += s * aj;
                }
            }
            let nw = linalg::norm(&w);
            if nw == 0.0 {
                return 0.0;
            }
            lambda = nw / linalg::norm(&v);
            v = w.into_iter().map(|x| x / nw).collect();
        }
        lambda
    }
}

impl Objective for LogSumExp {
    fn value(&self, x: &[f64]) -> f64 {
        let z = self.logits(x);
        let shift = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        shift + z.iter().map(|zj| (zj - shift).exp()).sum::<f64>().ln()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.value_and_gradient(x).1
    }

    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let mut z = self.logits(x);
        let shift = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut total = 0.0;
        for zj in z.iter_mut() {
            *zj = (*zj - shift).exp();
            total += *zj;
        }
        let mut grad = vec![0.0; self.cols];
        for (row, w) in self.a.chunks_exact(self.cols).zip(&z) {
            let w = w / total;
            for (gj, aj) in grad.iter_mut().zip(row) {
                *gj += w * aj;
            }
        }
        debug_assert_eq!(z.len(), self.rows);
        (shift + total.ln(), grad)
    }
}

/// Parameters of the random log-sum-exp problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogSumExpSpec {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub seed: u64,
    #[serde(default = "default_box_low")]
    pub box_low: f64,
    #[serde(default = "default_box_high")]
    pub box_high: f64,
}

fn default_box_low() -> f64 {
    -1.0
}

fn default_box_high() -> f64 {
    1.0
}

impl LogSumExpSpec {
    /// Dimensions used in the reference experiments: `n = 20`, `m = 3`, `p = 50`.
    pub fn reference(seed: u64) -> Self {
        Self {
            n: 20,
            m: 3,
            p: 50,
            seed,
            box_low: -1.0,
            box_high: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 || self.p == 0 {
            return Err(Error::InvalidProblem("n, m and p must be positive".into()));
        }
        if !(self.box_low < self.box_high)
            || !self.box_low.is_finite()
            || !self.box_high.is_finite()
        {
            return Err(Error::InvalidProblem(
                "entry box must satisfy low < high".into(),
            ));
        }
        Ok(())
    }
}

/// Generated data of a log-sum-exp instance. The offsets `b^i` are drawn for
/// completeness but do not enter the objectives.
#[derive(Debug, Clone)]
pub struct LogSumExpData {
    pub matrices: Vec<Vec<f64>>,
    pub offsets: Vec<Vec<f64>>,
}

/// Draw `A^i` (row-major, `p x n`) then `b^i` for each objective in turn.
pub fn generate_logsumexp_data(spec: &LogSumExpSpec) -> Result<LogSumExpData> {
    spec.validate()?;
    let mut rng = SeededUniform::new(spec.seed);
    let mut matrices = Vec::with_capacity(spec.m);
    let mut offsets = Vec::with_capacity(spec.m);
    for _ in 0..spec.m {
        matrices.push(rng.point_in_box(spec.p * spec.n, spec.box_low, spec.box_high));
        offsets.push(rng.point_in_box(spec.p, spec.box_low, spec.box_high));
    }
    Ok(LogSumExpData { matrices, offsets })
}

/// `f_i(x) = ln(sum_j exp(<a^i_j, x>))`, `i = 1..m`.
///
/// The Lipschitz hint is `max_i lambda_max(A^i^T A^i) / 2`, which bounds the
/// Hessian `A^T (diag(w) - w w^T) A` of every objective.
pub fn make_logsumexp(spec: &LogSumExpSpec) -> Result<MoProblem> {
    let data = generate_logsumexp_data(spec)?;
    let objectives: Vec<LogSumExp> = data
        .matrices
        .into_iter()
        .map(|a| LogSumExp::new(spec.p, spec.n, a))
        .collect();
    let lipschitz = objectives
        .iter()
        .map(|f| 0.5 * f.gram_spectral_norm())
        .fold(0.0, f64::max);
    let objectives: Vec<Arc<dyn Objective>> = objectives
        .into_iter()
        .map(|f| Arc::new(f) as Arc<dyn Objective>)
        .collect();
    Ok(
        MoProblem::new(format!("logsumexp-{}", spec.seed), spec.n, objectives)?
            .with_lipschitz_hint(lipschitz),
    )
}

/// Parameters of the Witting problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WittingSpec {
    pub lambda: f64,
}

impl Default for WittingSpec {
    fn default() -> Self {
        Self { lambda: 0.6 }
    }
}

/// One of the two Witting objectives; `sign = +1` for `f_1`, `-1` for `f_2`.
#[derive(Debug, Clone)]
struct Witting {
    lambda: f64,
    sign: f64,
}

impl Objective for Witting {
    fn value(&self, x: &[f64]) -> f64 {
        let (p, q) = (x[0] + x[1], x[0] - x[1]);
        0.5 * ((1.0 + p * p).sqrt() + (1.0 + q * q).sqrt() + self.sign * q)
            + self.lambda * (-q * q).exp()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let (p, q) = (x[0] + x[1], x[0] - x[1]);
        let dp = 0.5 * p / (1.0 + p * p).sqrt();
        let dq = 0.5 * q / (1.0 + q * q).sqrt() + 0.5 * self.sign
            - 2.0 * self.lambda * q * (-q * q).exp();
        vec![dp + dq, dp - dq]
    }
}

/// Nonconvex biobjective problem on `R^2` whose Pareto set is the line
/// `x_1 + x_2 = 0`.
pub fn make_witting(spec: &WittingSpec) -> Result<MoProblem> {
    if !(spec.lambda >= 0.0) {
        return Err(Error::InvalidProblem("lambda must be nonnegative".into()));
    }
    let objectives: Vec<Arc<dyn Objective>> = vec![
        Arc::new(Witting {
            lambda: spec.lambda,
            sign: 1.0,
        }),
        Arc::new(Witting {
            lambda: spec.lambda,
            sign: -1.0,
        }),
    ];
    // The square-root terms have Hessian norm at most 1; the Gaussian bump
    // contributes at most 4 lambda along (1, -1).
    let lipschitz = 1.0 + 4.0 * spec.lambda;
    Ok(MoProblem::new("witting", 2, objectives)?
        .with_lipschitz_hint(lipschitz)
        .with_known_pareto(ParetoSet::Hyperplane {
            normal: vec![1.0, 1.0],
            offset: 0.0,
        }))
}

/// `f(x) = (curvature / 2) ||x - center||^2`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    pub center: Vec<f64>,
    pub curvature: f64,
}

impl Objective for Quadratic {
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * self.curvature * linalg::dist_sq(x, &self.center)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.center)
            .map(|(xi, ci)| self.curvature * (xi - ci))
            .collect()
    }
}

/// A constant function.
#[derive(Debug, Clone)]
pub struct Constant {
    pub dim: usize,
    pub level: f64,
}

impl Objective for Constant {
    fn value(&self, _x: &[f64]) -> f64 {
        self.level
    }

    fn gradient(&self, _x: &[f64]) -> Vec<f64> {
        vec![0.0; self.dim]
    }
}

/// `f_i(x) = ||x - a_i||^2 / 2` for two anchors; the Pareto set is the
/// segment between them and `L = 1`.
pub fn make_quadratic_biobjective(a1: Vec<f64>, a2: Vec<f64>) -> Result<MoProblem> {
    if a1.len() != a2.len() {
        return Err(Error::DimensionMismatch {
            expected: a1.len(),
            got: a2.len(),
        });
    }
    if a1 == a2 {
        return Err(Error::InvalidProblem("anchors must differ".into()));
    }
    let n = a1.len();
    let objectives: Vec<Arc<dyn Objective>> = vec![
        Arc::new(Quadratic {
            center: a1.clone(),
            curvature: 1.0,
        }),
        Arc::new(Quadratic {
            center: a2.clone(),
            curvature: 1.0,
        }),
    ];
    Ok(MoProblem::new("quadratic-biobjective", n, objectives)?
        .with_lipschitz_hint(1.0)
        .with_known_pareto(ParetoSet::Segment { a: a1, b: a2 }))
}

/// Objectives `||x - a_i||^2 / 2` for any number of anchors. The Pareto set
/// (the anchors' convex hull) is only recorded for two anchors.
pub fn make_quadratic_family(anchors: Vec<Vec<f64>>) -> Result<MoProblem> {
    if anchors.len() == 2 {
        let mut it = anchors.into_iter();
        let a1 = it.next().unwrap_or_default();
        let a2 = it.next().unwrap_or_default();
        return make_quadratic_biobjective(a1, a2);
    }
    let n = anchors.first().map_or(0, Vec::len);
    if anchors.iter().any(|a| a.len() != n) {
        return Err(Error::InvalidProblem(
            "anchors must share one dimension".into(),
        ));
    }
    let objectives: Vec<Arc<dyn Objective>> = anchors
        .into_iter()
        .map(|center| {
            Arc::new(Quadratic {
                center,
                curvature: 1.0,
            }) as Arc<dyn Objective>
        })
        .collect();
    Ok(MoProblem::new("quadratic-family", n, objectives)?.with_lipschitz_hint(1.0))
}

/// Objectives that ignore `x` entirely.
pub fn make_constant(dim: usize, levels: &[f64]) -> Result<MoProblem> {
    let objectives: Vec<Arc<dyn Objective>> = levels
        .iter()
        .map(|&level| Arc::new(Constant { dim, level }) as Arc<dyn Objective>)
        .collect();
    Ok(MoProblem::new("constant", dim, objectives)?.with_lipschitz_hint(0.0))
}

/// Wrap a single objective as an `m = 1` problem.
pub fn wrap_single(
    f: impl Objective + 'static,
    dim: usize,
    lipschitz: Option<f64>,
    minimizer: Option<Vec<f64>>,
) -> Result<MoProblem> {
    let mut p = MoProblem::new("single", dim, vec![Arc::new(f)])?;
    if let Some(l) = lipschitz {
        p = p.with_lipschitz_hint(l);
    }
    if let Some(x) = minimizer {
        p = p.with_known_pareto(ParetoSet::Point(x));
    }
    Ok(p)
}

/// `(curvature / 2) ||x - center||^2` as an `m = 1` problem.
pub fn single_quadratic(center: Vec<f64>, curvature: f64) -> Result<MoProblem> {
    let dim = center.len();
    wrap_single(
        Quadratic {
            center: center.clone(),
            curvature,
        },
        dim,
        Some(curvature.abs()),
        Some(center),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witting_at_origin() {
        let p = make_witting(&WittingSpec::default()).unwrap();
        let e = p.evaluate_all(&[0.0, 0.0]).unwrap();
        assert!((e.values[0] - 1.6).abs() < 1e-15);
        assert!((e.values[1] - 1.6).abs() < 1e-15);
        assert_eq!(e.gradients[0], vec![0.5, -0.5]);
        assert_eq!(e.gradients[1], vec![-0.5, 0.5]);
    }

    #[test]
    fn witting_finite_differences_at_origin() {
        let p = make_witting(&WittingSpec::default()).unwrap();
        let g = p.finite_difference_gradient(0, &[0.0, 0.0], 1e-6).unwrap();
        assert!((g[0] - 0.5).abs() < 1e-6 && (g[1] + 0.5).abs() < 1e-6);
    }

    #[test]
    fn witting_symmetry() {
        let p = make_witting(&WittingSpec::default()).unwrap();
        let mut rng = SeededUniform::new(3);
        for _ in 0..100 {
            let x = rng.point_in_box(2, -3.0, 3.0);
            let f1 = p.objective(0).value(&x);
            let f2 = p.objective(1).value(&[x[1], x[0]]);
            assert!((f1 - f2).abs() < 1e-14);
        }
    }

    #[test]
    fn single_row_logsumexp_is_linear() {
        let f = LogSumExp::new(1, 3, vec![1.0, 0.0, 0.0]);
        let (v, g) = f.value_and_gradient(&[0.0, 0.0, 0.0]);
        assert_eq!(v, 0.0);
        assert_eq!(g, vec![1.0, 0.0, 0.0]);
        let (v, g) = f.value_and_gradient(&[2.5, -1.0, 7.0]);
        assert_eq!(v, 2.5);
        assert_eq!(g, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn logsumexp_is_deterministic_and_overflow_safe() {
        let spec = LogSumExpSpec::reference(11);
        let d1 = generate_logsumexp_data(&spec).unwrap();
        let d2 = generate_logsumexp_data(&spec).unwrap();
        assert_eq!(d1.matrices, d2.matrices);
        assert_eq!(d1.offsets, d2.offsets);
        assert!(d1.matrices[0].iter().all(|&a| (-1.0..1.0).contains(&a)));

        let p = make_logsumexp(&spec).unwrap();
        let x = vec![15.0; 20];
        let e = p.evaluate_all(&x).unwrap();
        assert!(e.values.iter().all(|v| v.is_finite()));
        let x = vec![-15.0; 20];
        assert!(p.evaluate_all(&x).is_ok());
        // far beyond the experiment box a naive exp would overflow
        assert!(p.evaluate_all(&[1e3; 20]).is_ok());
    }

    #[test]
    fn logsumexp_lipschitz_hint_bounds_curvature() {
        let spec = LogSumExpSpec::reference(5);
        let p = make_logsumexp(&spec).unwrap();
        let l = p.lipschitz_hint().unwrap();
        assert!(l > 0.0);
        let mut rng = SeededUniform::new(9);
        for _ in 0..50 {
            let x = rng.point_in_box(20, -5.0, 5.0);
            let y = rng.point_in_box(20, -5.0, 5.0);
            let ex = p.evaluate_all(&x).unwrap();
            let ey = p.evaluate_all(&y).unwrap();
            for i in 0..3 {
                let dg = linalg::dist_sq(&ex.gradients[i], &ey.gradients[i]).sqrt();
                assert!(dg <= l * linalg::dist_sq(&x, &y).sqrt() * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn quadratic_biobjective_validation() {
        assert!(make_quadratic_biobjective(vec![1.0], vec![1.0]).is_err());
        assert!(make_quadratic_biobjective(vec![1.0], vec![1.0, 2.0]).is_err());
        let p = make_quadratic_biobjective(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        assert_eq!(p.lipschitz_hint(), Some(1.0));
        assert!(p.known_pareto().unwrap().contains(&[0.3, 0.0], 0.0));
    }

    #[test]
    fn rng_stream_is_stable() {
        // frozen first draws of SplitMix64 seeded with 0
        let mut rng = SeededUniform::new(0);
        let first: Vec<f64> = (0..3).map(|_| rng.next_unit()).collect();
        let mut again = SeededUniform::new(0);
        let second: Vec<f64> = (0..3).map(|_| again.next_unit()).collect();
        assert_eq!(first, second);
        assert!(first.iter().all(|u| (0.0..1.0).contains(u)));
    }
}
