//! Iterative methods as pure step functions plus a generic run loop.
//!
//! * [`Method::Sd`]: multiobjective steepest descent with a constant step,
//!   `x+ = x - s * proj_{C(x)}(0)`.
//! * [`Method::Inertial`]: explicit discretization of the inertial gradient
//!   system with friction `alpha` and time step `h`.
//! * [`Method::AccG`]: accelerated method with momentum `(k-1)/(k+2)`, whose
//!   direction matches the scaled momentum through a simplex least-squares
//!   problem.
//! * [`Method::AccGNoQ`]: the accelerated variant that replaces the
//!   subproblem by `m` inner products and steps along a single gradient.
//! * [`Method::NesterovRef`]: single-objective Nesterov scheme with momentum
//!   `(k-1)/(k+alpha-1)`, used as a reference for `m = 1`.
//!
//! Every run starts from `x^0 = x^1 = x0` with `k = 1`.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::problem::{Evaluation, MoProblem};
use crate::simplex::{self, HullProblem, SimplexWeights};

/// Maximal number of step reductions in one backtracking search.
pub const BACKTRACKING_CAP: u32 = 60;

/// Iterates are stored densely up to this dimension; above it every tenth
/// iterate (plus `x^2` and the last one) is kept.
pub const DENSE_STORAGE_MAX_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "sd")]
    Sd,
    #[serde(rename = "inertial")]
    Inertial,
    #[serde(rename = "accg")]
    AccG,
    #[serde(rename = "accg_noq")]
    AccGNoQ,
    #[serde(rename = "nesterov_ref")]
    NesterovRef,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Sd => "SD",
            Method::Inertial => "Inertial",
            Method::AccG => "AccG",
            Method::AccGNoQ => "AccGNoQ",
            Method::NesterovRef => "NesterovRef",
        }
    }

    fn is_accelerated(self) -> bool {
        matches!(self, Method::AccG | Method::AccGNoQ | Method::NesterovRef)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Backtracking {
    pub s0: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    /// Constant step size `s`; the initial step is `backtracking.s0` when
    /// backtracking is enabled. Unused by the inertial method.
    pub step_size: f64,
    /// Friction of the inertial method, or the Nesterov parameter of the
    /// reference scheme (default 3).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Time step of the inertial method.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    pub max_iters: usize,
    /// Stop once `||f(x^k) - f(x^{k-1})||_inf < tol`.
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backtracking: Option<Backtracking>,
}

impl SolverConfig {
    pub fn new(method: Method, step_size: f64, max_iters: usize, tol: f64) -> Self {
        Self {
            method,
            step_size,
            alpha: None,
            h: None,
            max_iters,
            tol,
            backtracking: None,
        }
    }

    pub fn inertial(alpha: f64, h: f64, max_iters: usize, tol: f64) -> Self {
        Self {
            alpha: Some(alpha),
            h: Some(h),
            ..Self::new(Method::Inertial, h * h, max_iters, tol)
        }
    }

    pub fn with_backtracking(mut self, s0: f64, sigma: f64) -> Self {
        self.backtracking = Some(Backtracking { s0, sigma });
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if !(self.step_size > 0.0) || !self.step_size.is_finite() {
            return bad("step_size must be a positive finite number");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        if !(self.tol >= 0.0) {
            return bad("tol must be nonnegative");
        }
        if let Some(bt) = &self.backtracking {
            if !(bt.s0 > 0.0) || !bt.s0.is_finite() {
                return bad("backtracking.s0 must be positive");
            }
            if !(bt.sigma > 0.0 && bt.sigma < 1.0) {
                return bad("backtracking.sigma must lie in (0, 1)");
            }
        }
        match self.method {
            Method::Inertial => {
                match (self.alpha, self.h) {
                    (Some(a), Some(h)) if a > 0.0 && h > 0.0 => {}
                    _ => return bad("the inertial method needs positive alpha and h"),
                }
                if self.backtracking.is_some() {
                    return bad("backtracking is not available for the inertial method");
                }
            }
            Method::NesterovRef if !(self.nesterov_alpha() >= 3.0) => {
                return bad("the Nesterov reference needs alpha >= 3");
            }
            _ => {}
        }
        Ok(())
    }

    fn initial_step(&self) -> f64 {
        self.backtracking.map_or(self.step_size, |bt| bt.s0)
    }

    fn nesterov_alpha(&self) -> f64 {
        self.alpha.unwrap_or(3.0)
    }
}

/// Subproblem outcome of the last step.
#[derive(Debug, Clone, PartialEq)]
pub enum Choice {
    None,
    Weights(SimplexWeights),
    Index(usize),
}

/// `(x^{k-1}, x^k, k, s_k)` plus the last subproblem outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateState {
    pub x_prev: Vec<f64>,
    pub x_curr: Vec<f64>,
    pub k: usize,
    /// Step size in force; only changes under backtracking.
    pub step: f64,
    pub last_choice: Choice,
}

impl IterateState {
    pub fn initial(x0: Vec<f64>, cfg: &SolverConfig) -> Self {
        Self {
            x_prev: x0.clone(),
            x_curr: x0,
            k: 1,
            step: cfg.initial_step(),
            last_choice: Choice::None,
        }
    }

    fn advance(&self, x_next: Vec<f64>, step: f64, choice: Choice) -> Self {
        Self {
            x_prev: self.x_curr.clone(),
            x_curr: x_next,
            k: self.k + 1,
            step,
            last_choice: choice,
        }
    }
}

/// `x + beta (x - x_prev)`.
fn extrapolate(x: &[f64], x_prev: &[f64], beta: f64) -> Vec<f64> {
    x.iter()
        .zip(x_prev)
        .map(|(xi, pi)| xi + beta * (xi - pi))
        .collect()
}

/// `w - s d`.
fn descend(w: &[f64], s: f64, d: &[f64]) -> Vec<f64> {
    w.iter().zip(d).map(|(wi, di)| wi - s * di).collect()
}

fn momentum_factor(k: usize) -> f64 {
    (k as f64 - 1.0) / (k as f64 + 2.0)
}

fn subproblem(columns: Vec<Vec<f64>>, target: Vec<f64>) -> Result<SimplexWeights> {
    let hp = HullProblem::new(columns, target)?;
    Ok(simplex::solve_hull_least_squares(&hp, simplex::DEFAULT_TOL)?.weights)
}

fn scaled(gradients: &[Vec<f64>], s: f64) -> Vec<Vec<f64>> {
    gradients
        .iter()
        .map(|g| g.iter().map(|v| s * v).collect())
        .collect()
}

/// Step size for `w - s d` under the backtracking rule, starting from
/// `s_prev`; `at_w` must be the evaluation at `w`.
fn backtrack_from(
    p: &MoProblem,
    w: &[f64],
    at_w: &Evaluation,
    d: &[f64],
    s_prev: f64,
    sigma: f64,
) -> Result<f64> {
    let d_norm_sq = linalg::norm_sq(d);
    let slopes: Vec<f64> = at_w.gradients.iter().map(|g| linalg::dot(g, d)).collect();
    let mut tau = s_prev;
    for _ in 0..=BACKTRACKING_CAP {
        let trial = descend(w, tau, d);
        let accepted = match p.evaluate_values(&trial) {
            Ok(values) => values.iter().enumerate().all(|(i, &fi)| {
                let f0 = at_w.values[i];
                let bound = f0 - tau * slopes[i] + 0.5 * tau * d_norm_sq;
                // rounding guard for the exact-equality cases (d = 0,
                // quadratics at s = 1/L)
                fi <= bound + 1e-12 * (1.0 + f0.abs())
            }),
            Err(Error::Evaluation { .. }) => false,
            Err(e) => return Err(e),
        };
        if accepted {
            return Ok(tau);
        }
        tau *= sigma;
    }
    Err(Error::StepSizeUnderflow {
        trials: BACKTRACKING_CAP,
    })
}

/// Smallest `l >= 0` such that `s = sigma^l s_prev` satisfies, for every
/// objective,
/// `f_i(w - s d) <= f_i(w) - s <grad f_i(w), d> + (s / 2) ||d||^2`.
/// Returns that `s`; fails after [`BACKTRACKING_CAP`] reductions.
pub fn backtracking_search(
    p: &MoProblem,
    w: &[f64],
    d: &[f64],
    s_prev: f64,
    sigma: f64,
) -> Result<f64> {
    assert!(sigma > 0.0 && sigma < 1.0, "sigma must lie in (0, 1)");
    assert!(s_prev > 0.0, "previous step size must be positive");
    if !linalg::all_finite(d) {
        return Err(Error::NonFinite("backtracking direction"));
    }
    let at_w = p.evaluate_all(w)?;
    backtrack_from(p, w, &at_w, d, s_prev, sigma)
}

/// Step size to use for `w - s d`: the constant one, or the backtracked one.
fn resolve_step(
    p: &MoProblem,
    st: &IterateState,
    cfg: &SolverConfig,
    w: &[f64],
    at_w: &Evaluation,
    d: &[f64],
) -> Result<f64> {
    match cfg.backtracking {
        Some(bt) => backtrack_from(p, w, at_w, d, st.step, bt.sigma),
        None => Ok(st.step),
    }
}

fn evaluation_at<'a>(
    p: &MoProblem,
    x: &[f64],
    cache: Option<&'a Evaluation>,
    slot: &'a mut Option<Evaluation>,
) -> Result<&'a Evaluation> {
    match cache {
        Some(e) => Ok(e),
        None => Ok(slot.insert(p.evaluate_all(x)?)),
    }
}

fn sd_impl(
    p: &MoProblem,
    st: &IterateState,
    cfg: &SolverConfig,
    cache: Option<&Evaluation>,
) -> Result<IterateState> {
    let mut slot = None;
    let eval = evaluation_at(p, &st.x_curr, cache, &mut slot)?;
    let (weights, direction) = simplex::min_norm_element(&eval.gradients, simplex::DEFAULT_TOL)?;
    let s = resolve_step(p, st, cfg, &st.x_curr, eval, &direction)?;
    let x_next = descend(&st.x_curr, s, &direction);
    Ok(st.advance(x_next, s, Choice::Weights(weights)))
}

fn inertial_impl(
    p: &MoProblem,
    st: &IterateState,
    cfg: &SolverConfig,
    cache: Option<&Evaluation>,
) -> Result<IterateState> {
    let (alpha, h) = match (cfg.alpha, cfg.h) {
        (Some(a), Some(h)) => (a, h),
        _ => {
            return Err(Error::InvalidConfig(
                "inertial method needs alpha and h".into(),
            ))
        }
    };
    let mut slot = None;
    let eval = evaluation_at(p, &st.x_curr, cache, &mut slot)?;
    let h2 = h * h;
    let velocity = linalg::sub(&st.x_curr, &st.x_prev);
    let weights = subproblem(scaled(&eval.gradients, h2), velocity.clone())?;
    let direction = linalg::combine(weights.as_slice(), &eval.gradients);
    let damping = 1.0 / (1.0 + alpha * h);
    let x_next = st
        .x_curr
        .iter()
        .zip(&velocity)
        .zip(&direction)
        .map(|((x, v), d)| x + damping * v - h2 * damping * d)
        .collect();
    Ok(st.advance(x_next, st.step, Choice::Weights(weights)))
}

fn accg_impl(p: &MoProblem, st: &IterateState) -> Result<(Vec<f64>, Evaluation, Vec<f64>)> {
    let beta = momentum_factor(st.k);
    let y = extrapolate(&st.x_curr, &st.x_prev, beta);
    let eval = p.evaluate_all(&y)?;
    let target: Vec<f64> = st
        .x_curr
        .iter()
        .zip(&st.x_prev)
        .map(|(x, xp)| beta * (x - xp))
        .collect();
    Ok((y, eval, target))
}

/// One steepest-descent step: `x+ = x - s * proj_{C(x)}(0)`.
pub fn sd_step(p: &MoProblem, st: &IterateState, cfg: &SolverConfig) -> Result<IterateState> {
    sd_impl(p, st, cfg, None)
}

/// One inertial step:
/// `x+ = x + (x - x_prev)/(1 + alpha h) - h^2/(1 + alpha h) sum theta_i grad f_i(x)`
/// with `theta` minimizing `||h^2 sum theta_i grad f_i(x) - (x - x_prev)||^2`.
pub fn inertial_step(p: &MoProblem, st: &IterateState, cfg: &SolverConfig) -> Result<IterateState> {
    inertial_impl(p, st, cfg, None)
}

/// One step of the accelerated method.
///
/// `y = x + beta (x - x_prev)` with `beta = (k-1)/(k+2)`; `theta` minimizes
/// `||s sum theta_i grad f_i(y) - beta (x - x_prev)||^2` over the simplex and
/// `x+ = y - s sum theta_i grad f_i(y)`.
pub fn accg_step(p: &MoProblem, st: &IterateState, cfg: &SolverConfig) -> Result<IterateState> {
    let (y, eval, target) = accg_impl(p, st)?;
    let weights = subproblem(scaled(&eval.gradients, st.step), target)?;
    let direction = linalg::combine(weights.as_slice(), &eval.gradients);
    let s = resolve_step(p, st, cfg, &y, &eval, &direction)?;
    let x_next = descend(&y, s, &direction);
    Ok(st.advance(x_next, s, Choice::Weights(weights)))
}

/// One step of the accelerated method without subproblems: `y` as in
/// [`accg_step`], `j = argmax_i <grad f_i(y), x - x_prev>` (lowest index on
/// ties, so `j = 0` at `k = 1`) and `x+ = y - s grad f_j(y)`.
pub fn accg_noq_step(p: &MoProblem, st: &IterateState, cfg: &SolverConfig) -> Result<IterateState> {
    let beta = momentum_factor(st.k);
    let y = extrapolate(&st.x_curr, &st.x_prev, beta);
    let eval = p.evaluate_all(&y)?;
    let momentum = linalg::sub(&st.x_curr, &st.x_prev);
    let (j, _) = simplex::linear_maximizer(&eval.gradients, &momentum);
    let direction = &eval.gradients[j];
    let s = resolve_step(p, st, cfg, &y, &eval, direction)?;
    let x_next = descend(&y, s, direction);
    Ok(st.advance(x_next, s, Choice::Index(j)))
}

/// One step of the single-objective Nesterov scheme
/// `y = x + (k-1)/(k+alpha-1) (x - x_prev)`, `x+ = y - s grad f(y)`.
pub fn nesterov_step(p: &MoProblem, st: &IterateState, cfg: &SolverConfig) -> Result<IterateState> {
    if p.num_objectives() != 1 {
        return Err(Error::Unsupported(
            "the Nesterov reference scheme needs exactly one objective".into(),
        ));
    }
    let k = st.k as f64;
    let beta = (k - 1.0) / (k + cfg.nesterov_alpha() - 1.0);
    let y = extrapolate(&st.x_curr, &st.x_prev, beta);
    let eval = p.evaluate_all(&y)?;
    let direction = &eval.gradients[0];
    let s = resolve_step(p, st, cfg, &y, &eval, direction)?;
    let x_next = descend(&y, s, direction);
    Ok(st.advance(x_next, s, Choice::Index(0)))
}

/// Dispatch on `cfg.method`.
pub fn step(p: &MoProblem, st: &IterateState, cfg: &SolverConfig) -> Result<IterateState> {
    step_cached(p, st, cfg, None)
}

fn step_cached(
    p: &MoProblem,
    st: &IterateState,
    cfg: &SolverConfig,
    cache: Option<&Evaluation>,
) -> Result<IterateState> {
    match cfg.method {
        Method::Sd => sd_impl(p, st, cfg, cache),
        Method::Inertial => inertial_impl(p, st, cfg, cache),
        Method::AccG => accg_step(p, st, cfg),
        Method::AccGNoQ => accg_noq_step(p, st, cfg),
        Method::NesterovRef => nesterov_step(p, st, cfg),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    MaxIters,
    TolMet,
    EvalFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Termination {
    pub reason: TerminationReason,
    /// Index of the last iterate, `x^{k_final}`.
    pub k_final: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoredIterate {
    pub k: usize,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Thinning {
    /// Dense up to [`DENSE_STORAGE_MAX_DIM`], sparse above.
    #[default]
    Auto,
    Dense,
    /// Keep `x^1`, `x^2`, every iterate with `k = 1 mod every`, and the last.
    Every(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Evaluate `||proj_{C(x^k)}(0)||` at every iterate. Excluded from
    /// `solve_time`.
    pub record_kkt: bool,
    pub thinning: Thinning,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            record_kkt: true,
            thinning: Thinning::Auto,
        }
    }
}

/// History of one run. Per-iteration vectors are indexed by `k - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub method: Method,
    pub dim: usize,
    pub iterates: Vec<StoredIterate>,
    /// `f(x^k)`.
    pub values: Vec<Vec<f64>>,
    /// `||x^k - x^{k-1}||^2`, zero at `k = 1`.
    pub step_norms_sq: Vec<f64>,
    /// Step size that produced `x^k` (the initial one at `k = 1`).
    pub step_sizes: Vec<f64>,
    pub kkt_residuals: Option<Vec<f64>>,
    pub termination: Termination,
    /// Time spent in steps and the evaluations needed by the stopping test.
    pub solve_time: Duration,
}

impl RunRecord {
    pub fn k_final(&self) -> usize {
        self.termination.k_final
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn final_values(&self) -> &[f64] {
        self.values.last().map_or(&[], Vec::as_slice)
    }

    pub fn final_point(&self) -> &[f64] {
        self.iterates.last().map_or(&[], |it| it.x.as_slice())
    }

    /// `x^k` if it was stored.
    pub fn iterate(&self, k: usize) -> Option<&[f64]> {
        self.iterates
            .binary_search_by_key(&k, |it| it.k)
            .ok()
            .map(|i| self.iterates[i].x.as_slice())
    }

    pub fn is_dense(&self) -> bool {
        self.iterates.len() == self.values.len()
    }
}

struct Recorder {
    keep_every: Option<usize>,
    record: RunRecord,
}

impl Recorder {
    fn push(&mut self, k: usize, x: &[f64], values: Vec<f64>, step_norm_sq: f64, step: f64) {
        let keep = match self.keep_every {
            None => true,
            Some(every) => k <= 2 || k % every == 1,
        };
        if keep {
            self.record
                .iterates
                .push(StoredIterate { k, x: x.to_vec() });
        }
        self.record.values.push(values);
        self.record.step_norms_sq.push(step_norm_sq);
        self.record.step_sizes.push(step);
    }

    fn finish(mut self, last: &[f64], termination: Termination, solve_time: Duration) -> RunRecord {
        let k = termination.k_final;
        if self.record.iterates.last().map(|it| it.k) != Some(k) {
            self.record.iterates.push(StoredIterate {
                k,
                x: last.to_vec(),
            });
        }
        self.record.termination = termination;
        self.record.solve_time = solve_time;
        self.record
    }
}

fn kkt_from_gradients(gradients: &[Vec<f64>]) -> f64 {
    simplex::min_norm_element(gradients, simplex::DEFAULT_TOL)
        .map(|(_, d)| linalg::norm(&d))
        .unwrap_or(f64::NAN)
}

/// Run `cfg.method` from `x0` with default options.
pub fn run(p: &MoProblem, x0: &[f64], cfg: &SolverConfig) -> Result<RunRecord> {
    run_with(p, x0, cfg, RunOptions::default())
}

/// Iterate from `x^0 = x^1 = x0` until `||f(x^k) - f(x^{k-1})||_inf < tol` or
/// `k = max_iters`. Evaluation failures after the start end the run with
/// [`TerminationReason::EvalFailure`].
pub fn run_with(
    p: &MoProblem,
    x0: &[f64],
    cfg: &SolverConfig,
    opts: RunOptions,
) -> Result<RunRecord> {
    cfg.validate()?;
    if x0.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: x0.len(),
        });
    }
    if cfg.method == Method::NesterovRef && p.num_objectives() != 1 {
        return Err(Error::Unsupported(
            "the Nesterov reference scheme needs exactly one objective".into(),
        ));
    }
    let keep_every = match opts.thinning {
        Thinning::Dense => None,
        Thinning::Auto if p.dim() <= DENSE_STORAGE_MAX_DIM => None,
        Thinning::Auto => Some(10),
        Thinning::Every(e) => Some(e.max(1)),
    };
    let reuse_gradients = !cfg.method.is_accelerated();

    let mut st = IterateState::initial(x0.to_vec(), cfg);
    let start = Instant::now();
    let first = p.evaluate_all(x0)?;
    let mut solve_time = start.elapsed();

    let mut rec = Recorder {
        keep_every,
        record: RunRecord {
            method: cfg.method,
            dim: p.dim(),
            iterates: Vec::new(),
            values: Vec::new(),
            step_norms_sq: Vec::new(),
            step_sizes: Vec::new(),
            kkt_residuals: opts.record_kkt.then(Vec::new),
            termination: Termination {
                reason: TerminationReason::MaxIters,
                k_final: 1,
                detail: None,
            },
            solve_time: Duration::ZERO,
        },
    };
    if let Some(kkt) = rec.record.kkt_residuals.as_mut() {
        kkt.push(kkt_from_gradients(&first.gradients));
    }
    rec.push(1, x0, first.values.clone(), 0.0, st.step);
    let mut prev_values = first.values.clone();
    let mut cache = reuse_gradients.then_some(first);

    let termination = loop {
        if st.k >= cfg.max_iters {
            break Termination {
                reason: TerminationReason::MaxIters,
                k_final: st.k,
                detail: None,
            };
        }
        let t0 = Instant::now();
        let outcome = step_cached(p, &st, cfg, cache.as_ref()).and_then(|next| {
            if reuse_gradients {
                let eval = p.evaluate_all(&next.x_curr)?;
                Ok((next, eval.values.clone(), Some(eval)))
            } else {
                let values = p.evaluate_values(&next.x_curr)?;
                Ok((next, values, None))
            }
        });
        solve_time += t0.elapsed();
        let (next, values, next_cache) = match outcome {
            Ok(v) => v,
            Err(e) => {
                break Termination {
                    reason: TerminationReason::EvalFailure,
                    k_final: st.k,
                    detail: Some(e.to_string()),
                }
            }
        };
        if let Some(kkt) = rec.record.kkt_residuals.as_mut() {
            let r = match &next_cache {
                Some(eval) => kkt_from_gradients(&eval.gradients),
                None => p
                    .evaluate_all(&next.x_curr)
                    .map(|e| kkt_from_gradients(&e.gradients))
                    .unwrap_or(f64::NAN),
            };
            kkt.push(r);
        }
        let change = linalg::max_abs_diff(&values, &prev_values);
        let step_norm_sq = linalg::dist_sq(&next.x_curr, &next.x_prev);
        rec.push(
            next.k,
            &next.x_curr,
            values.clone(),
            step_norm_sq,
            next.step,
        );
        prev_values = values;
        cache = next_cache;
        st = next;
        if change < cfg.tol {
            break Termination {
                reason: TerminationReason::TolMet,
                k_final: st.k,
                detail: None,
            };
        }
    };
    Ok(rec.finish(&st.x_curr, termination, solve_time))
}

/// Single-objective Nesterov trajectory with parameter `alpha` and constant
/// step `s`, run for exactly `k_max` iterates.
pub fn nesterov_reference(
    f: &MoProblem,
    x0: &[f64],
    s: f64,
    alpha: f64,
    k_max: usize,
) -> Result<RunRecord> {
    let cfg = SolverConfig::new(Method::NesterovRef, s, k_max, 0.0).with_alpha(alpha);
    run_with(
        f,
        x0,
        &cfg,
        RunOptions {
            record_kkt: false,
            thinning: Thinning::Dense,
        },
    )
}
