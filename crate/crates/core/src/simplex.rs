//! Least squares over the unit simplex.
//!
//! Every step of the quadratic-subproblem methods reduces to
//!
//! ```text
//!     min_{theta in simplex}  || sum_i theta_i c_i - t ||^2
//! ```
//!
//! i.e. projecting the target `t` onto the convex hull of the columns `c_i`.
//! With `t = 0` this is the minimum-norm element of the hull, the negated
//! multiobjective steepest-descent direction.
//!
//! For `m <= 8` columns the problem is solved exactly by enumerating every
//! face of the simplex, solving the affine least-squares problem on that face
//! and keeping the best feasible candidate. Larger `m` uses Wolfe's
//! minimum-norm-point active-set method, with accelerated projected gradient
//! as a last resort.

pub mod oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Default tolerance for the optimality certificate of a subproblem solve.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest column count solved by face enumeration.
pub const MAX_ENUMERATED: usize = 8;

const FEASIBILITY_SLACK: f64 = 1e-12;
const SINGULAR_PIVOT: f64 = 1e-12;
const FALLBACK_MAX_ITERS: usize = 200_000;
const WOLFE_MAX_MAJOR: usize = 10_000;

/// A point of the unit simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    /// Validates `theta >= 0` and `sum theta = 1` (within `1e-12`).
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InvalidProblem("empty weight vector".into()));
        }
        let sum: f64 = theta.iter().sum();
        if theta.iter().any(|&t| !(t >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProblem(format!(
                "weights {theta:?} do not lie on the unit simplex"
            )));
        }
        Ok(Self(theta))
    }

    pub fn uniform(m: usize) -> Self {
        Self(vec![1.0 / m as f64; m])
    }

    pub fn vertex(m: usize, i: usize) -> Self {
        let mut theta = vec![0.0; m];
        theta[i] = 1.0;
        Self(theta)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Clip tiny negatives and renormalize. Only for candidates that are
    /// feasible up to rounding.
    fn from_nearly_feasible(mut theta: Vec<f64>) -> Self {
        for t in theta.iter_mut() {
            if *t < 0.0 {
                *t = 0.0;
            }
        }
        let sum: f64 = theta.iter().sum();
        for t in theta.iter_mut() {
            *t /= sum;
        }
        Self(theta)
    }
}

/// Columns `c_1..c_m` and a target `t`, all in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HullProblem {
    columns: Vec<Vec<f64>>,
    target: Vec<f64>,
}

impl HullProblem {
    pub fn new(columns: Vec<Vec<f64>>, target: Vec<f64>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidProblem(
                "hull problem needs at least one column".into(),
            ));
        }
        let n = target.len();
        for c in &columns {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.len(),
                });
            }
            if !linalg::all_finite(c) {
                return Err(Error::NonFinite("hull column"));
            }
        }
        if !linalg::all_finite(&target) {
            return Err(Error::NonFinite("hull target"));
        }
        Ok(Self { columns, target })
    }

    /// Hull of `columns` with target zero.
    pub fn min_norm(columns: Vec<Vec<f64>>) -> Result<Self> {
        let n = columns.first().map_or(0, Vec::len);
        Self::new(columns, vec![0.0; n])
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    /// `sum_i theta_i c_i`.
    pub fn hull_point(&self, theta: &[f64]) -> Vec<f64> {
        linalg::combine(theta, &self.columns)
    }

    /// `|| sum_i theta_i c_i - t ||^2`, evaluated directly.
    pub fn objective(&self, theta: &[f64]) -> f64 {
        linalg::dist_sq(&self.hull_point(theta), &self.target)
    }

    fn scale_sq(&self) -> f64 {
        self.columns
            .iter()
            .map(|c| linalg::norm_sq(c))
            .fold(linalg::norm_sq(&self.target), f64::max)
            .max(1.0)
    }
}

/// Result of [`solve_hull_least_squares`].
#[derive(Debug, Clone, PartialEq)]
pub struct HullSolution {
    pub weights: SimplexWeights,
    /// `sum_i theta_i c_i`.
    pub point: Vec<f64>,
    /// `point - target`.
    pub residual: Vec<f64>,
    /// `||residual||^2`.
    pub objective: f64,
}

/// Optimality gap certificate for `weights`.
///
/// Returns `max_i (<r, p> - <r, c_i>)` with `p = sum theta_j c_j` and
/// `r = p - t`. It is nonnegative, and zero exactly at a minimizer; it also
/// bounds `(objective - optimum) / 2` from above.
pub fn kkt_violation(hp: &HullProblem, weights: &[f64]) -> f64 {
    let p = hp.hull_point(weights);
    let r = linalg::sub(&p, &hp.target);
    let rp = linalg::dot(&r, &p);
    hp.columns
        .iter()
        .map(|c| rp - linalg::dot(&r, c))
        .fold(0.0, f64::max)
}

/// Gram matrix `G_ij = <c_i, c_j>` (row-major) and `b_i = <c_i, t>`.
struct Gram {
    m: usize,
    g: Vec<f64>,
    b: Vec<f64>,
    tt: f64,
}

impl Gram {
    fn new(hp: &HullProblem) -> Self {
        let m = hp.columns.len();
        let mut g = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let v = linalg::dot(&hp.columns[i], &hp.columns[j]);
                g[i * m + j] = v;
                g[j * m + i] = v;
            }
        }
        let b = hp
            .columns
            .iter()
            .map(|c| linalg::dot(c, &hp.target))
            .collect();
        Self {
            m,
            g,
            b,
            tt: linalg::norm_sq(&hp.target),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.g[i * self.m + j]
    }

    fn objective(&self, theta: &[f64]) -> f64 {
        let mut quad = 0.0;
        for i in 0..self.m {
            if theta[i] == 0.0 {
                continue;
            }
            let row: f64 = (0..self.m).map(|j| self.at(i, j) * theta[j]).sum();
            quad += theta[i] * (row - 2.0 * self.b[i]);
        }
        quad + self.tt
    }

    /// `G theta - b`, the half-gradient of the objective in weight space.
    fn half_gradient(&self, theta: &[f64], out: &mut [f64]) {
        for i in 0..self.m {
            out[i] = (0..self.m).map(|j| self.at(i, j) * theta[j]).sum::<f64>() - self.b[i];
        }
    }

    /// Gershgorin bound on the largest eigenvalue of `G`.
    fn spectral_bound(&self) -> f64 {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.at(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Project `v` onto the unit simplex (sort-and-threshold).
pub fn project_onto_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut threshold = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - 1.0) / (k + 1) as f64;
        if u - candidate > 0.0 {
            threshold = candidate;
        }
    }
    v.iter().map(|&x| (x - threshold).max(0.0)).collect()
}

/// Solve `min ||sum theta_i c_i - t||^2` over the unit simplex.
///
/// For `m <= MAX_ENUMERATED` the minimizer is found by face enumeration. If
/// several faces attain the optimum (affinely dependent columns), the one with
/// the largest support wins; remaining ties go to the first face in bitmask
/// order. When every column is identical the uniform weights are returned.
pub fn solve_hull_least_squares(hp: &HullProblem, tol: f64) -> Result<HullSolution> {
    assert!(tol > 0.0, "tolerance must be positive");
    let m = hp.columns.len();
    let weights = if m == 1 {
        SimplexWeights(vec![1.0])
    } else if hp.columns.iter().all(|c| c == &hp.columns[0]) {
        SimplexWeights::uniform(m)
    } else {
        let gram = Gram::new(hp);
        let gap_tol = tol * hp.scale_sq();
        let mut theta = if m <= MAX_ENUMERATED {
            enumerate_faces(&gram)
        } else {
            wolfe(&gram, gap_tol).unwrap_or_else(|| {
                projected_gradient(&gram, SimplexWeights::uniform(m).into_vec(), gap_tol)
            })
        };
        if kkt_violation(hp, &theta) > gap_tol {
            let polished = projected_gradient(&gram, theta.clone(), gap_tol);
            if hp.objective(&polished) <= hp.objective(&theta) {
                theta = polished;
            }
        }
        SimplexWeights::from_nearly_feasible(theta)
    };
    let point = hp.hull_point(weights.as_slice());
    let residual = linalg::sub(&point, &hp.target);
    let objective = linalg::norm_sq(&residual);
    Ok(HullSolution {
        weights,
        point,
        residual,
        objective,
    })
}

fn enumerate_faces(gram: &Gram) -> Vec<f64> {
    let m = gram.m;
    let tie = 1e-14 * (gram.tt + gram.spectral_bound()).max(1.0);
    let mut best: Option<(Vec<f64>, f64, u32)> = None;
    let mut members = [0usize; MAX_ENUMERATED];
    let mut mat = [0.0f64; MAX_ENUMERATED * MAX_ENUMERATED];
    let mut rhs = [0.0f64; MAX_ENUMERATED];
    for mask in 1u32..(1u32 << m) {
        let support = mask.count_ones();
        let mut k = 0;
        for (i, slot) in (0..m).filter(|i| mask & (1 << i) != 0).zip(0..) {
            members[slot] = i;
            k += 1;
        }
        let base = members[0];
        let others = &members[1..k];
        let d = others.len();
        // Parametrize theta_base = 1 - sum(phi) and solve the normal
        // equations of min ||c_base + sum phi_a (c_a - c_base) - t||^2.
        let gbb = gram.at(base, base);
        for (a, &ia) in others.iter().enumerate() {
            for (c, &ic) in others.iter().enumerate() {
                mat[a * d + c] = gram.at(ia, ic) - gram.at(ia, base) - gram.at(base, ic) + gbb;
            }
            rhs[a] = gram.b[ia] - gram.at(ia, base) - gram.b[base] + gbb;
        }
        if !cholesky_solve(&mut mat[..d * d], &mut rhs[..d], d) {
            continue;
        }
        let mut theta = vec![0.0; m];
        let mut rest = 1.0;
        for (a, &ia) in others.iter().enumerate() {
            theta[ia] = rhs[a];
            rest -= rhs[a];
        }
        theta[base] = rest;
        if theta.iter().any(|&t| t < -FEASIBILITY_SLACK) {
            continue;
        }
        let theta = SimplexWeights::from_nearly_feasible(theta).into_vec();
        let obj = gram.objective(&theta);
        let better = match &best {
            None => true,
            Some((_, best_obj, best_support)) => {
                obj < best_obj - tie || (obj <= best_obj + tie && support > *best_support)
            }
        };
        if better {
            best = Some((theta, obj, support));
        }
    }
    // Every vertex is a nonsingular face, so a candidate always exists.
    best.map(|(theta, _, _)| theta)
        .expect("vertex faces are always feasible")
}

/// Minimizer of the objective over the affine hull of the columns in
/// `members`, as coefficients summing to one. `None` if they are affinely
/// dependent.
fn affine_minimizer(gram: &Gram, members: &[usize]) -> Option<Vec<f64>> {
    let base = members[0];
    let others = &members[1..];
    let d = others.len();
    let gbb = gram.at(base, base);
    let mut mat = vec![0.0; d * d];
    let mut rhs = vec![0.0; d];
    for (a, &ia) in others.iter().enumerate() {
        for (c, &ic) in others.iter().enumerate() {
            mat[a * d + c] = gram.at(ia, ic) - gram.at(ia, base) - gram.at(base, ic) + gbb;
        }
        rhs[a] = gram.b[ia] - gram.at(ia, base) - gram.b[base] + gbb;
    }
    if !cholesky_solve(&mut mat, &mut rhs, d) {
        return None;
    }
    let rest = 1.0 - rhs.iter().sum::<f64>();
    let mut coeffs = Vec::with_capacity(members.len());
    coeffs.push(rest);
    coeffs.extend_from_slice(&rhs);
    Some(coeffs)
}

/// Wolfe's minimum-norm-point algorithm on the points `c_i - t`. Returns
/// `None` if the corral becomes numerically affinely dependent or the
/// iteration budget runs out; a stalled corral returns its current weights
/// for polishing.
fn wolfe(gram: &Gram, gap_tol: f64) -> Option<Vec<f64>> {
    let m = gram.m;
    let start = (0..m)
        .min_by(|&i, &j| {
            let vi = gram.at(i, i) - 2.0 * gram.b[i];
            let vj = gram.at(j, j) - 2.0 * gram.b[j];
            vi.total_cmp(&vj)
        })
        .unwrap_or(0);
    let mut lambda = vec![0.0; m];
    lambda[start] = 1.0;
    let mut corral = vec![start];
    let mut grad = vec![0.0; m];
    for _ in 0..WOLFE_MAX_MAJOR {
        gram.half_gradient(&lambda, &mut grad);
        let weighted: f64 = lambda.iter().zip(&grad).map(|(l, g)| l * g).sum();
        let (entering, min_g) = grad
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((0, 0.0));
        if weighted - min_g <= gap_tol {
            return Some(lambda);
        }
        if corral.contains(&entering) {
            return Some(lambda);
        }
        corral.push(entering);
        loop {
            let alpha = affine_minimizer(gram, &corral)?;
            if alpha.iter().all(|&a| a > 0.0) {
                for (&i, &a) in corral.iter().zip(&alpha) {
                    lambda[i] = a;
                }
                break;
            }
            let (leaving, ratio) = corral
                .iter()
                .zip(&alpha)
                .enumerate()
                .filter(|(_, (_, &a))| a <= 0.0)
                .map(|(pos, (&i, &a))| (pos, lambda[i] / (lambda[i] - a)))
                .min_by(|a, b| a.1.total_cmp(&b.1))?;
            for (&i, &a) in corral.iter().zip(&alpha) {
                lambda[i] = ratio * a + (1.0 - ratio) * lambda[i];
            }
            lambda[corral[leaving]] = 0.0;
            corral.retain(|&i| lambda[i] > 0.0);
            if corral.is_empty() {
                return None;
            }
            let total: f64 = corral.iter().map(|&i| lambda[i]).sum();
            for &i in &corral {
                lambda[i] /= total;
            }
        }
    }
    None
}

/// In-place Cholesky solve of the `d x d` system. Returns `false` when the
/// matrix is numerically singular relative to its largest diagonal entry.
fn cholesky_solve(a: &mut [f64], rhs: &mut [f64], d: usize) -> bool {
    if d == 0 {
        return true;
    }
    let max_diag = (0..d).map(|i| a[i * d + i]).fold(0.0, f64::max);
    if !(max_diag > 0.0) {
        return false;
    }
    let floor = SINGULAR_PIVOT * max_diag;
    for j in 0..d {
        let mut diag = a[j * d + j];
        for k in 0..j {
            diag -= a[j * d + k] * a[j * d + k];
        }
        if !(diag > floor) {
            return false;
        }
        let diag = diag.sqrt();
        a[j * d + j] = diag;
        for i in (j + 1)..d {
            let mut v = a[i * d + j];
            for k in 0..j {
                v -= a[i * d + k] * a[j * d + k];
            }
            a[i * d + j] = v / diag;
        }
    }
    for i in 0..d {
        let mut v = rhs[i];
        for k in 0..i {
            v -= a[i * d + k] * rhs[k];
        }
        rhs[i] = v / a[i * d + i];
    }
    for i in (0..d).rev() {
        let mut v = rhs[i];
        for k in (i + 1)..d {
            v -= a[k * d + i] * rhs[k];
        }
        rhs[i] = v / a[i * d + i];
    }
    true
}

/// Accelerated projected gradient with adaptive restart. Stops once the
/// Frank-Wolfe gap drops below `gap_tol`.
fn projected_gradient(gram: &Gram, start: Vec<f64>, gap_tol: f64) -> Vec<f64> {
    let m = gram.m;
    let lip = gram.spectral_bound();
    if !(lip > 0.0) {
        return start;
    }
    let step = 1.0 / lip;
    let mut x = start;
    let mut y = x.clone();
    let mut momentum = 1.0f64;
    let mut grad = vec![0.0; m];
    let mut obj = gram.objective(&x);
    for iter in 0..FALLBACK_MAX_ITERS {
        gram.half_gradient(&y, &mut grad);
        let trial: Vec<f64> = y.iter().zip(&grad).map(|(v, g)| v - step * g).collect();
        let next = project_onto_simplex(&trial);
        let next_obj = gram.objective(&next);
        if next_obj > obj {
            // restart from the last accepted iterate
            y.clone_from(&x);
            momentum = 1.0;
            continue;
        }
        let next_momentum = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
        let beta = (momentum - 1.0) / next_momentum;
        y = next
            .iter()
            .zip(&x)
            .map(|(n, o)| n + beta * (n - o))
            .collect();
        y = project_onto_simplex(&y);
        x = next;
        obj = next_obj;
        momentum = next_momentum;
        if iter % 16 == 0 {
            gram.half_gradient(&x, &mut grad);
            let weighted: f64 = x.iter().zip(&grad).map(|(t, g)| t * g).sum();
            let min_g = grad.iter().copied().fold(f64::INFINITY, f64::min);
            if weighted - min_g <= gap_tol {
                break;
            }
        }
    }
    x
}

/// Minimum-norm element of the convex hull of `gradients`.
///
/// Returns the weights and the element `sum theta_i grad_i`, whose negation is
/// the multiobjective steepest-descent direction.
pub fn min_norm_element(gradients: &[Vec<f64>], tol: f64) -> Result<(SimplexWeights, Vec<f64>)> {
    let hp = HullProblem::min_norm(gradients.to_vec())?;
    let sol = solve_hull_least_squares(&hp, tol)?;
    Ok((sol.weights, sol.point))
}

/// `argmax_i <grad_i, v>` and the maximal value. Indices are zero-based and
/// ties go to the lowest index.
pub fn linear_maximizer(gradients: &[Vec<f64>], v: &[f64]) -> (usize, f64) {
    assert!(
        !gradients.is_empty(),
        "linear maximizer needs at least one vector"
    );
    let mut best = (0, linalg::dot(&gradients[0], v));
    for (i, g) in gradients.iter().enumerate().skip(1) {
        let value = linalg::dot(g, v);
        if value > best.1 {
            best = (i, value);
        }
    }
    best
}
