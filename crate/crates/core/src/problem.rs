//! Multiobjective problem abstraction.
//!
//! A [`MoProblem`] bundles `m` smooth objectives over `R^n`. Each objective
//! supplies its value and analytic gradient; finite differences are only used
//! to check those gradients.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg;

/// A smooth scalar function on `R^n`.
pub trait Objective: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, x: &[f64]) -> Vec<f64>;

    /// Value and gradient together. Implementors sharing intermediate work
    /// between the two should override this.
    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        (self.value(x), self.gradient(x))
    }
}

/// Analytic description of a known Pareto set.
#[derive(Debug, Clone, PartialEq)]
pub enum ParetoSet {
    /// `{x : <normal, x> = offset}`.
    Hyperplane { normal: Vec<f64>, offset: f64 },
    /// The segment `[a, b]`.
    Segment { a: Vec<f64>, b: Vec<f64> },
    /// A single minimizer.
    Point(Vec<f64>),
}

impl ParetoSet {
    /// Euclidean distance from `x` to the set.
    pub fn distance(&self, x: &[f64]) -> f64 {
        match self {
            ParetoSet::Hyperplane { normal, offset } => {
                (linalg::dot(normal, x) - offset).abs() / linalg::norm(normal)
            }
            ParetoSet::Segment { a, b } => {
                let ab = linalg::sub(b, a);
                let len_sq = linalg::norm_sq(&ab);
                let ax = linalg::sub(x, a);
                let t = if len_sq > 0.0 {
                    (linalg::dot(&ax, &ab) / len_sq).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                ax.iter()
                    .zip(&ab)
                    .map(|(u, v)| (u - t * v).powi(2))
                    .sum::<f64>()
                    .sqrt()
            }
            ParetoSet::Point(p) => linalg::dist_sq(p, x).sqrt(),
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.distance(x) <= tol
    }
}

/// Values and gradients of every objective at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub values: Vec<f64>,
    pub gradients: Vec<Vec<f64>>,
}

/// `m` smooth objectives over `R^n`. Immutable once built and cheap to clone.
#[derive(Clone)]
pub struct MoProblem {
    name: String,
    dim: usize,
    objectives: Vec<Arc<dyn Objective>>,
    lipschitz_hint: Option<f64>,
    known_pareto: Option<ParetoSet>,
}

impl fmt::Debug for MoProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MoProblem")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("objectives", &self.objectives.len())
            .field("lipschitz_hint", &self.lipschitz_hint)
            .field("known_pareto", &self.known_pareto)
            .finish()
    }
}

impl MoProblem {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        objectives: Vec<Arc<dyn Objective>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidProblem(
                "input dimension must be positive".into(),
            ));
        }
        if objectives.is_empty() {
            return Err(Error::InvalidProblem(
                "at least one objective is required".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            dim,
            objectives,
            lipschitz_hint: None,
            known_pareto: None,
        })
    }

    /// Attach a common gradient Lipschitz constant. Advisory only: solvers
    /// always take an explicit step size.
    pub fn with_lipschitz_hint(mut self, lipschitz: f64) -> Self {
        assert!(lipschitz >= 0.0, "Lipschitz hint must be nonnegative");
        self.lipschitz_hint = Some(lipschitz);
        self
    }

    pub fn with_known_pareto(mut self, pareto: ParetoSet) -> Self {
        self.known_pareto = Some(pareto);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_objectives(&self) -> usize {
        self.objectives.len()
    }

    pub fn lipschitz_hint(&self) -> Option<f64> {
        self.lipschitz_hint
    }

    pub fn known_pareto(&self) -> Option<&ParetoSet> {
        self.known_pareto.as_ref()
    }

    pub fn objective(&self, i: usize) -> &dyn Objective {
        self.objectives[i].as_ref()
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if !linalg::all_finite(x) {
            return Err(Error::NonFinite("evaluation point"));
        }
        Ok(())
    }

    /// Values and gradients of all objectives at `x`.
    pub fn evaluate_all(&self, x: &[f64]) -> Result<Evaluation> {
        self.check_point(x)?;
        let mut values = Vec::with_capacity(self.objectives.len());
        let mut gradients = Vec::with_capacity(self.objectives.len());
        for (i, f) in self.objectives.iter().enumerate() {
            let (v, g) = f.value_and_gradient(x);
            if !v.is_finite() || g.len() != self.dim || !linalg::all_finite(&g) {
                return Err(Error::Evaluation { objective: i });
            }
            values.push(v);
            gradients.push(g);
        }
        Ok(Evaluation { values, gradients })
    }

    /// Values of all objectives at `x`.
    pub fn evaluate_values(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        self.objectives
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let v = f.value(x);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Evaluation { objective: i })
                }
            })
            .collect()
    }

    /// Central-difference gradient of objective `i` with spacing `h`.
    pub fn finite_difference_gradient(&self, i: usize, x: &[f64], h: f64) -> Result<Vec<f64>> {
        assert!(h > 0.0, "finite-difference spacing must be positive");
        self.check_point(x)?;
        let f = self.objective(i);
        let mut probe = x.to_vec();
        let mut grad = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let xj = probe[j];
            probe[j] = xj + h;
            let up = f.value(&probe);
            probe[j] = xj - h;
            let down = f.value(&probe);
            probe[j] = xj;
            let d = (up - down) / (2.0 * h);
            if !d.is_finite() {
                return Err(Error::Evaluation { objective: i });
            }
            grad.push(d);
        }
        Ok(grad)
    }
}
