//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "name": "example2",
//!   "problem": { "kind": "witting", "lambda": 0.6 },
//!   "solvers": [
//!     { "method": "sd", "step_size": 0.005, "max_iters": 1000, "tol": 1e-4 },
//!     { "method": "accg", "step_size": 0.005, "max_iters": 1000, "tol": 1e-4 }
//!   ],
//!   "starts": { "kind": "box", "count": 100, "low": -2.0, "high": 2.0, "seed": 7 },
//!   "outputs": { "dir": "out/example2", "thin": 1, "energy": false, "plot_data": true }
//! }
//! ```
//!
//! Problem kinds: `logsumexp` (`n`, `m`, `p`, `seed`, optional `box_low` and
//! `box_high`), `witting` (`lambda`), `quadratic` (`anchors`) and `constant`
//! (`dim`, `levels`). Start kinds: `explicit` (`points`) and `box`.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use moaccel::suite::{self, LogSumExpSpec, SeededUniform, WittingSpec};
use moaccel::{MoProblem, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, BenchError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemConfig {
    Logsumexp(LogSumExpSpec),
    Witting(WittingSpec),
    Quadratic { anchors: Vec<Vec<f64>> },
    Constant { dim: usize, levels: Vec<f64> },
}

impl ProblemConfig {
    pub fn build(&self) -> Result<MoProblem> {
        Ok(match self {
            Self::Logsumexp(spec) => suite::make_logsumexp(spec)?,
            Self::Witting(spec) => suite::make_witting(spec)?,
            Self::Quadratic { anchors } => suite::make_quadratic_family(anchors.clone())?,
            Self::Constant { dim, levels } => suite::make_constant(*dim, levels)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverEntry {
    /// Name used in summaries and trace paths; defaults to the method name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub config: SolverConfig,
}

impl SolverEntry {
    pub fn name(&self) -> String {
        self.label.clone().unwrap_or_else(|| {
            serde_json::to_value(self.config.method)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StartsConfig {
    Explicit {
        points: Vec<Vec<f64>>,
    },
    Box {
        count: usize,
        low: f64,
        high: f64,
        seed: u64,
    },
}

impl StartsConfig {
    pub fn materialize(&self, dim: usize) -> Vec<Vec<f64>> {
        match self {
            Self::Explicit { points } => points.clone(),
            Self::Box {
                count,
                low,
                high,
                seed,
            } => {
                let mut rng = SeededUniform::new(*seed);
                (0..*count)
                    .map(|_| rng.point_in_box(dim, *low, *high))
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    /// Write trace rows with `k = 1 mod thin`, plus the last one.
    #[serde(default = "default_thin")]
    pub thin: usize,
    #[serde(default)]
    pub energy: bool,
    #[serde(default)]
    pub plot_data: bool,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_thin() -> usize {
    1
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            thin: default_thin(),
            energy: false,
            plot_data: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub problem: ProblemConfig,
    pub solvers: Vec<SolverEntry>,
    pub starts: StartsConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
}

fn default_name() -> String {
    "experiment".to_string()
}

impl ExperimentConfig {
    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| BenchError::Json {
            path: origin.to_path_buf(),
            source,
        })
    }

    /// Read, parse and validate a config file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let cfg = Self::from_json(&text, path)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Replace every seed in the config (problem data and start sampling).
    pub fn override_seed(&mut self, seed: u64) {
        if let ProblemConfig::Logsumexp(spec) = &mut self.problem {
            spec.seed = seed;
        }
        if let StartsConfig::Box { seed: s, .. } = &mut self.starts {
            *s = seed;
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(BenchError::Config(msg));
        let problem = self.problem.build()?;
        if self.solvers.is_empty() {
            return bad("at least one solver is required".into());
        }
        let mut names = BTreeSet::new();
        for entry in &self.solvers {
            entry.config.validate()?;
            let name = entry.name();
            if name.is_empty()
                || !name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                return bad(format!(
                    "solver label {name:?} must be nonempty [A-Za-z0-9_-]"
                ));
            }
            if !names.insert(name.clone()) {
                return bad(format!(
                    "duplicate solver label {name:?}; set \"label\" to disambiguate"
                ));
            }
        }
        match &self.starts {
            StartsConfig::Explicit { points } => {
                if points.is_empty() {
                    return bad("at least one start is required".into());
                }
                for p in points {
                    if p.len() != problem.dim() {
                        return bad(format!(
                            "start {p:?} does not have dimension {}",
                            problem.dim()
                        ));
                    }
                    if !p.iter().all(|v| v.is_finite()) {
                        return bad("start points must be finite".into());
                    }
                }
            }
            StartsConfig::Box {
                count, low, high, ..
            } => {
                if *count == 0 {
                    return bad("at least one start is required".into());
                }
                if !(low.is_finite() && high.is_finite() && low < high) {
                    return bad("start box bounds must be finite with low < high".into());
                }
            }
        }
        if self.outputs.thin == 0 {
            return bad("outputs.thin must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        let cfg = ExperimentConfig::from_json(text, Path::new("inline"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    const MINIMAL: &str = r#"{
        "problem": {"kind": "witting", "lambda": 0.6},
        "solvers": [{"method": "sd", "step_size": 0.005, "max_iters": 10, "tol": 1e-4}],
        "starts": {"kind": "explicit", "points": [[1.0, 2.0]]}
    }"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse(MINIMAL).unwrap();
        assert_eq!(cfg.outputs, OutputConfig::default());
        assert_eq!(cfg.solvers[0].name(), "sd");
    }

    #[test]
    fn rejects_bad_configs() {
        let no_solver = MINIMAL.replace(
            r#"[{"method": "sd", "step_size": 0.005, "max_iters": 10, "tol": 1e-4}]"#,
            "[]",
        );
        assert!(matches!(parse(&no_solver), Err(BenchError::Config(_))));
        let wrong_dim = MINIMAL.replace("[[1.0, 2.0]]", "[[1.0]]");
        assert!(matches!(parse(&wrong_dim), Err(BenchError::Config(_))));
        let bad_step = MINIMAL.replace("0.005", "-1");
        assert!(matches!(parse(&bad_step), Err(BenchError::Core(_))));
        assert!(matches!(parse("{"), Err(BenchError::Json { .. })));
        let dup = MINIMAL.replace(
            r#"[{"method": "sd", "step_size": 0.005, "max_iters": 10, "tol": 1e-4}]"#,
            r#"[{"method": "sd", "step_size": 0.005, "max_iters": 10, "tol": 1e-4},
                {"method": "sd", "step_size": 0.01, "max_iters": 10, "tol": 1e-4}]"#,
        );
        assert!(matches!(parse(&dup), Err(BenchError::Config(_))));
    }

    #[test]
    fn box_starts_are_seeded() {
        let starts = StartsConfig::Box {
            count: 4,
            low: -2.0,
            high: 2.0,
            seed: 9,
        };
        let a = starts.materialize(3);
        assert_eq!(a, starts.materialize(3));
        assert_eq!(a.len(), 4);
        assert!(a.iter().flatten().all(|v| (-2.0..2.0).contains(v)));
    }

    #[test]
    fn seed_override_touches_problem_and_starts() {
        let mut cfg = parse(
            r#"{
            "problem": {"kind": "logsumexp", "n": 4, "m": 2, "p": 5, "seed": 1},
            "solvers": [{"method": "accg", "step_size": 0.05, "max_iters": 10, "tol": 0}],
            "starts": {"kind": "box", "count": 2, "low": -1, "high": 1, "seed": 1}
        }"#,
        )
        .unwrap();
        cfg.override_seed(42);
        assert!(matches!(&cfg.problem, ProblemConfig::Logsumexp(s) if s.seed == 42));
        assert!(matches!(cfg.starts, StartsConfig::Box { seed: 42, .. }));
    }
}
