use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::HarnessError;
use crate::bandits::PolicyKind;
use crate::envs::{CategoricalBandit, GapPlatformer, TreeGame};
use crate::mcts::TreePolicy;
use crate::ordinal::Hierarchy;

/// A scalar or a list of values to sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> Grid<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            Grid::One(v) => vec![v.clone()],
            Grid::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentConfig {
    pub id: String,
    #[serde(default)]
    pub params: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmConfig {
    pub kind: String,
    #[serde(default)]
    pub c: Option<Grid<f64>>,
    #[serde(default)]
    pub rl: Option<Grid<usize>>,
    #[serde(default)]
    pub q: Option<f64>,
    #[serde(default)]
    pub z_critical: Option<f64>,
    /// Selected ranks per level, coarse to fine.
    #[serde(default)]
    pub hierarchy: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub environment: EnvironmentConfig,
    pub algorithms: Vec<AlgorithmConfig>,
    /// Pulls per run for bandits, forward-model calls per move for MDPs.
    pub budget: Grid<u64>,
    pub repetitions: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<String>,
}

pub const DEFAULT_Z_CRITICAL: f64 = 0.65;
pub const DEFAULT_Q: f64 = 0.25;
pub const DEFAULT_RL: usize = 10;

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let config: Self = serde_json::from_str(text).map_err(|e| HarnessError::config("config", e.to_string()))?;
        config.plan()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::config("config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Validates the config and resolves it into concrete environments and
    /// algorithm parameter sets.
    pub fn plan(&self) -> Result<Plan, HarnessError> {
        if self.repetitions == 0 {
            return Err(HarnessError::config("repetitions", "must be at least 1"));
        }
        let budgets = self.budget.values();
        if budgets.is_empty() {
            return Err(HarnessError::config("budget", "grid is empty"));
        }
        if self.algorithms.is_empty() {
            return Err(HarnessError::config("algorithms", "at least one algorithm is required"));
        }
        let env = EnvSpec::build(&self.environment)?;
        let mut algorithms = Vec::new();
        for (i, alg) in self.algorithms.iter().enumerate() {
            algorithms.extend(resolve_algorithm(i, alg, &env)?);
        }
        Ok(Plan { env, algorithms, budgets, repetitions: self.repetitions })
    }
}

/// A concrete environment instance.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvSpec {
    Bandit(CategoricalBandit),
    Platformer(GapPlatformer),
    Tree(TreeGame),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MedicineParams {
    #[serde(default)]
    values: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SkewParams {
    #[serde(default = "default_p")]
    p: f64,
    #[serde(default = "default_skew_values")]
    values: [f64; 3],
}

fn default_p() -> f64 {
    0.7
}

fn default_skew_values() -> [f64; 3] {
    [0.0, 0.6, 0.8]
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlatformerParams {
    length: Option<usize>,
    gaps: Option<Vec<usize>>,
    p_jump: Option<f64>,
    step_limit: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeParams {
    depth: usize,
    branching: usize,
    #[serde(default = "default_max_score")]
    max_score: i64,
    #[serde(default)]
    slip: f64,
    #[serde(default)]
    tree_seed: u64,
}

fn default_max_score() -> i64 {
    9
}

fn parse_params<T: DeserializeOwned>(params: &Map<String, Value>) -> Result<T, HarnessError> {
    serde_json::from_value(Value::Object(params.clone()))
        .map_err(|e| HarnessError::config("environment.params", e.to_string()))
}

fn env_err(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::config("environment.params", e.to_string())
}

impl EnvSpec {
    pub fn build(config: &EnvironmentConfig) -> Result<Self, HarnessError> {
        let params = &config.params;
        match config.id.as_str() {
            "medicine" => {
                let p: MedicineParams = parse_params(params)?;
                let env = CategoricalBandit::medicine();
                match p.values {
                    Some(values) => Ok(Self::Bandit(env.with_values(values).map_err(env_err)?)),
                    None => Ok(Self::Bandit(env)),
                }
            }
            "skew" => {
                let p: SkewParams = parse_params(params)?;
                Ok(Self::Bandit(CategoricalBandit::skew(p.p, p.values).map_err(env_err)?))
            }
            "platformer" => {
                let p: PlatformerParams = parse_params(params)?;
                let d = GapPlatformer::default();
                let env = GapPlatformer::new(
                    p.length.unwrap_or(d.length()),
                    p.gaps.unwrap_or_else(|| d.gaps().to_vec()),
                    p.p_jump.unwrap_or(d.p_jump()),
                    p.step_limit.unwrap_or(d.step_limit()),
                )
                .map_err(env_err)?;
                Ok(Self::Platformer(env))
            }
            "tree" => {
                let p: TreeParams = parse_params(params)?;
                let env = TreeGame::random(p.depth, p.branching, p.max_score, p.slip, p.tree_seed).map_err(env_err)?;
                Ok(Self::Tree(env))
            }
            "chain" => {
                if !params.is_empty() {
                    return Err(HarnessError::config("environment.params", "chain takes no parameters"));
                }
                Ok(Self::Tree(TreeGame::win_lose_chain()))
            }
            other => Err(HarnessError::config(
                "environment.id",
                format!("unknown environment {other:?} (expected medicine, skew, platformer, tree or chain)"),
            )),
        }
    }

    pub fn is_bandit(&self) -> bool {
        matches!(self, Self::Bandit(_))
    }
}

/// The algorithm side of one run cell.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmSpec {
    Bandit { kind: PolicyKind, c: f64, z_critical: Option<f64>, hierarchy: Option<Hierarchy> },
    Tree { policy: TreePolicy, c: f64, rl: usize, q: Option<f64> },
}

impl AlgorithmSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Bandit { kind, .. } => kind.name(),
            Self::Tree { policy, .. } => policy.name(),
        }
    }

    pub fn c(&self) -> f64 {
        match self {
            Self::Bandit { c, .. } | Self::Tree { c, .. } => *c,
        }
    }
}

fn resolve_algorithm(i: usize, alg: &AlgorithmConfig, env: &EnvSpec) -> Result<Vec<AlgorithmSpec>, HarnessError> {
    let key = |field: &str| format!("algorithms[{i}].{field}");
    let c_values = match &alg.c {
        Some(grid) => {
            let values = grid.values();
            if values.is_empty() {
                return Err(HarnessError::config(key("c"), "grid is empty"));
            }
            if let Some(bad) = values.iter().find(|c| c.is_nan() || **c < 0.0) {
                return Err(HarnessError::config(key("c"), format!("{bad} is not a nonnegative number")));
            }
            Some(values)
        }
        None => None,
    };
    match env {
        EnvSpec::Bandit(bandit) => {
            let kind: PolicyKind = alg
                .kind
                .parse()
                .map_err(|_| HarnessError::config(key("kind"), format!("{:?} is not a bandit policy", alg.kind)))?;
            if alg.rl.is_some() {
                return Err(HarnessError::config(key("rl"), "only tree searches take a rollout length"));
            }
            if alg.q.is_some() {
                return Err(HarnessError::config(key("q"), "only mixmax takes q"));
            }
            let c_values = c_values.ok_or_else(|| HarnessError::config(key("c"), "required for bandit policies"))?;
            let (z_critical, hierarchy) = if kind == PolicyKind::Ohucb {
                let z = alg.z_critical.unwrap_or(DEFAULT_Z_CRITICAL);
                let levels = alg.hierarchy.clone().unwrap_or_else(|| vec![vec![0]]);
                let h = Hierarchy::new(bandit.scale().len(), levels, z)
                    .map_err(|e| HarnessError::config(key("hierarchy"), e.to_string()))?;
                (Some(z), Some(h))
            } else {
                if alg.z_critical.is_some() || alg.hierarchy.is_some() {
                    return Err(HarnessError::config(key("hierarchy"), "only oh-ucb takes a hierarchy and z_critical"));
                }
                (None, None)
            };
            Ok(c_values
                .into_iter()
                .map(|c| AlgorithmSpec::Bandit { kind, c, z_critical, hierarchy: hierarchy.clone() })
                .collect())
        }
        _ => {
            let policy: TreePolicy = alg
                .kind
                .parse()
                .map_err(|_| HarnessError::config(key("kind"), format!("{:?} is not a tree policy", alg.kind)))?;
            if alg.z_critical.is_some() || alg.hierarchy.is_some() {
                return Err(HarnessError::config(key("hierarchy"), "only oh-ucb takes a hierarchy and z_critical"));
            }
            let q = match (policy, alg.q) {
                (TreePolicy::MixMax, q) => {
                    let q = q.unwrap_or(DEFAULT_Q);
                    if !(0.0..=1.0).contains(&q) {
                        return Err(HarnessError::config(key("q"), format!("{q} not in [0, 1]")));
                    }
                    Some(q)
                }
                (_, Some(_)) => return Err(HarnessError::config(key("q"), "only mixmax takes q")),
                (_, None) => None,
            };
            let c_values = c_values.unwrap_or_else(|| vec![std::f64::consts::FRAC_1_SQRT_2]);
            let rl_values = alg.rl.as_ref().map_or_else(|| vec![DEFAULT_RL], Grid::values);
            if rl_values.is_empty() || rl_values.contains(&0) {
                return Err(HarnessError::config(key("rl"), "grid must be nonempty and every value at least 1"));
            }
            let mut out = Vec::new();
            for &c in &c_values {
                for &rl in &rl_values {
                    out.push(AlgorithmSpec::Tree { policy, c, rl, q });
                }
            }
            Ok(out)
        }
    }
}

/// A validated, fully expanded experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub env: EnvSpec,
    pub algorithms: Vec<AlgorithmSpec>,
    pub budgets: Vec<u64>,
    pub repetitions: u32,
}
