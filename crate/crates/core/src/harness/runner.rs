use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{AlgorithmSpec, EnvSpec, ExperimentConfig, Plan};
use super::record::{apply_filters, Filter, RunRecord};
use super::HarnessError;
use crate::bandits::{BanditPolicy, PolicyKind};
use crate::envs::CategoricalBandit;
use crate::mcts::{search, SearchError, SearchParams, SearchResult};
use crate::mdp::{numeric_reward, observe, BudgetMeter, Environment, GameStatus, Observation, OutcomeScale};

/// splitmix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of run `run_id` under base seed `base`.
pub fn derive_seed(base: u64, run_id: u64) -> u64 {
    mix64(base ^ mix64(run_id))
}

/// Filter keys that can only be decided once a run has produced records.
const PER_STEP_KEYS: [&str; 4] = ["step", "action", "rank", "status"];

/// One (algorithm, budget, repetition) combination.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub run_id: u64,
    pub seed: u64,
    pub algorithm: AlgorithmSpec,
    pub budget: u64,
    pub repetition: u32,
}

impl Cell {
    fn prototype(&self, environment: &str) -> RunRecord {
        let (rl, q, z_critical) = match &self.algorithm {
            AlgorithmSpec::Bandit { z_critical, .. } => (None, None, *z_critical),
            AlgorithmSpec::Tree { rl, q, .. } => (Some(*rl), *q, None),
        };
        RunRecord {
            run_id: self.run_id,
            seed: self.seed,
            environment: environment.to_string(),
            algorithm: self.algorithm.name().to_string(),
            c: self.algorithm.c(),
            rl,
            q,
            z_critical,
            budget: self.budget,
            repetition: self.repetition,
            step: 0,
            action: 0,
            rank: 0,
            status: None,
            score: None,
            reward: 0.0,
            cum_deaths: 0,
            mean_value: 0.0,
            calls: 0,
            budget_used: 0,
        }
    }
}

/// Enumerates run cells in canonical order: algorithm grid, then budget,
/// then repetition.
pub fn cells(plan: &Plan, base_seed: u64) -> Vec<Cell> {
    let mut out = Vec::new();
    for alg in &plan.algorithms {
        for &budget in &plan.budgets {
            for repetition in 0..plan.repetitions {
                let run_id = out.len() as u64;
                out.push(Cell { run_id, seed: derive_seed(base_seed, run_id), algorithm: alg.clone(), budget, repetition });
            }
        }
    }
    out
}

/// Runs every cell of `config` (optionally restricted by `filters`) and
/// returns the records in canonical order. `threads = None` uses the
/// global rayon pool.
pub fn run_experiment(
    config: &ExperimentConfig,
    filters: &[Filter],
    threads: Option<usize>,
) -> Result<Vec<RunRecord>, HarnessError> {
    let plan = config.plan()?;
    let environment = config.environment.id.as_str();
    let selected: Vec<Cell> = cells(&plan, config.seed)
        .into_iter()
        .filter(|cell| {
            let proto = cell.prototype(environment);
            filters
                .iter()
                .filter(|f| !PER_STEP_KEYS.contains(&f.key.as_str()))
                .all(|f| proto.field(&f.key).is_some_and(|v| f.matches(&v)))
        })
        .collect();
    let work = || -> Result<Vec<Vec<RunRecord>>, HarnessError> {
        selected.par_iter().map(|cell| run_cell(&plan.env, environment, cell)).collect()
    };
    let runs = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| HarnessError::Runtime(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    Ok(apply_filters(runs.into_iter().flatten().collect(), filters))
}

pub fn run_cell(env: &EnvSpec, environment: &str, cell: &Cell) -> Result<Vec<RunRecord>, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cell.seed);
    let proto = cell.prototype(environment);
    match (env, &cell.algorithm) {
        (EnvSpec::Bandit(bandit), AlgorithmSpec::Bandit { .. }) => {
            let mut policy = build_policy(bandit, &cell.algorithm)?;
            run_bandit(bandit, &mut policy, cell.budget, &mut rng, &proto)
        }
        (EnvSpec::Platformer(game), AlgorithmSpec::Tree { .. }) => run_mdp(game, cell, &mut rng, &proto),
        (EnvSpec::Tree(game), AlgorithmSpec::Tree { .. }) => run_mdp(game, cell, &mut rng, &proto),
        _ => Err(HarnessError::config("algorithms", "algorithm does not fit the environment")),
    }
}

pub fn build_policy(bandit: &CategoricalBandit, spec: &AlgorithmSpec) -> Result<BanditPolicy, HarnessError> {
    let AlgorithmSpec::Bandit { kind, c, hierarchy, .. } = spec else {
        return Err(HarnessError::config("algorithms", "not a bandit policy"));
    };
    let arms = bandit.arms();
    let policy = match kind {
        PolicyKind::Ucb1 => BanditPolicy::ucb1(arms, *c),
        PolicyKind::Oucb => BanditPolicy::oucb(arms, bandit.scale().len(), *c),
        PolicyKind::Ohucb => {
            let h = hierarchy.clone().ok_or_else(|| HarnessError::config("hierarchy", "missing"))?;
            BanditPolicy::ohucb(arms, h, *c)
        }
        PolicyKind::MultiSbm => BanditPolicy::multisbm(arms, *c),
    };
    policy.map_err(|e| HarnessError::Runtime(e.to_string()))
}

/// Plays `pulls` rounds of `policy` against `bandit`, one record per pull.
pub fn run_bandit<R: Rng + ?Sized>(
    bandit: &CategoricalBandit,
    policy: &mut BanditPolicy,
    pulls: u64,
    rng: &mut R,
    proto: &RunRecord,
) -> Result<Vec<RunRecord>, HarnessError> {
    let runtime = |e: &dyn std::fmt::Display| HarnessError::Runtime(e.to_string());
    let mut out = Vec::with_capacity(pulls as usize);
    let (mut deaths, mut total) = (0, 0.0);
    for step in 1..=pulls {
        let arm = policy.select(rng);
        let rank = bandit.pull(arm, rng).map_err(|e| runtime(&e))?;
        let value = bandit.value(rank);
        policy.update(arm, rank, value).map_err(|e| runtime(&e))?;
        deaths += u64::from(rank == 0);
        total += value;
        out.push(RunRecord {
            step,
            action: arm,
            rank,
            reward: value,
            cum_deaths: deaths,
            mean_value: total / step as f64,
            calls: 1,
            budget_used: step,
            ..proto.clone()
        });
    }
    Ok(out)
}

/// One executed game move and the search that chose it.
#[derive(Debug, Clone, PartialEq)]
pub struct Move<S> {
    pub before: S,
    pub search: SearchResult,
    pub after: Observation<S>,
}

/// Plays one episode from the initial state, choosing every move with a
/// fresh search of `budget` forward-model calls.
pub fn play_episode<E: Environment, R: Rng + ?Sized>(
    env: &E,
    params: SearchParams,
    budget: u64,
    rng: &mut R,
) -> Result<Vec<Move<E::State>>, SearchError> {
    let mut state = env.initial_state();
    let mut moves = Vec::new();
    while !env.is_terminal(&state) {
        let mut meter = BudgetMeter::new(budget);
        let result = search(env, &state, params, &mut meter, rng, false)?;
        let next = env.transition(&state, result.action, rng);
        let after = observe(env, next);
        moves.push(Move { before: state, search: result, after: after.clone() });
        state = after.state;
    }
    Ok(moves)
}

fn run_mdp<E: Environment, R: Rng + ?Sized>(
    env: &E,
    cell: &Cell,
    rng: &mut R,
    proto: &RunRecord,
) -> Result<Vec<RunRecord>, HarnessError> {
    let AlgorithmSpec::Tree { policy, c, rl, q } = cell.algorithm else {
        return Err(HarnessError::config("algorithms", "not a tree policy"));
    };
    let mut params = SearchParams::new(policy, c, rl);
    if let Some(q) = q {
        params = params.with_q(q);
    }
    let runtime = |e: &dyn std::fmt::Display| HarnessError::Runtime(e.to_string());
    let moves = play_episode(env, params, cell.budget, rng).map_err(|e| runtime(&e))?;
    let scale = OutcomeScale::for_env(env);
    let bounds = env.score_bounds();
    let mut out = Vec::with_capacity(moves.len());
    let (mut total, mut used) = (0.0, 0);
    for (i, m) in moves.iter().enumerate() {
        let step = i as u64 + 1;
        let (status, score) = (m.after.status, m.after.score);
        let reward = numeric_reward(score, status, bounds).map_err(|e| runtime(&e))?;
        total += reward;
        used += m.search.forward_calls;
        out.push(RunRecord {
            step,
            action: m.search.action,
            rank: scale.ordinalize(score, status).map_err(|e| runtime(&e))?,
            status: Some(status.name().to_string()),
            score: Some(score),
            reward,
            cum_deaths: u64::from(status == GameStatus::Lost),
            mean_value: total / step as f64,
            calls: m.search.forward_calls,
            budget_used: used,
            ..proto.clone()
        });
    }
    Ok(out)
}
