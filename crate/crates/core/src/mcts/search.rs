use rand::Rng;

use super::node::{select_child_borda, select_child_mixmax, select_child_uct, SearchNode};
use super::{SearchError, SearchParams, TreePolicy};
use crate::mdp::{
    numeric_reward, simulate, BudgetMeter, Environment, GameStatus, MdpError, Observation, OutcomeScale,
    ScoreBounds,
};

const ROOT: usize = 0;

/// Arena of search nodes. Nodes are keyed by action path from the root;
/// a node's action list is fixed the first time a non-terminal state
/// reaches it.
#[derive(Debug, Clone)]
pub struct SearchTree {
    nodes: Vec<Option<SearchNode>>,
    params: SearchParams,
    scale: OutcomeScale,
    bounds: ScoreBounds,
}

impl SearchTree {
    pub fn new<E: Environment>(env: &E, root: &E::State, params: SearchParams) -> Result<Self, SearchError> {
        params.validate()?;
        if env.is_terminal(root) {
            return Err(SearchError::TerminalRoot);
        }
        let mut tree = Self {
            nodes: vec![None],
            params,
            scale: OutcomeScale::for_env(env),
            bounds: env.score_bounds(),
        };
        tree.ensure_node(ROOT, env.legal_actions(root))?;
        Ok(tree)
    }

    pub fn params(&self) -> &SearchParams {
        &self.params
    }

    pub fn root(&self) -> &SearchNode {
        self.nodes[ROOT].as_ref().expect("root is initialised")
    }

    pub fn node(&self, id: usize) -> Option<&SearchNode> {
        self.nodes.get(id).and_then(Option::as_ref)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn ensure_node(&mut self, id: usize, actions: Vec<usize>) -> Result<(), SearchError> {
        if self.nodes[id].is_none() {
            let scale = (self.params.policy == TreePolicy::Borda).then(|| self.scale.len());
            self.nodes[id] = Some(SearchNode::new(actions, scale)?);
        }
        Ok(())
    }

    fn node_mut(&mut self, id: usize) -> &mut SearchNode {
        self.nodes[id].as_mut().expect("initialised node")
    }

    fn select(&self, id: usize) -> Result<usize, SearchError> {
        let node = self.node(id).expect("initialised node");
        let c = self.params.c;
        match self.params.policy {
            TreePolicy::Uct => select_child_uct(node, c),
            TreePolicy::MixMax => select_child_mixmax(node, c, self.params.mixmax_q),
            TreePolicy::Borda => select_child_borda(node, c),
        }
    }

    /// Most visited root action, lowest slot on ties.
    pub fn recommend(&self) -> usize {
        let root = self.root();
        let visits = root.visits();
        let mut best = 0;
        for (slot, &v) in visits.iter().enumerate().skip(1) {
            if v > visits[best] {
                best = slot;
            }
        }
        root.actions()[best]
    }
}

/// Tries the lowest untried action of `node_id` from `state` with one
/// forward-model call and attaches the resulting child.
pub fn expand<E: Environment, R: Rng + ?Sized>(
    tree: &mut SearchTree,
    node_id: usize,
    env: &E,
    state: &E::State,
    meter: &mut BudgetMeter,
    rng: &mut R,
) -> Result<Expansion<E::State>, SearchError> {
    let node = tree.node(node_id).ok_or(SearchError::NoActions)?;
    let slot = node.next_untried().ok_or(SearchError::NoActions)?;
    let obs = simulate(env, state, node.actions()[slot], meter, rng)?;
    let child = tree.nodes.len();
    tree.nodes.push(None);
    tree.node_mut(node_id).mark_tried(slot, child);
    if !obs.available_actions.is_empty() {
        tree.ensure_node(child, obs.available_actions.clone())?;
    }
    Ok(Expansion { slot, child, obs })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expansion<S> {
    pub slot: usize,
    pub child: usize,
    pub obs: Observation<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rollout<S> {
    pub state: S,
    pub status: GameStatus,
    pub score: i64,
    pub steps: usize,
    /// The budget ran out before the rollout finished.
    pub exhausted: bool,
}

/// Plays uniformly random legal actions from `state` until a terminal
/// state, `rl` moves, or budget exhaustion, and reports the last state.
pub fn rollout<E: Environment, R: Rng + ?Sized>(
    env: &E,
    state: &E::State,
    rl: usize,
    meter: &mut BudgetMeter,
    rng: &mut R,
) -> Rollout<E::State> {
    let mut current = state.clone();
    let mut steps = 0;
    let mut exhausted = false;
    while steps < rl {
        let actions = env.legal_actions(&current);
        if actions.is_empty() {
            break;
        }
        let action = actions[rng.random_range(0..actions.len())];
        match simulate(env, &current, action, meter, rng) {
            Ok(obs) => {
                current = obs.state;
                steps += 1;
            }
            Err(_) => {
                exhausted = true;
                break;
            }
        }
    }
    Rollout {
        status: env.status(&current),
        score: env.score(&current),
        state: current,
        steps,
        exhausted,
    }
}

/// Backs the outcome up through every (node, slot) pair of `path`.
pub fn backpropagate(
    tree: &mut SearchTree,
    path: &[(usize, usize)],
    status: GameStatus,
    score: i64,
) -> Result<(), SearchError> {
    let value = numeric_reward(score, status, tree.bounds)?;
    let rank = match tree.params.policy {
        TreePolicy::Borda => Some(tree.scale.ordinalize(score, status)?),
        _ => None,
    };
    for &(node, slot) in path {
        tree.node_mut(node).record(slot, value, rank)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub action: usize,
    /// Completed iterations, i.e. those whose outcome was backed up.
    pub iterations: u64,
    pub forward_calls: u64,
    pub expansions: u64,
    pub selection_steps: u64,
    pub rollout_steps: u64,
    pub root_visits: Vec<u64>,
    /// In-tree action path of every completed iteration, when requested.
    pub trace: Option<Vec<Vec<usize>>>,
}

enum Step {
    Done,
    Aborted,
}

/// Searches from `root` until `meter` is exhausted and recommends the most
/// visited root action.
pub fn search<E: Environment, R: Rng + ?Sized>(
    env: &E,
    root: &E::State,
    params: SearchParams,
    meter: &mut BudgetMeter,
    rng: &mut R,
    record_trace: bool,
) -> Result<SearchResult, SearchError> {
    let mut tree = SearchTree::new(env, root, params)?;
    let start = meter.used();
    let mut result = SearchResult {
        action: 0,
        iterations: 0,
        forward_calls: 0,
        expansions: 0,
        selection_steps: 0,
        rollout_steps: 0,
        root_visits: Vec::new(),
        trace: record_trace.then(Vec::new),
    };
    let mut path = Vec::new();
    while !meter.is_exhausted() {
        path.clear();
        if let Step::Done = iterate(&mut tree, env, root, meter, rng, &mut path, &mut result)? {
            result.iterations += 1;
            if let Some(trace) = result.trace.as_mut() {
                trace.push(path.iter().map(|&(n, s)| tree.node(n).expect("node").actions()[s]).collect());
            }
        }
    }
    result.forward_calls = meter.used() - start;
    result.root_visits = tree.root().visits().to_vec();
    result.action = tree.recommend();
    Ok(result)
}

fn iterate<E: Environment, R: Rng + ?Sized>(
    tree: &mut SearchTree,
    env: &E,
    root: &E::State,
    meter: &mut BudgetMeter,
    rng: &mut R,
    path: &mut Vec<(usize, usize)>,
    stats: &mut SearchResult,
) -> Result<Step, SearchError> {
    let mut state = root.clone();
    let mut node = ROOT;
    loop {
        let actions = env.legal_actions(&state);
        if actions.is_empty() {
            break;
        }
        tree.ensure_node(node, actions)?;
        if tree.node(node).expect("node").next_untried().is_some() {
            let expansion = match expand(tree, node, env, &state, meter, rng) {
                Ok(expanded) => expanded,
                Err(SearchError::Mdp(MdpError::BudgetExhausted { .. })) => return Ok(Step::Aborted),
                Err(e) => return Err(e),
            };
            stats.expansions += 1;
            path.push((node, expansion.slot));
            let obs = expansion.obs;
            let ro = rollout(env, &obs.state, tree.params.rl, meter, rng);
            stats.rollout_steps += ro.steps as u64;
            if ro.exhausted {
                return Ok(Step::Aborted);
            }
            backpropagate(tree, path, ro.status, ro.score)?;
            return Ok(Step::Done);
        }
        let slot = tree.select(node)?;
        let action = tree.node(node).expect("node").actions()[slot];
        let obs = match simulate(env, &state, action, meter, rng) {
            Ok(obs) => obs,
            Err(MdpError::BudgetExhausted { .. }) => return Ok(Step::Aborted),
            Err(e) => return Err(e.into()),
        };
        stats.selection_steps += 1;
        path.push((node, slot));
        node = tree.node(node).expect("node").child(slot).expect("tried slots have children");
        state = obs.state;
    }
    backpropagate(tree, path, env.status(&state), env.score(&state))?;
    Ok(Step::Done)
}
