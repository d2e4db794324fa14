use rand::{Rng, SeedableRng};

use super::EnvError;
use crate::mdp::{Environment, GameStatus, ScoreBounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeOutcome {
    pub status: GameStatus,
    pub score: i64,
}

/// A complete `branching`-ary game tree of fixed depth with explicit
/// outcomes per node. With `slip > 0` the chosen action is replaced by a
/// uniformly random one with that probability.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeGame {
    depth: usize,
    branching: usize,
    slip: f64,
    max_score: i64,
    /// Heap-ordered: children of `i` are `i * branching + 1 + a`.
    nodes: Vec<TreeOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeState {
    pub node: usize,
    pub depth: usize,
}

impl TreeGame {
    pub fn new(depth: usize, branching: usize, slip: f64, nodes: Vec<TreeOutcome>) -> Result<Self, EnvError> {
        if depth == 0 || branching == 0 {
            return Err(EnvError::BadParam { key: "depth", reason: "depth and branching must be positive".into() });
        }
        let expected = node_count(depth, branching);
        if nodes.len() != expected {
            return Err(EnvError::BadParam {
                key: "nodes",
                reason: format!("{} nodes given, tree has {expected}", nodes.len()),
            });
        }
        if !(0.0..=1.0).contains(&slip) {
            return Err(EnvError::BadParam { key: "slip", reason: format!("{slip} not in [0, 1]") });
        }
        let first_leaf = expected - branching.pow(depth as u32);
        if nodes[..first_leaf].iter().any(|o| o.status != GameStatus::Playing)
            || nodes[first_leaf..].iter().any(|o| o.status == GameStatus::Playing)
        {
            return Err(EnvError::BadParam {
                key: "nodes",
                reason: "inner nodes must be playing and leaves terminal".into(),
            });
        }
        let min = nodes.iter().map(|o| o.score).min().unwrap_or(0);
        if min < 0 {
            return Err(EnvError::BadParam { key: "nodes", reason: "scores must be nonnegative".into() });
        }
        let max_score = nodes.iter().map(|o| o.score).max().unwrap_or(0).max(1);
        Ok(Self { depth, branching, slip, max_score, nodes })
    }

    /// Two actions, two moves deep: everything below action 0 wins with the
    /// top score, everything below action 1 loses with score 0.
    pub fn win_lose_chain() -> Self {
        let playing = TreeOutcome { status: GameStatus::Playing, score: 0 };
        let mut nodes = vec![playing; 3];
        nodes.extend([TreeOutcome { status: GameStatus::Won, score: 1 }; 2]);
        nodes.extend([TreeOutcome { status: GameStatus::Lost, score: 0 }; 2]);
        Self::new(2, 2, 0.0, nodes).expect("chain")
    }

    /// Random scores in `0..=max_score` everywhere; leaves win or lose with
    /// equal probability.
    pub fn random(depth: usize, branching: usize, max_score: i64, slip: f64, seed: u64) -> Result<Self, EnvError> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let count = node_count(depth, branching);
        let first_leaf = count - branching.pow(depth as u32);
        let nodes = (0..count)
            .map(|i| {
                let status = if i < first_leaf {
                    GameStatus::Playing
                } else if rng.random::<bool>() {
                    GameStatus::Won
                } else {
                    GameStatus::Lost
                };
                TreeOutcome { status, score: rng.random_range(0..=max_score) }
            })
            .collect();
        Self::new(depth, branching, slip, nodes)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn branching(&self) -> usize {
        self.branching
    }

    pub fn outcome(&self, state: &TreeState) -> TreeOutcome {
        self.nodes[state.node]
    }
}

fn node_count(depth: usize, branching: usize) -> usize {
    (0..=depth).map(|d| branching.pow(d as u32)).sum()
}

impl Environment for TreeGame {
    type State = TreeState;

    fn initial_state(&self) -> TreeState {
        TreeState { node: 0, depth: 0 }
    }

    fn status(&self, state: &TreeState) -> GameStatus {
        self.nodes[state.node].status
    }

    fn score(&self, state: &TreeState) -> i64 {
        self.nodes[state.node].score
    }

    fn legal_actions(&self, state: &TreeState) -> Vec<usize> {
        if state.depth < self.depth {
            (0..self.branching).collect()
        } else {
            Vec::new()
        }
    }

    fn transition<R: Rng + ?Sized>(&self, state: &TreeState, action: usize, rng: &mut R) -> TreeState {
        let action = if self.slip > 0.0 && rng.random::<f64>() < self.slip {
            rng.random_range(0..self.branching)
        } else {
            action
        };
        TreeState { node: state.node * self.branching + 1 + action, depth: state.depth + 1 }
    }

    fn score_bounds(&self) -> ScoreBounds {
        ScoreBounds::new(0, self.max_score).expect("max_score >= 1")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_outcomes() {
        let env = TreeGame::win_lose_chain();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        for first in 0..2 {
            for second in 0..2 {
                let s = env.transition(&env.initial_state(), first, &mut rng);
                let s = env.transition(&s, second, &mut rng);
                assert!(env.is_terminal(&s));
                let expected = if first == 0 { GameStatus::Won } else { GameStatus::Lost };
                assert_eq!(env.status(&s), expected);
            }
        }
    }

    #[test]
    fn random_tree_is_well_formed() {
        let env = TreeGame::random(3, 3, 20, 0.1, 5).unwrap();
        assert_eq!(env.nodes.len(), 1 + 3 + 9 + 27);
        assert!(env.score_bounds().max() <= 20);
    }
}
