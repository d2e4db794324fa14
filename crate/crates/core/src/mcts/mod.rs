//! Budgeted Monte Carlo tree search with interchangeable tree policies.
//!
//! Iterations re-simulate the in-tree path from the root state (open loop),
//! expand one untried action, roll out with uniformly random actions for at
//! most `rl` moves and back the reached (status, score) pair up the path.
//! Selection uses one of three exploitation terms: the mean numeric reward
//! (UCT), a max/mean blend (MixMax) or the node-local Borda score (O-MCTS).

mod node;
mod search;

pub use node::{select_child_borda, select_child_mixmax, select_child_uct, SearchNode};
pub use search::{backpropagate, expand, rollout, search, Expansion, Rollout, SearchResult, SearchTree};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mdp::MdpError;
use crate::ordinal::OrdinalError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("search started from a terminal state")]
    TerminalRoot,
    #[error("action slot {0} has not been visited; expansion must come first")]
    UnvisitedAction(usize),
    #[error("node has no actions")]
    NoActions,
    #[error("invalid search parameter `{key}`: {reason}")]
    BadParam { key: &'static str, reason: String },
    #[error(transparent)]
    Mdp(#[from] MdpError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TreePolicy {
    #[serde(rename = "uct")]
    Uct,
    #[serde(rename = "mixmax")]
    MixMax,
    #[serde(rename = "o-mcts")]
    Borda,
}

impl TreePolicy {
    pub const ALL: [TreePolicy; 3] = [Self::Uct, Self::MixMax, Self::Borda];

    pub fn name(self) -> &'static str {
        match self {
            Self::Uct => "uct",
            Self::MixMax => "mixmax",
            Self::Borda => "o-mcts",
        }
    }
}

impl fmt::Display for TreePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TreePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown tree policy {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub c: f64,
    /// Maximum number of random moves after the expanded node.
    pub rl: usize,
    pub policy: TreePolicy,
    /// Weight of the maximum in MixMax selection.
    pub mixmax_q: f64,
}

impl SearchParams {
    pub fn new(policy: TreePolicy, c: f64, rl: usize) -> Self {
        Self { c, rl, policy, mixmax_q: 0.25 }
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.mixmax_q = q;
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.rl < 1 {
            return Err(SearchError::BadParam { key: "rl", reason: "must be at least 1".into() });
        }
        if self.c.is_nan() || self.c < 0.0 {
            return Err(SearchError::BadParam { key: "c", reason: format!("{} is negative", self.c) });
        }
        if !(0.0..=1.0).contains(&self.mixmax_q) {
            return Err(SearchError::BadParam { key: "q", reason: format!("{} not in [0, 1]", self.mixmax_q) });
        }
        Ok(())
    }
}

impl Default for SearchParams {
    fn default() -> Self {
        Self::new(TreePolicy::Uct, std::f64::consts::FRAC_1_SQRT_2, 10)
    }
}
