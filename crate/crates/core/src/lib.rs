//! Ordinal-reward bandits and Monte Carlo tree search.
//!
//! Outcomes live on an [`ordinal::OrdinalScale`] and are compared only by
//! rank. The crate provides
//!
//! * the Borda machinery (`ordinal`): empirical distributions, pairwise beat
//!   probabilities, incrementally maintained Borda tables, hierarchy
//!   projection and the Mann-Whitney z statistic;
//! * bandit policies (`bandits`): UCB1, O-UCB, OH-UCB and MultiSBM;
//! * the environment contract (`mdp`) with a metered forward model;
//! * tree search (`mcts`) with UCT, MixMax and Borda tree policies;
//! * benchmark environments (`envs`) and a seeded experiment harness
//!   (`harness`) that writes per-pull CSV records and summary tables.

pub mod bandits;
pub mod envs;
pub mod harness;
pub mod mcts;
pub mod mdp;
pub mod ordinal;
