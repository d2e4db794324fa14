//! The environment contract: a stochastic forward model metered by a call
//! budget, plus the mappings from (status, score) pairs to numeric rewards
//! and to ordinal ranks.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::OrdinalScale;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MdpError {
    #[error("forward-model budget of {limit} calls exhausted")]
    BudgetExhausted { limit: u64 },
    #[error("action {action} is not legal in this state")]
    IllegalAction { action: usize },
    #[error("score bounds need min < max, got [{min}, {max}]")]
    BadBounds { min: i64, max: i64 },
    #[error("score {score} outside [{min}, {max}]")]
    ScoreOutOfRange { score: i64, min: i64, max: i64 },
    #[error("({status}, {score}) is not on the outcome scale")]
    UnknownOutcome { status: GameStatus, score: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameStatus {
    Lost,
    Playing,
    Won,
}

impl GameStatus {
    pub const ALL: [GameStatus; 3] = [Self::Lost, Self::Playing, Self::Won];

    pub fn is_terminal(self) -> bool {
        self != Self::Playing
    }

    /// Position of the status band: lost < playing < won.
    pub fn band(self) -> usize {
        match self {
            Self::Lost => 0,
            Self::Playing => 1,
            Self::Won => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Lost => "lost",
            Self::Playing => "playing",
            Self::Won => "won",
        }
    }
}

impl fmt::Display for GameStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreBounds {
    min: i64,
    max: i64,
}

impl ScoreBounds {
    pub fn new(min: i64, max: i64) -> Result<Self, MdpError> {
        if min >= max {
            return Err(MdpError::BadBounds { min, max });
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> i64 {
        self.min
    }

    pub fn max(&self) -> i64 {
        self.max
    }

    pub fn contains(&self, score: i64) -> bool {
        (self.min..=self.max).contains(&score)
    }
}

/// Counts forward-model calls against a fixed limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetMeter {
    limit: u64,
    used: u64,
}

impl BudgetMeter {
    pub fn new(limit: u64) -> Self {
        Self { limit, used: 0 }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.limit
    }

    fn charge(&mut self) -> Result<(), MdpError> {
        if self.is_exhausted() {
            return Err(MdpError::BudgetExhausted { limit: self.limit });
        }
        self.used += 1;
        Ok(())
    }
}

/// A state together with what the agent may observe about it.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation<S> {
    pub state: S,
    pub status: GameStatus,
    pub score: i64,
    pub available_actions: Vec<usize>,
}

/// A finite-score MDP with a stochastic forward model.
///
/// States are opaque, environment-owned values; `transition` must not
/// mutate its input and must be deterministic given the random stream.
/// `legal_actions` is empty exactly when the state is terminal; lost and
/// won states are always terminal.
pub trait Environment {
    type State: Clone + fmt::Debug;

    fn initial_state(&self) -> Self::State;

    fn status(&self, state: &Self::State) -> GameStatus;

    fn score(&self, state: &Self::State) -> i64;

    fn legal_actions(&self, state: &Self::State) -> Vec<usize>;

    /// Samples a successor. Callers guarantee `action` is legal.
    fn transition<R: Rng + ?Sized>(&self, state: &Self::State, action: usize, rng: &mut R) -> Self::State;

    fn score_bounds(&self) -> ScoreBounds;

    /// Every score a state can carry, ascending. Defaults to every integer
    /// within the bounds.
    fn reachable_scores(&self) -> Vec<i64> {
        let b = self.score_bounds();
        (b.min()..=b.max()).collect()
    }

    /// Terminal states offer no actions. This includes states that end by
    /// a step limit while still reporting `Playing`.
    fn is_terminal(&self, state: &Self::State) -> bool {
        self.legal_actions(state).is_empty()
    }

    fn action_name(&self, action: usize) -> String {
        action.to_string()
    }
}

pub fn observe<E: Environment>(env: &E, state: E::State) -> Observation<E::State> {
    Observation {
        status: env.status(&state),
        score: env.score(&state),
        available_actions: env.legal_actions(&state),
        state,
    }
}

/// One metered forward-model call.
pub fn simulate<E: Environment, R: Rng + ?Sized>(
    env: &E,
    state: &E::State,
    action: usize,
    meter: &mut BudgetMeter,
    rng: &mut R,
) -> Result<Observation<E::State>, MdpError> {
    if meter.is_exhausted() {
        return Err(MdpError::BudgetExhausted { limit: meter.limit() });
    }
    if !env.legal_actions(state).contains(&action) {
        return Err(MdpError::IllegalAction { action });
    }
    meter.charge()?;
    Ok(observe(env, env.transition(state, action, rng)))
}

/// Affine map of `[min, max]` onto `[0, 1]`.
pub fn normalize_score(score: i64, bounds: ScoreBounds) -> Result<f64, MdpError> {
    if !bounds.contains(score) {
        return Err(MdpError::ScoreOutOfRange { score, min: bounds.min, max: bounds.max });
    }
    Ok((score - bounds.min) as f64 / (bounds.max - bounds.min) as f64)
}

/// Splits `[0, 1]` into lost / playing / won thirds and places the
/// normalised score inside its status band.
pub fn map_reward(normalized: f64, status: GameStatus) -> f64 {
    normalized / 3.0 + status.band() as f64 / 3.0
}

pub fn numeric_reward(score: i64, status: GameStatus, bounds: ScoreBounds) -> Result<f64, MdpError> {
    Ok(map_reward(normalize_score(score, bounds)?, status))
}

/// Ordinal scale over (status, score) pairs: every lost outcome below every
/// playing outcome below every won outcome, scores ascending inside a band.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeScale {
    scores: Vec<i64>,
    scale: OrdinalScale,
}

impl OutcomeScale {
    pub fn new(mut scores: Vec<i64>) -> Self {
        scores.sort_unstable();
        scores.dedup();
        let labels = GameStatus::ALL
            .iter()
            .flat_map(|s| scores.iter().map(move |score| format!("{s}:{score}")));
        let scale = OrdinalScale::new(labels).expect("distinct labels");
        Self { scores, scale }
    }

    pub fn for_env<E: Environment>(env: &E) -> Self {
        Self::new(env.reachable_scores())
    }

    pub fn scale(&self) -> &OrdinalScale {
        &self.scale
    }

    pub fn len(&self) -> usize {
        self.scale.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scale.is_empty()
    }

    pub fn ordinalize(&self, score: i64, status: GameStatus) -> Result<usize, MdpError> {
        let idx = self
            .scores
            .binary_search(&score)
            .map_err(|_| MdpError::UnknownOutcome { status, score })?;
        Ok(status.band() * self.scores.len() + idx)
    }
}
