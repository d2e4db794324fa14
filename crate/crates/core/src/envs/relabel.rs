use std::collections::BTreeMap;

use rand::Rng;

use super::EnvError;
use crate::mdp::{Environment, GameStatus, ScoreBounds};

/// Wraps an environment and renames its scores through a strictly
/// increasing integer map. Transitions, statuses and actions are untouched,
/// so the ordinal structure of outcomes is preserved exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Relabeled<E> {
    inner: E,
    map: BTreeMap<i64, i64>,
}

impl<E: Environment> Relabeled<E> {
    pub fn new<F: FnMut(i64) -> i64>(inner: E, mut f: F) -> Result<Self, EnvError> {
        let mut map = BTreeMap::new();
        let mut previous: Option<i64> = None;
        for score in inner.reachable_scores() {
            let mapped = f(score);
            if previous.is_some_and(|p| mapped <= p) {
                return Err(EnvError::BadParam {
                    key: "relabel",
                    reason: "score map must be strictly increasing".into(),
                });
            }
            previous = Some(mapped);
            map.insert(score, mapped);
        }
        Ok(Self { inner, map })
    }

    /// A random strictly increasing map with positive gaps up to `max_gap`.
    pub fn random<R: Rng + ?Sized>(inner: E, max_gap: i64, rng: &mut R) -> Result<Self, EnvError> {
        let mut current = rng.random_range(-max_gap..=max_gap);
        Self::new(inner, |_| {
            current += rng.random_range(1..=max_gap);
            current
        })
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }
}

impl<E: Environment> Environment for Relabeled<E> {
    type State = E::State;

    fn initial_state(&self) -> E::State {
        self.inner.initial_state()
    }

    fn status(&self, state: &E::State) -> GameStatus {
        self.inner.status(state)
    }

    fn score(&self, state: &E::State) -> i64 {
        self.map[&self.inner.score(state)]
    }

    fn legal_actions(&self, state: &E::State) -> Vec<usize> {
        self.inner.legal_actions(state)
    }

    fn transition<R: Rng + ?Sized>(&self, state: &E::State, action: usize, rng: &mut R) -> E::State {
        self.inner.transition(state, action, rng)
    }

    fn score_bounds(&self) -> ScoreBounds {
        let lo = *self.map.values().next().expect("nonempty");
        let hi = *self.map.values().next_back().expect("nonempty");
        ScoreBounds::new(lo, hi).expect("strictly increasing map")
    }

    fn reachable_scores(&self) -> Vec<i64> {
        self.map.values().copied().collect()
    }

    fn is_terminal(&self, state: &E::State) -> bool {
        self.inner.is_terminal(state)
    }

    fn action_name(&self, action: usize) -> String {
        self.inner.action_name(action)
    }
}
