use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{BanditError, MultiSbm, Ohucb, Oucb, Ucb1};
use crate::ordinal::Hierarchy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolicyKind {
    #[serde(rename = "ucb1")]
    Ucb1,
    #[serde(rename = "o-ucb")]
    Oucb,
    #[serde(rename = "oh-ucb")]
    Ohucb,
    #[serde(rename = "multisbm")]
    MultiSbm,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [Self::Ucb1, Self::Oucb, Self::Ohucb, Self::MultiSbm];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ucb1 => "ucb1",
            Self::Oucb => "o-ucb",
            Self::Ohucb => "oh-ucb",
            Self::MultiSbm => "multisbm",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown bandit policy {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum State {
    Ucb1(Ucb1),
    Oucb(Oucb),
    Ohucb(Ohucb),
    MultiSbm(MultiSbm),
}

/// A bandit policy with its exploration constant, enforcing the
/// select-then-update protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditPolicy {
    c: f64,
    state: State,
    pending: Option<usize>,
}

impl BanditPolicy {
    pub fn ucb1(arms: usize, c: f64) -> Result<Self, BanditError> {
        Ok(Self::wrap(c, State::Ucb1(Ucb1::new(arms)?)))
    }

    pub fn oucb(arms: usize, scale_size: usize, c: f64) -> Result<Self, BanditError> {
        Ok(Self::wrap(c, State::Oucb(Oucb::new(arms, scale_size)?)))
    }

    pub fn ohucb(arms: usize, hierarchy: Hierarchy, c: f64) -> Result<Self, BanditError> {
        Ok(Self::wrap(c, State::Ohucb(Ohucb::new(arms, hierarchy)?)))
    }

    pub fn multisbm(arms: usize, c: f64) -> Result<Self, BanditError> {
        Ok(Self::wrap(c, State::MultiSbm(MultiSbm::new(arms)?)))
    }

    fn wrap(c: f64, state: State) -> Self {
        Self { c, state, pending: None }
    }

    pub fn kind(&self) -> PolicyKind {
        match self.state {
            State::Ucb1(_) => PolicyKind::Ucb1,
            State::Oucb(_) => PolicyKind::Oucb,
            State::Ohucb(_) => PolicyKind::Ohucb,
            State::MultiSbm(_) => PolicyKind::MultiSbm,
        }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn select<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        let arm = match &self.state {
            State::Ucb1(s) => s.select(self.c),
            State::Oucb(s) => s.select(self.c),
            State::Ohucb(s) => s.select(self.c),
            State::MultiSbm(s) => s.select(self.c, rng),
        };
        self.pending = Some(arm);
        arm
    }

    /// Reports the outcome of the most recently selected arm. `rank` feeds
    /// the ordinal policies, `value` (in `[0, 1]`) feeds UCB1.
    pub fn update(&mut self, arm: usize, rank: usize, value: f64) -> Result<(), BanditError> {
        if self.pending != Some(arm) {
            return Err(BanditError::UnexpectedArm { expected: self.pending, got: arm });
        }
        match &mut self.state {
            State::Ucb1(s) => s.update(arm, value)?,
            State::Oucb(s) => s.update(arm, rank)?,
            State::Ohucb(s) => s.update(arm, rank)?,
            State::MultiSbm(s) => s.update(arm, rank)?,
        }
        self.pending = None;
        Ok(())
    }
}
