//! Arm-selection policies over a fixed arm set. All policies share the
//! exploration bonus `c·sqrt(2·ln n / n_j)` (plain UCB1 at `c = 1`) and the
//! first-visit rule: never-pulled arms are returned first, lowest index
//! first.

mod multisbm;
mod ohucb;
mod oucb;
mod policy;
mod regret;
mod ucb1;

pub use multisbm::MultiSbm;
pub use ohucb::{Ohucb, MIN_ARM_SAMPLES, MIN_PAIR_SAMPLES};
pub use oucb::Oucb;
pub use policy::{BanditPolicy, PolicyKind};
pub use regret::{borda_regret, BordaRegret};
pub use ucb1::Ucb1;

use thiserror::Error;

use crate::ordinal::OrdinalError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BanditError {
    #[error("bandit has no arms")]
    NoArms,
    #[error("arm {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },
    #[error("update for arm {got} but arm {expected:?} was selected")]
    UnexpectedArm { expected: Option<usize>, got: usize },
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

pub(crate) fn exploration_bonus(c: f64, total: u64, pulls: u64) -> f64 {
    c * (2.0 * (total as f64).ln() / pulls as f64).sqrt()
}

/// Lowest-index maximiser of `score` over `arms`.
pub(crate) fn argmax_by<I, F>(arms: I, mut score: F) -> Option<usize>
where
    I: IntoIterator<Item = usize>,
    F: FnMut(usize) -> f64,
{
    let mut best: Option<(usize, f64)> = None;
    for arm in arms {
        let s = score(arm);
        match best {
            Some((_, b)) if s <= b => {}
            _ => best = Some((arm, s)),
        }
    }
    best.map(|(arm, _)| arm)
}
