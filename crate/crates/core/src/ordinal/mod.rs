//! Ordinal scales, empirical outcome distributions and the Borda machinery
//! shared by the bandit policies and the tree search.

mod borda;
mod distribution;
mod hierarchy;
mod mann_whitney;
mod scale;

pub use borda::{borda_scores_pmf, prob_beats_pmf, BordaTable};
pub use distribution::{prob_beats, EmpiricalDistribution};
pub use hierarchy::{hierarchy_project, Hierarchy};
pub use mann_whitney::{mann_whitney_z, mann_whitney_z_from_prob};
pub use scale::OrdinalScale;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrdinalError {
    #[error("ordinal scale needs at least one label")]
    EmptyScale,
    #[error("duplicate label {0:?} in ordinal scale")]
    DuplicateLabel(String),
    #[error("rank {rank} out of range for a scale of size {size}")]
    RankOutOfRange { rank: usize, size: usize },
    #[error("arm {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },
    #[error("distribution has no observations")]
    EmptyDistribution,
    #[error("distributions are over scales of different size ({0} vs {1})")]
    ScaleMismatch(usize, usize),
    #[error("Borda scores need at least two arms, got {0}")]
    TooFewArms(usize),
    #[error("hierarchy level {0} selects no outcome")]
    EmptyLevel(usize),
    #[error("hierarchy needs at least one level")]
    NoLevels,
    #[error("critical z value must be positive, got {0}")]
    BadCriticalValue(f64),
}
