//! Built-in benchmark environments.

mod bandit;
mod platformer;
mod relabel;
mod tree;

pub use bandit::{CategoricalBandit, EnvError};
pub use platformer::{GapPlatformer, PlatformerState, JUMP, STAND_STILL, WALK_RIGHT};
pub use relabel::Relabeled;
pub use tree::{TreeGame, TreeOutcome, TreeState};
