use rand::Rng;

use super::EnvError;
use crate::mdp::{Environment, GameStatus, ScoreBounds};

pub const WALK_RIGHT: usize = 0;
pub const JUMP: usize = 1;
pub const STAND_STILL: usize = 2;

/// A one-dimensional track with deadly gaps.
///
/// Walking moves one cell, jumping two. Walking into a gap, landing in one,
/// or failing a jump over one (probability `1 - p_jump`) loses the game with
/// score 0. Reaching the last cell wins. Standing still never changes the
/// position. When the step limit runs out the episode ends with status
/// `Playing` and the current score. The score is the position reached.
#[derive(Debug, Clone, PartialEq)]
pub struct GapPlatformer {
    length: usize,
    gaps: Vec<usize>,
    p_jump: f64,
    step_limit: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PlatformerState {
    pub position: usize,
    pub steps: usize,
    pub status: GameStatus,
}

impl Default for GapPlatformer {
    fn default() -> Self {
        Self::new(12, vec![4, 8], 0.7, 60).expect("default platformer")
    }
}

impl GapPlatformer {
    pub fn new(length: usize, mut gaps: Vec<usize>, p_jump: f64, step_limit: usize) -> Result<Self, EnvError> {
        if length < 2 {
            return Err(EnvError::BadParam { key: "length", reason: "track needs at least 2 cells".into() });
        }
        gaps.sort_unstable();
        gaps.dedup();
        if let Some(&g) = gaps.iter().find(|&&g| g == 0 || g >= length) {
            return Err(EnvError::BadParam {
                key: "gaps",
                reason: format!("gap {g} must lie strictly between start and goal"),
            });
        }
        if !(0.0..=1.0).contains(&p_jump) {
            return Err(EnvError::BadParam { key: "p_jump", reason: format!("{p_jump} not in [0, 1]") });
        }
        if step_limit == 0 {
            return Err(EnvError::BadParam { key: "step_limit", reason: "must be at least 1".into() });
        }
        Ok(Self { length, gaps, p_jump, step_limit })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn gaps(&self) -> &[usize] {
        &self.gaps
    }

    pub fn p_jump(&self) -> f64 {
        self.p_jump
    }

    pub fn step_limit(&self) -> usize {
        self.step_limit
    }

    pub fn is_gap(&self, cell: usize) -> bool {
        self.gaps.binary_search(&cell).is_ok()
    }

    /// The next cell is a gap.
    pub fn is_gap_adjacent(&self, state: &PlatformerState) -> bool {
        state.status == GameStatus::Playing && self.is_gap(state.position + 1)
    }

    fn lost(steps: usize) -> PlatformerState {
        PlatformerState { position: 0, steps, status: GameStatus::Lost }
    }
}

impl Environment for GapPlatformer {
    type State = PlatformerState;

    fn initial_state(&self) -> PlatformerState {
        PlatformerState { position: 0, steps: 0, status: GameStatus::Playing }
    }

    fn status(&self, state: &PlatformerState) -> GameStatus {
        state.status
    }

    fn score(&self, state: &PlatformerState) -> i64 {
        state.position as i64
    }

    fn legal_actions(&self, state: &PlatformerState) -> Vec<usize> {
        if state.status == GameStatus::Playing && state.steps < self.step_limit {
            vec![WALK_RIGHT, JUMP, STAND_STILL]
        } else {
            Vec::new()
        }
    }

    fn transition<R: Rng + ?Sized>(&self, state: &PlatformerState, action: usize, rng: &mut R) -> PlatformerState {
        let steps = state.steps + 1;
        let position = match action {
            WALK_RIGHT => state.position + 1,
            JUMP => {
                let target = (state.position + 2).min(self.length);
                let over_gap = (state.position + 1..target).any(|c| self.is_gap(c));
                if over_gap && !self.is_gap(target) && rng.random::<f64>() >= self.p_jump {
                    return Self::lost(steps);
                }
                target
            }
            _ => state.position,
        };
        if self.is_gap(position) {
            return Self::lost(steps);
        }
        let status = if position >= self.length { GameStatus::Won } else { GameStatus::Playing };
        PlatformerState { position, steps, status }
    }

    fn score_bounds(&self) -> ScoreBounds {
        ScoreBounds::new(0, self.length as i64).expect("length >= 2")
    }

    fn action_name(&self, action: usize) -> String {
        match action {
            WALK_RIGHT => "walk-right",
            JUMP => "jump",
            STAND_STILL => "stand-still",
            _ => "?",
        }
        .to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::{simulate, BudgetMeter, MdpError};
    use rand::SeedableRng;

    fn at(position: usize) -> PlatformerState {
        PlatformerState { position, steps: 0, status: GameStatus::Playing }
    }

    #[test]
    fn standing_still_never_scores() {
        let env = GapPlatformer::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let mut s = env.initial_state();
        while !env.is_terminal(&s) {
            s = env.transition(&s, STAND_STILL, &mut rng);
            assert_eq!(env.score(&s), 0);
        }
        assert_eq!(s.steps, 60);
        assert_eq!(s.status, GameStatus::Playing);
    }

    #[test]
    fn certain_jumps_win() {
        let env = GapPlatformer::new(12, vec![4, 8], 1.0, 60).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let mut s = env.initial_state();
        while !env.is_terminal(&s) {
            let a = if env.is_gap_adjacent(&s) { JUMP } else { WALK_RIGHT };
            s = env.transition(&s, a, &mut rng);
        }
        assert_eq!(s.status, GameStatus::Won);
        assert_eq!(env.score(&s), 12);
    }

    #[test]
    fn walking_into_gap_loses() {
        let env = GapPlatformer::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let s = env.transition(&at(3), WALK_RIGHT, &mut rng);
        assert_eq!(s.status, GameStatus::Lost);
        assert_eq!(env.score(&s), 0);
        // Jumping from two cells before a gap lands in it.
        let s = env.transition(&at(2), JUMP, &mut rng);
        assert_eq!(s.status, GameStatus::Lost);
        // Jumping on open ground always succeeds.
        let s = env.transition(&at(0), JUMP, &mut rng);
        assert_eq!((s.position, s.status), (2, GameStatus::Playing));
    }

    #[test]
    fn jump_over_gap_dies_thirty_percent() {
        let env = GapPlatformer::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let mut meter = BudgetMeter::new(10_000);
        let mut deaths = 0;
        for _ in 0..10_000 {
            let obs = simulate(&env, &at(3), JUMP, &mut meter, &mut rng).unwrap();
            match obs.status {
                GameStatus::Lost => deaths += 1,
                _ => assert_eq!(obs.score, 5),
            }
        }
        let rate = deaths as f64 / 10_000.0;
        assert!((rate - 0.3).abs() < 0.02, "{rate}");
        assert_eq!(meter.used(), 10_000);
        assert!(matches!(
            simulate(&env, &at(3), JUMP, &mut meter, &mut rng),
            Err(MdpError::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn simulate_is_reproducible_and_pure() {
        let env = GapPlatformer::default();
        let start = at(3);
        let run = || {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
            let mut meter = BudgetMeter::new(5);
            (0..5)
                .map(|_| simulate(&env, &start, JUMP, &mut meter, &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
        assert_eq!(start, at(3));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mut meter = BudgetMeter::new(5);
        assert_eq!(
            simulate(&env, &start, 7, &mut meter, &mut rng),
            Err(MdpError::IllegalAction { action: 7 })
        );
        assert_eq!(meter.used(), 0);
    }

    #[test]
    fn terminal_states_offer_no_actions() {
        let env = GapPlatformer::default();
        let lost = PlatformerState { position: 0, steps: 3, status: GameStatus::Lost };
        let won = PlatformerState { position: 12, steps: 9, status: GameStatus::Won };
        assert!(env.legal_actions(&lost).is_empty());
        assert!(env.legal_actions(&won).is_empty());
        assert_eq!(env.legal_actions(&at(5)).len(), 3);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(GapPlatformer::new(12, vec![12], 0.7, 60).is_err());
        assert!(GapPlatformer::new(12, vec![4], 1.5, 60).is_err());
        assert!(GapPlatformer::new(1, vec![], 0.7, 60).is_err());
        assert!(GapPlatformer::new(12, vec![4], 0.7, 0).is_err());
    }
}
