use rand::Rng;

use super::ucb1::Ucb1;
use super::BanditError;

/// Reduction from per-arm preference feedback to numeric bandits: one UCB1
/// instance per arm, indexed by the previously played arm and fed 1 when the
/// new outcome strictly beats the previous one, 0 otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSbm {
    bandits: Vec<Ucb1>,
    last: Option<(usize, usize)>,
    tie_feedback: f64,
}

impl MultiSbm {
    pub fn new(arms: usize) -> Result<Self, BanditError> {
        if arms == 0 {
            return Err(BanditError::NoArms);
        }
        Ok(Self {
            bandits: vec![Ucb1::new(arms)?; arms],
            last: None,
            tie_feedback: 0.0,
        })
    }

    /// Feedback for an outcome equal to the previous one (0 by default: only
    /// a strictly better outcome counts as a win).
    pub fn with_tie_feedback(mut self, value: f64) -> Self {
        self.tie_feedback = value;
        self
    }

    pub fn arms(&self) -> usize {
        self.bandits.len()
    }

    /// Last played arm and its observed rank.
    pub fn last(&self) -> Option<(usize, usize)> {
        self.last
    }

    pub fn bandit(&self, arm: usize) -> &Ucb1 {
        &self.bandits[arm]
    }

    pub fn select<R: Rng + ?Sized>(&self, c: f64, rng: &mut R) -> usize {
        match self.last {
            None => rng.random_range(0..self.arms()),
            Some((prev, _)) => self.bandits[prev].select(c),
        }
    }

    pub fn update(&mut self, arm: usize, rank: usize) -> Result<(), BanditError> {
        if arm >= self.arms() {
            return Err(BanditError::ArmOutOfRange { arm, arms: self.arms() });
        }
        if let Some((prev, prev_rank)) = self.last {
            let feedback = match rank.cmp(&prev_rank) {
                std::cmp::Ordering::Greater => 1.0,
                std::cmp::Ordering::Equal => self.tie_feedback,
                std::cmp::Ordering::Less => 0.0,
            };
            self.bandits[prev].update(arm, feedback)?;
        }
        self.last = Some((arm, rank));
        Ok(())
    }

    /// One round: select, observe the outcome rank of the chosen arm, update.
    pub fn step<R, F>(&mut self, c: f64, rng: &mut R, mut observe: F) -> Result<usize, BanditError>
    where
        R: Rng + ?Sized,
        F: FnMut(usize) -> usize,
    {
        let arm = self.select(c, rng);
        let rank = observe(arm);
        self.update(arm, rank)?;
        Ok(arm)
    }
}
