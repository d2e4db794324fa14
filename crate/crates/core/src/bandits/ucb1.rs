use super::{argmax_by, exploration_bonus, BanditError};

/// Numeric UCB over rewards in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ucb1 {
    pulls: Vec<u64>,
    sums: Vec<f64>,
    total: u64,
}

impl Ucb1 {
    pub fn new(arms: usize) -> Result<Self, BanditError> {
        if arms == 0 {
            return Err(BanditError::NoArms);
        }
        Ok(Self {
            pulls: vec![0; arms],
            sums: vec![0.0; arms],
            total: 0,
        })
    }

    pub fn arms(&self) -> usize {
        self.pulls.len()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn pulls(&self, arm: usize) -> u64 {
        self.pulls[arm]
    }

    pub fn mean(&self, arm: usize) -> Option<f64> {
        (self.pulls[arm] > 0).then(|| self.sums[arm] / self.pulls[arm] as f64)
    }

    pub fn select(&self, c: f64) -> usize {
        if let Some(fresh) = self.pulls.iter().position(|&n| n == 0) {
            return fresh;
        }
        argmax_by(0..self.arms(), |a| {
            self.sums[a] / self.pulls[a] as f64 + exploration_bonus(c, self.total, self.pulls[a])
        })
        .expect("at least one arm")
    }

    pub fn update(&mut self, arm: usize, reward: f64) -> Result<(), BanditError> {
        if arm >= self.arms() {
            return Err(BanditError::ArmOutOfRange { arm, arms: self.arms() });
        }
        self.pulls[arm] += 1;
        self.sums[arm] += reward;
        self.total += 1;
        Ok(())
    }
}
