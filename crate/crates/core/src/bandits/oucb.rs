use super::{argmax_by, exploration_bonus, BanditError};
use crate::ordinal::BordaTable;

/// Borda-score UCB over ordinal outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Oucb {
    table: BordaTable,
    total: u64,
}

impl Oucb {
    pub fn new(arms: usize, scale_size: usize) -> Result<Self, BanditError> {
        if arms == 0 {
            return Err(BanditError::NoArms);
        }
        Ok(Self {
            table: BordaTable::new(arms, scale_size)?,
            total: 0,
        })
    }

    pub fn arms(&self) -> usize {
        self.table.arms()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn pulls(&self, arm: usize) -> u64 {
        self.table.pulls(arm)
    }

    pub fn table(&self) -> &BordaTable {
        &self.table
    }

    pub fn first_unpulled(&self) -> Option<usize> {
        (0..self.arms()).find(|&a| self.pulls(a) == 0)
    }

    pub fn score(&self, arm: usize, c: f64) -> f64 {
        self.table.borda(arm) + exploration_bonus(c, self.total, self.pulls(arm))
    }

    pub fn select(&self, c: f64) -> usize {
        self.select_among(0..self.arms(), c)
    }

    /// Borda-plus-bonus argmax restricted to `arms`; unpulled arms come first.
    pub(crate) fn select_among<I>(&self, arms: I, c: f64) -> usize
    where
        I: IntoIterator<Item = usize> + Clone,
    {
        if let Some(fresh) = arms.clone().into_iter().find(|&a| self.pulls(a) == 0) {
            return fresh;
        }
        argmax_by(arms, |a| self.score(a, c)).expect("at least one arm")
    }

    pub fn update(&mut self, arm: usize, rank: usize) -> Result<(), BanditError> {
        if arm >= self.arms() {
            return Err(BanditError::ArmOutOfRange { arm, arms: self.arms() });
        }
        self.table.update(arm, rank)?;
        self.total += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn pure_exploitation_picks_winner() {
        let mut o = Oucb::new(2, 3).unwrap();
        o.update(0, 2).unwrap();
        o.update(1, 0).unwrap();
        assert_eq!(o.select(0.0), 0);
    }

    #[test]
    fn first_visit_sweep() {
        let mut o = Oucb::new(4, 3).unwrap();
        for expected in 0..4 {
            let arm = o.select(0.5);
            assert_eq!(arm, expected);
            o.update(arm, 1).unwrap();
        }
    }

    #[test]
    fn skewed_arm_wins_on_borda() {
        // A: rank 0 w.p. 0.3, rank 2 w.p. 0.7. B: always rank 1.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut o = Oucb::new(2, 3).unwrap();
        let mut late_a = 0;
        for t in 0..3000 {
            let arm = o.select(0.05);
            let rank = if arm == 1 { 1 } else if rng.random::<f64>() < 0.7 { 2 } else { 0 };
            o.update(arm, rank).unwrap();
            if t >= 2000 && arm == 0 {
                late_a += 1;
            }
        }
        assert!(late_a > 900, "late pulls of A: {late_a}");
        assert!((o.table().borda(0) - 0.7).abs() < 0.05);
    }

    #[test]
    fn identical_arms_balanced() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut o = Oucb::new(3, 4).unwrap();
        let n = 12_000;
        for _ in 0..n {
            let arm = o.select(1.0);
            o.update(arm, rng.random_range(0..4)).unwrap();
        }
        for arm in 0..3 {
            let share = o.pulls(arm) as f64 / n as f64;
            assert!((share - 1.0 / 3.0).abs() < 0.05, "arm {arm} share {share}");
        }
    }

    #[test]
    fn dominant_arm_only_after_sweep_with_zero_c() {
        let mut o = Oucb::new(3, 3).unwrap();
        let ranks = [0, 2, 1];
        for t in 0..50 {
            let arm = o.select(0.0);
            if t >= 3 {
                assert_eq!(arm, 1);
            }
            o.update(arm, ranks[arm]).unwrap();
        }
    }
}
