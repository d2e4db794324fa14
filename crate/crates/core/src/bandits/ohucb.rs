use super::oucb::Oucb;
use super::BanditError;
use crate::ordinal::{mann_whitney_z_from_prob, Hierarchy};

/// Each arm needs more than this many pulls before it takes part in a
/// significance test.
pub const MIN_ARM_SAMPLES: u64 = 3;
/// The two arms of a test need more than this many pulls combined.
pub const MIN_PAIR_SAMPLES: u64 = 20;

/// Hierarchical Borda UCB: one O-UCB agent per hierarchy level, each seeing
/// outcomes projected through its level. Levels are visited coarse to fine
/// and arms that are significantly worse at a level are filtered out.
#[derive(Debug, Clone, PartialEq)]
pub struct Ohucb {
    hierarchy: Hierarchy,
    agents: Vec<Oucb>,
}

impl Ohucb {
    pub fn new(arms: usize, hierarchy: Hierarchy) -> Result<Self, BanditError> {
        let agents = (0..hierarchy.depth())
            .map(|_| Oucb::new(arms, hierarchy.scale_size()))
            .collect::<Result<_, _>>()?;
        Ok(Self { hierarchy, agents })
    }

    pub fn arms(&self) -> usize {
        self.agents[0].arms()
    }

    pub fn hierarchy(&self) -> &Hierarchy {
        &self.hierarchy
    }

    pub fn agents(&self) -> &[Oucb] {
        &self.agents
    }

    pub fn select(&self, c: f64) -> usize {
        let first = &self.agents[0];
        if let Some(fresh) = first.first_unpulled() {
            return fresh;
        }
        let mut valid: Vec<usize> = (0..self.arms()).collect();
        let z_critical = self.hierarchy.z_critical();
        for (level, agent) in self.agents.iter().enumerate() {
            let table = agent.table();
            let best = self.level_best(level, &valid);
            let n_best = agent.pulls(best);
            valid.retain(|&other| {
                if other == best {
                    return true;
                }
                let n_other = agent.pulls(other);
                if n_best <= MIN_ARM_SAMPLES
                    || n_other <= MIN_ARM_SAMPLES
                    || n_best + n_other <= MIN_PAIR_SAMPLES
                {
                    return true;
                }
                let z = mann_whitney_z_from_prob(table.beat(best, other), n_best, n_other);
                z < z_critical
            });
            if valid.len() == 1 {
                return valid[0];
            }
        }
        let last = self.agents.last().expect("at least one level");
        last.select_among(valid.iter().copied(), c)
    }

    /// Highest Borda score at `level` among `valid`; exact ties are broken by
    /// the finer levels in order, then by lowest index.
    fn level_best(&self, level: usize, valid: &[usize]) -> usize {
        let mut best = valid[0];
        for &arm in &valid[1..] {
            for agent in &self.agents[level..] {
                let (b, a) = (agent.table().borda(best), agent.table().borda(arm));
                if a != b {
                    if a > b {
                        best = arm;
                    }
                    break;
                }
            }
        }
        best
    }

    /// Feeds `rank` to every level, projected through that level.
    pub fn update(&mut self, arm: usize, rank: usize) -> Result<(), BanditError> {
        if arm >= self.arms() {
            return Err(BanditError::ArmOutOfRange { arm, arms: self.arms() });
        }
        self.hierarchy.project(0, rank)?;
        for (level, agent) in self.agents.iter_mut().enumerate() {
            let projected = self.hierarchy.project(level, rank)?;
            agent.update(arm, projected)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn flat_hierarchy_reduces_to_oucb() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut oh = Ohucb::new(3, Hierarchy::flat(5, f64::INFINITY).unwrap()).unwrap();
        let mut o = Oucb::new(3, 5).unwrap();
        for _ in 0..2000 {
            let a = o.select(0.3);
            assert_eq!(oh.select(0.3), a);
            let rank = (rng.random_range(0..5) + a).min(4);
            o.update(a, rank).unwrap();
            oh.update(a, rank).unwrap();
        }
    }

    #[test]
    fn coarse_level_sees_projected_outcome() {
        let h = Hierarchy::new(4, vec![vec![0]], 0.65).unwrap();
        let mut oh = Ohucb::new(2, h).unwrap();
        oh.update(1, 1).unwrap();
        assert_eq!(oh.agents()[0].table().dist(1).counts(), &[0, 0, 0, 1]);
        assert_eq!(oh.agents()[1].table().dist(1).counts(), &[0, 1, 0, 0]);
    }

    #[test]
    fn lockstep_pull_counts() {
        let h = Hierarchy::new(4, vec![vec![0], vec![0, 2]], 0.65).unwrap();
        let mut oh = Ohucb::new(3, h).unwrap();
        for t in 0..40usize {
            let arm = oh.select(0.4);
            oh.update(arm, t % 4).unwrap();
            for a in 0..3 {
                let n = oh.agents()[0].pulls(a);
                assert!(oh.agents().iter().all(|ag| ag.pulls(a) == n));
            }
        }
    }

    #[test]
    fn equal_coarse_distributions_defer_to_fine_level() {
        // No arm ever dies, so the coarse level sees identical point masses
        // and removes nothing; the fine level decides.
        let h = Hierarchy::new(4, vec![vec![0]], 0.65).unwrap();
        let mut oh = Ohucb::new(2, h).unwrap();
        for _ in 0..30 {
            oh.update(0, 1).unwrap();
            oh.update(1, 2).unwrap();
        }
        assert_eq!(oh.select(0.0), 1);
    }

    #[test]
    fn significantly_worse_arm_is_filtered() {
        // Arm 0 dies a lot but has the best fine-level Borda score once
        // alive outcomes dominate; the coarse level must filter it.
        let h = Hierarchy::new(4, vec![vec![0]], 0.65).unwrap();
        let mut oh = Ohucb::new(2, h).unwrap();
        for i in 0..30 {
            oh.update(0, if i % 3 == 0 { 0 } else { 3 }).unwrap();
            oh.update(1, 1).unwrap();
        }
        let last = oh.agents().last().unwrap();
        assert!(last.table().borda(0) > last.table().borda(1));
        assert_eq!(oh.select(0.0), 1);
    }

    #[test]
    fn sample_size_guard_keeps_arms() {
        let h = Hierarchy::new(4, vec![vec![0]], 0.65).unwrap();
        let mut oh = Ohucb::new(2, h).unwrap();
        // 3 pulls of the dying arm: below the per-arm guard.
        for _ in 0..3 {
            oh.update(0, 0).unwrap();
        }
        for _ in 0..30 {
            oh.update(1, 1).unwrap();
        }
        // Without the guard, arm 0 would be removed at the coarse level.
        // It is kept, so the fine level decides with exploration.
        let last = oh.agents().last().unwrap();
        let expected = last.select(5.0);
        assert_eq!(oh.select(5.0), expected);
        assert_eq!(expected, 0);
    }
}
