use crate::ordinal::borda_scores_pmf;

/// Exact Borda scores of arms with known outcome distributions, used to
/// account pseudo-regret B(a*) − B(a) of each pull.
#[derive(Debug, Clone, PartialEq)]
pub struct BordaRegret {
    scores: Vec<f64>,
    best: f64,
}

impl BordaRegret {
    pub fn new(true_pmfs: &[Vec<f64>]) -> Self {
        let scores = borda_scores_pmf(true_pmfs);
        let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self { scores, best }
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn regret(&self, arm: usize) -> f64 {
        self.best - self.scores[arm]
    }
}

pub fn borda_regret(true_pmfs: &[Vec<f64>], arm: usize) -> f64 {
    BordaRegret::new(true_pmfs).regret(arm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_arm_regret() {
        // a: rank 2 w.p. 0.7 else rank 0; b: always rank 1.
        let pmfs = vec![vec![0.3, 0.0, 0.7], vec![0.0, 1.0, 0.0]];
        let r = BordaRegret::new(&pmfs);
        assert!((r.scores()[0] - 0.7).abs() < 1e-12);
        assert!((r.scores()[1] - 0.3).abs() < 1e-12);
        assert_eq!(r.regret(0), 0.0);
        assert!((r.regret(1) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn symmetric_arms_have_no_regret() {
        let pmfs = vec![vec![0.5, 0.5]; 3];
        for a in 0..3 {
            assert_eq!(borda_regret(&pmfs, a), 0.0);
        }
    }
}
