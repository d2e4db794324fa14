use serde::{Deserialize, Serialize};

use super::OrdinalError;

/// Per-rank tallies of observed outcomes with running cumulative sums, so
/// both the empirical density and the empirical CDF are available in O(1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    counts: Vec<u64>,
    cumulative: Vec<u64>,
    total: u64,
}

impl EmpiricalDistribution {
    /// An empty distribution over a scale with `size` outcomes.
    pub fn new(size: usize) -> Self {
        Self {
            counts: vec![0; size],
            cumulative: vec![0; size],
            total: 0,
        }
    }

    pub fn from_counts(counts: &[u64]) -> Self {
        let mut cumulative = Vec::with_capacity(counts.len());
        let mut running = 0u64;
        for &c in counts {
            running += c;
            cumulative.push(running);
        }
        Self {
            counts: counts.to_vec(),
            cumulative,
            total: running,
        }
    }

    /// Records one observation of `rank`.
    pub fn update(&mut self, rank: usize) -> Result<(), OrdinalError> {
        if rank >= self.counts.len() {
            return Err(OrdinalError::RankOutOfRange {
                rank,
                size: self.counts.len(),
            });
        }
        self.counts[rank] += 1;
        self.total += 1;
        for c in &mut self.cumulative[rank..] {
            *c += 1;
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn cumulative(&self) -> &[u64] {
        &self.cumulative
    }

    pub fn count(&self, rank: usize) -> u64 {
        self.counts[rank]
    }

    /// Number of observations strictly below `rank`.
    pub fn count_below(&self, rank: usize) -> u64 {
        if rank == 0 {
            0
        } else {
            self.cumulative[rank - 1]
        }
    }

    /// Number of observations strictly above `rank`.
    pub fn count_above(&self, rank: usize) -> u64 {
        self.total - self.cumulative[rank]
    }

    /// Empirical density f̂(rank); `None` while empty.
    pub fn density(&self, rank: usize) -> Option<f64> {
        (self.total > 0).then(|| self.counts[rank] as f64 / self.total as f64)
    }

    /// Empirical CDF F̂(rank); `None` while empty.
    pub fn cdf(&self, rank: usize) -> Option<f64> {
        (self.total > 0).then(|| self.cumulative[rank] as f64 / self.total as f64)
    }

    /// Twice the tie-corrected number of winning observation pairs of `self`
    /// against `other`: Σ_i counts[i]·(2·below_other(i) + other.counts[i]).
    pub(crate) fn doubled_wins_against(&self, other: &Self) -> u128 {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| {
                c as u128 * (2 * other.count_below(i) as u128 + other.counts[i] as u128)
            })
            .sum()
    }
}

/// Estimated Pr(a ≻ b) = Pr(X_a > X_b) + ½·Pr(X_a = X_b) from two empirical
/// distributions over the same scale.
pub fn prob_beats(
    a: &EmpiricalDistribution,
    b: &EmpiricalDistribution,
) -> Result<f64, OrdinalError> {
    if a.size() != b.size() {
        return Err(OrdinalError::ScaleMismatch(a.size(), b.size()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(OrdinalError::EmptyDistribution);
    }
    let pairs = 2 * a.total as u128 * b.total as u128;
    Ok(a.doubled_wins_against(b) as f64 / pairs as f64)
}
