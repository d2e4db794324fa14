use super::distribution::{prob_beats, EmpiricalDistribution};
use super::OrdinalError;

/// Per-arm empirical distributions plus a cache of pairwise beat
/// probabilities and Borda scores.
///
/// `beat(a, b)` is only meaningful once both arms have observations, and
/// `borda(a)` averages over the arms observed so far with the full
/// `1/(|A|-1)` normalisation, so it equals the textbook Borda score as soon
/// as every arm has been observed at least once.
#[derive(Debug, Clone, PartialEq)]
pub struct BordaTable {
    dists: Vec<EmpiricalDistribution>,
    beat: Vec<f64>,
    borda: Vec<f64>,
}

impl BordaTable {
    pub fn new(arms: usize, scale_size: usize) -> Result<Self, OrdinalError> {
        if arms == 0 {
            return Err(OrdinalError::TooFewArms(0));
        }
        if scale_size == 0 {
            return Err(OrdinalError::EmptyScale);
        }
        Ok(Self {
            dists: vec![EmpiricalDistribution::new(scale_size); arms],
            beat: vec![0.0; arms * arms],
            borda: vec![0.0; arms],
        })
    }

    /// Builds a table from existing distributions and fills it from scratch.
    pub fn from_distributions(dists: Vec<EmpiricalDistribution>) -> Result<Self, OrdinalError> {
        let arms = dists.len();
        if let Some(first) = dists.first() {
            if let Some(bad) = dists.iter().find(|d| d.size() != first.size()) {
                return Err(OrdinalError::ScaleMismatch(first.size(), bad.size()));
            }
        }
        let mut table = Self {
            dists,
            beat: vec![0.0; arms * arms],
            borda: vec![0.0; arms],
        };
        table.recompute()?;
        Ok(table)
    }

    pub fn arms(&self) -> usize {
        self.dists.len()
    }

    pub fn scale_size(&self) -> usize {
        self.dists[0].size()
    }

    pub fn dist(&self, arm: usize) -> &EmpiricalDistribution {
        &self.dists[arm]
    }

    pub fn dists(&self) -> &[EmpiricalDistribution] {
        &self.dists
    }

    pub fn pulls(&self, arm: usize) -> u64 {
        self.dists[arm].total()
    }

    pub fn is_complete(&self) -> bool {
        self.dists.iter().all(|d| !d.is_empty())
    }

    pub fn beat(&self, a: usize, b: usize) -> f64 {
        self.beat[a * self.arms() + b]
    }

    pub fn borda(&self, arm: usize) -> f64 {
        self.borda[arm]
    }

    pub fn borda_scores(&self) -> &[f64] {
        &self.borda
    }

    /// Lowest-index arm with the highest Borda score.
    pub fn winner(&self) -> usize {
        argmax(&self.borda)
    }

    /// Refills every beat probability and Borda score from the distributions.
    pub fn recompute(&mut self) -> Result<(), OrdinalError> {
        let k = self.arms();
        if k < 2 {
            return Err(OrdinalError::TooFewArms(k));
        }
        if !self.is_complete() {
            return Err(OrdinalError::EmptyDistribution);
        }
        for a in 0..k {
            for b in 0..k {
                self.beat[a * k + b] = if a == b {
                    0.0
                } else {
                    prob_beats(&self.dists[a], &self.dists[b])?
                };
            }
        }
        let norm = (k - 1) as f64;
        for a in 0..k {
            self.borda[a] = self.beat[a * k..(a + 1) * k].iter().sum::<f64>() / norm;
        }
        Ok(())
    }

    /// Adds one observation of `rank` to `arm` and refreshes only that
    /// arm's row and column of the beat matrix: O(|A| + |O|).
    pub fn update(&mut self, arm: usize, rank: usize) -> Result<(), OrdinalError> {
        let k = self.arms();
        if arm >= k {
            return Err(OrdinalError::ArmOutOfRange { arm, arms: k });
        }
        let old_n = self.dists[arm].total();
        self.dists[arm].update(rank)?;
        if k < 2 {
            return Ok(());
        }
        let new_n = old_n + 1;
        let norm = (k - 1) as f64;
        let mut row_sum = 0.0;
        for other in (0..k).filter(|&b| b != arm) {
            let od = &self.dists[other];
            let m = od.total();
            if m == 0 {
                continue;
            }
            let (ab, ba) = (arm * k + other, other * k + arm);
            let previous_ba = self.beat[ba];
            if old_n == 0 {
                let a = &self.dists[arm];
                self.beat[ab] = prob_beats(a, od)?;
                self.beat[ba] = prob_beats(od, a)?;
            } else {
                // The new observation beats `other`'s samples below `rank`
                // and ties with those at `rank`.
                let tie = 0.5 * od.count(rank) as f64;
                let gain_ab = od.count_below(rank) as f64 + tie;
                let gain_ba = od.count_above(rank) as f64 + tie;
                let (m, old_n, new_n) = (m as f64, old_n as f64, new_n as f64);
                self.beat[ab] = (self.beat[ab] * old_n * m + gain_ab) / (new_n * m);
                self.beat[ba] = (self.beat[ba] * old_n * m + gain_ba) / (new_n * m);
            }
            self.borda[other] += (self.beat[ba] - previous_ba) / norm;
            row_sum += self.beat[ab];
        }
        self.borda[arm] = row_sum / norm;
        Ok(())
    }
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Exact Pr(a ≻ b) for two known probability mass functions over one scale.
pub fn prob_beats_pmf(a: &[f64], b: &[f64]) -> f64 {
    let mut below = 0.0;
    let mut total = 0.0;
    for (pa, pb) in a.iter().zip(b) {
        total += pa * (below + 0.5 * pb);
        below += pb;
    }
    total
}

/// Exact Borda scores for arms with known outcome distributions.
pub fn borda_scores_pmf(pmfs: &[Vec<f64>]) -> Vec<f64> {
    let k = pmfs.len();
    if k < 2 {
        return vec![0.0; k];
    }
    (0..k)
        .map(|a| {
            (0..k)
                .filter(|&b| b != a)
                .map(|b| prob_beats_pmf(&pmfs[a], &pmfs[b]))
                .sum::<f64>()
                / (k - 1) as f64
        })
        .collect()
}
