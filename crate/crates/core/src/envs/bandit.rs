use rand::Rng;
use thiserror::Error;

use crate::ordinal::{borda_scores_pmf, OrdinalScale};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvError {
    #[error("arm {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },
    #[error("invalid environment parameter `{key}`: {reason}")]
    BadParam { key: &'static str, reason: String },
}

/// A stateless bandit whose arms draw ranks from fixed categorical
/// distributions. Each rank carries a numeric value for numeric baselines;
/// values must be strictly increasing in rank.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalBandit {
    scale: OrdinalScale,
    values: Vec<f64>,
    pmfs: Vec<Vec<f64>>,
}

impl CategoricalBandit {
    pub fn new(scale: OrdinalScale, values: Vec<f64>, pmfs: Vec<Vec<f64>>) -> Result<Self, EnvError> {
        if values.len() != scale.len() {
            return Err(EnvError::BadParam {
                key: "values",
                reason: format!("{} values for {} outcomes", values.len(), scale.len()),
            });
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(EnvError::BadParam {
                key: "values",
                reason: "values must be strictly increasing".into(),
            });
        }
        if pmfs.is_empty() {
            return Err(EnvError::BadParam { key: "arms", reason: "no arms".into() });
        }
        for pmf in &pmfs {
            let sum: f64 = pmf.iter().sum();
            if pmf.len() != scale.len() || pmf.iter().any(|&p| p < 0.0) || (sum - 1.0).abs() > 1e-9 {
                return Err(EnvError::BadParam {
                    key: "arms",
                    reason: format!("{pmf:?} is not a distribution over {} outcomes", scale.len()),
                });
            }
        }
        Ok(Self { scale, values, pmfs })
    }

    /// Four treatments: risky-good (20% death, 80% full wellbeing),
    /// risky-bad (80% death), no treatment (0.6) and a mild improvement (0.7).
    pub fn medicine() -> Self {
        let scale = OrdinalScale::new(["dead", "alive-0.6", "alive-0.7", "alive-1.0"]).expect("scale");
        Self::new(
            scale,
            vec![0.0, 0.6, 0.7, 1.0],
            vec![
                vec![0.2, 0.0, 0.0, 0.8],
                vec![0.8, 0.0, 0.0, 0.2],
                vec![0.0, 1.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
        )
        .expect("medicine bandit")
    }

    /// Two arms: A is low w.p. `1 - p` and high w.p. `p`; B is always the
    /// middle outcome.
    pub fn skew(p: f64, values: [f64; 3]) -> Result<Self, EnvError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(EnvError::BadParam { key: "p", reason: format!("{p} not in (0, 1)") });
        }
        let scale = OrdinalScale::new(["low", "mid", "high"]).expect("scale");
        Self::new(
            scale,
            values.to_vec(),
            vec![vec![1.0 - p, 0.0, p], vec![0.0, 1.0, 0.0]],
        )
    }

    pub fn arms(&self) -> usize {
        self.pmfs.len()
    }

    pub fn scale(&self) -> &OrdinalScale {
        &self.scale
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, rank: usize) -> f64 {
        self.values[rank]
    }

    pub fn pmfs(&self) -> &[Vec<f64>] {
        &self.pmfs
    }

    pub fn expected_value(&self, arm: usize) -> f64 {
        self.pmfs[arm].iter().zip(&self.values).map(|(p, v)| p * v).sum()
    }

    /// Exact Borda scores from the configured distributions.
    pub fn true_borda(&self) -> Vec<f64> {
        borda_scores_pmf(&self.pmfs)
    }

    /// Same outcome distributions with different (still increasing) values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self, EnvError> {
        Self::new(self.scale.clone(), values, self.pmfs.clone())
    }

    pub fn pull<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> Result<usize, EnvError> {
        let pmf = self
            .pmfs
            .get(arm)
            .ok_or(EnvError::ArmOutOfRange { arm, arms: self.arms() })?;
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (rank, &p) in pmf.iter().enumerate() {
            if p > 0.0 {
                last_positive = rank;
                acc += p;
                if u < acc {
                    return Ok(rank);
                }
            }
        }
        Ok(last_positive)
    }
}
