use std::collections::HashMap;

use super::OrdinalError;

/// A totally ordered, finite outcome set. Rank 0 is the worst outcome and
/// higher ranks are strictly preferred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalScale {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl OrdinalScale {
    pub fn new<I, S>(labels: I) -> Result<Self, OrdinalError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(OrdinalError::EmptyScale);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (rank, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), rank).is_some() {
                return Err(OrdinalError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels, index })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, rank: usize) -> Option<&str> {
        self.labels.get(rank).map(String::as_str)
    }

    pub fn rank_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn top(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn check_rank(&self, rank: usize) -> Result<(), OrdinalError> {
        if rank < self.len() {
            Ok(())
        } else {
            Err(OrdinalError::RankOutOfRange { rank, size: self.len() })
        }
    }
}
