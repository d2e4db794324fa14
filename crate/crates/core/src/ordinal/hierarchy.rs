use serde::{Deserialize, Serialize};

use super::OrdinalError;

/// Maps `rank` to the smallest selected rank that is ≥ `rank`, or to the top
/// of the scale when no such rank is selected.
///
/// `level` must be sorted ascending.
pub fn hierarchy_project(scale_size: usize, level: &[usize], rank: usize) -> Result<usize, OrdinalError> {
    if level.is_empty() {
        return Err(OrdinalError::EmptyLevel(0));
    }
    if rank >= scale_size {
        return Err(OrdinalError::RankOutOfRange { rank, size: scale_size });
    }
    let pos = level.partition_point(|&r| r < rank);
    Ok(level.get(pos).copied().unwrap_or(scale_size - 1))
}

/// Coarse-to-fine preference thresholds: a sequence of selected-rank sets,
/// the last of which is always the full scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hierarchy {
    scale_size: usize,
    levels: Vec<Vec<usize>>,
    z_critical: f64,
}

impl Hierarchy {
    /// Builds a hierarchy from the given levels. A full-resolution level is
    /// appended when the last given level does not already select every rank.
    pub fn new(scale_size: usize, levels: Vec<Vec<usize>>, z_critical: f64) -> Result<Self, OrdinalError> {
        if scale_size == 0 {
            return Err(OrdinalError::EmptyScale);
        }
        if levels.is_empty() {
            return Err(OrdinalError::NoLevels);
        }
        if z_critical.is_nan() || z_critical <= 0.0 {
            return Err(OrdinalError::BadCriticalValue(z_critical));
        }
        let mut clean = Vec::with_capacity(levels.len() + 1);
        for (i, mut level) in levels.into_iter().enumerate() {
            if level.is_empty() {
                return Err(OrdinalError::EmptyLevel(i));
            }
            level.sort_unstable();
            level.dedup();
            if let Some(&rank) = level.iter().find(|&&r| r >= scale_size) {
                return Err(OrdinalError::RankOutOfRange { rank, size: scale_size });
            }
            clean.push(level);
        }
        if clean.last().is_none_or(|l| l.len() != scale_size) {
            clean.push((0..scale_size).collect());
        }
        Ok(Self {
            scale_size,
            levels: clean,
            z_critical,
        })
    }

    /// Single full-resolution level.
    pub fn flat(scale_size: usize, z_critical: f64) -> Result<Self, OrdinalError> {
        Self::new(scale_size, vec![(0..scale_size).collect()], z_critical)
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn z_critical(&self) -> f64 {
        self.z_critical
    }

    pub fn scale_size(&self) -> usize {
        self.scale_size
    }

    pub fn project(&self, level: usize, rank: usize) -> Result<usize, OrdinalError> {
        hierarchy_project(self.scale_size, &self.levels[level], rank)
    }
}
