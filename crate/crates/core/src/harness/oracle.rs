use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::record::RunRecord;
use super::HarnessError;
use crate::ordinal::{prob_beats, BordaTable};

/// Audit of one run: the incrementally maintained Borda table versus a
/// from-scratch computation on the same (action, rank) stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub run_id: u64,
    pub algorithm: String,
    pub c: f64,
    pub pulls: u64,
    /// Every action has at least one observation.
    pub complete: bool,
    /// Largest deviation over observed pairwise probabilities and, for
    /// complete tables, Borda scores.
    pub max_abs_diff: f64,
    /// Incremental Borda scores, `;`-separated.
    pub borda: String,
}

/// Replays each run's (action, rank) pairs. Actions and ranks index a table
/// sized by the largest values present in `records`.
pub fn audit(records: &[RunRecord]) -> Result<Vec<OracleRow>, HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::EmptyInput);
    }
    let arms = records.iter().map(|r| r.action).max().unwrap_or(0) + 1;
    let scale = records.iter().map(|r| r.rank).max().unwrap_or(0) + 1;
    let mut runs: BTreeMap<u64, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        runs.entry(r.run_id).or_default().push(r);
    }
    let runtime = |e: crate::ordinal::OrdinalError| HarnessError::Runtime(e.to_string());
    let mut out = Vec::with_capacity(runs.len());
    for (run_id, mut run) in runs {
        run.sort_by_key(|r| r.step);
        let mut table = BordaTable::new(arms.max(2), scale).map_err(runtime)?;
        for r in &run {
            table.update(r.action, r.rank).map_err(runtime)?;
        }
        let mut diff: f64 = 0.0;
        for a in 0..table.arms() {
            for b in 0..table.arms() {
                if a != b && table.pulls(a) > 0 && table.pulls(b) > 0 {
                    let exact = prob_beats(table.dist(a), table.dist(b)).map_err(runtime)?;
                    diff = diff.max((table.beat(a, b) - exact).abs());
                }
            }
        }
        let complete = table.is_complete();
        if complete {
            let fresh = BordaTable::from_distributions(table.dists().to_vec()).map_err(runtime)?;
            for (x, y) in table.borda_scores().iter().zip(fresh.borda_scores()) {
                diff = diff.max((x - y).abs());
            }
        }
        let borda = table.borda_scores().iter().map(|b| b.to_string()).collect::<Vec<_>>().join(";");
        out.push(OracleRow {
            run_id,
            algorithm: run[0].algorithm.clone(),
            c: run[0].c,
            pulls: run.len() as u64,
            complete,
            max_abs_diff: diff,
            borda,
        });
    }
    Ok(out)
}
