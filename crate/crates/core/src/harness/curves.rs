use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::record::RunRecord;
use super::report::group_key;

/// Mean cumulative deaths and running value at one step, averaged over the
/// runs of a configuration. Runs that ended earlier contribute their final
/// values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub environment: String,
    pub algorithm: String,
    pub c: f64,
    pub rl: Option<usize>,
    pub q: Option<f64>,
    pub z_critical: Option<f64>,
    pub budget: u64,
    pub step: u64,
    pub runs: u64,
    pub mean_cum_deaths: f64,
    /// Empty at step 0.
    pub mean_value: Option<f64>,
}

pub fn curves(records: &[RunRecord]) -> Vec<CurvePoint> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: HashMap<String, Vec<Vec<&RunRecord>>> = HashMap::new();
    let mut run_slot: HashMap<u64, (String, usize)> = HashMap::new();
    for r in records {
        let (key, slot) = run_slot.entry(r.run_id).or_insert_with(|| {
            let key = group_key(r);
            let runs = groups.entry(key.clone()).or_insert_with(|| {
                order.push(key.clone());
                Vec::new()
            });
            runs.push(Vec::new());
            (key, runs.len() - 1)
        });
        groups.get_mut(key).expect("group")[*slot].push(r);
    }
    let mut out = Vec::new();
    for key in order {
        let mut runs = groups.remove(&key).expect("group");
        for run in &mut runs {
            run.sort_by_key(|r| r.step);
        }
        let proto = runs[0][0];
        let horizon = runs.iter().map(|run| run.last().map_or(0, |r| r.step)).max().unwrap_or(0);
        let n = runs.len() as f64;
        let point = |step, deaths, value| CurvePoint {
            environment: proto.environment.clone(),
            algorithm: proto.algorithm.clone(),
            c: proto.c,
            rl: proto.rl,
            q: proto.q,
            z_critical: proto.z_critical,
            budget: proto.budget,
            step,
            runs: runs.len() as u64,
            mean_cum_deaths: deaths,
            mean_value: value,
        };
        out.push(point(0, 0.0, None));
        let mut cursor = vec![0usize; runs.len()];
        for step in 1..=horizon {
            let (mut deaths, mut value) = (0.0, 0.0);
            for (run, pos) in runs.iter().zip(cursor.iter_mut()) {
                while *pos + 1 < run.len() && run[*pos + 1].step <= step {
                    *pos += 1;
                }
                let r = run[*pos];
                deaths += r.cum_deaths as f64;
                value += r.mean_value;
            }
            out.push(point(step, deaths / n, Some(value / n)));
        }
    }
    out
}
