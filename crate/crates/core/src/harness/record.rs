use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;

/// One bandit pull or one executed game move.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_id: u64,
    pub seed: u64,
    pub environment: String,
    pub algorithm: String,
    pub c: f64,
    pub rl: Option<usize>,
    pub q: Option<f64>,
    pub z_critical: Option<f64>,
    pub budget: u64,
    pub repetition: u32,
    /// 1-based pull or move index within the run.
    pub step: u64,
    pub action: usize,
    pub rank: usize,
    /// Game status after the move; empty for bandits.
    pub status: Option<String>,
    /// Game score after the move; empty for bandits.
    pub score: Option<i64>,
    pub reward: f64,
    /// Rank-0 outcomes so far (bandits) or lost games (MDPs).
    pub cum_deaths: u64,
    /// Running mean of `reward` over the run.
    pub mean_value: f64,
    /// Forward-model calls spent on this step.
    pub calls: u64,
    /// Forward-model calls (or pulls) spent so far in the run.
    pub budget_used: u64,
}

impl RunRecord {
    /// String form of a field, for filters and grouping.
    pub fn field(&self, key: &str) -> Option<String> {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(ToString::to_string).unwrap_or_default()
        }
        Some(match key {
            "run_id" => self.run_id.to_string(),
            "seed" => self.seed.to_string(),
            "environment" => self.environment.clone(),
            "algorithm" => self.algorithm.clone(),
            "c" => self.c.to_string(),
            "rl" => opt(&self.rl),
            "q" => opt(&self.q),
            "z_critical" => opt(&self.z_critical),
            "budget" => self.budget.to_string(),
            "repetition" => self.repetition.to_string(),
            "step" => self.step.to_string(),
            "action" => self.action.to_string(),
            "rank" => self.rank.to_string(),
            "status" => opt(&self.status),
            _ => return None,
        })
    }
}

/// `key=value` equality filter on record fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Filter {
    pub key: String,
    pub value: String,
}

pub const FILTER_KEYS: [&str; 14] = [
    "run_id",
    "seed",
    "environment",
    "algorithm",
    "c",
    "rl",
    "q",
    "z_critical",
    "budget",
    "repetition",
    "step",
    "action",
    "rank",
    "status",
];

impl FromStr for Filter {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (key, value) = s
            .split_once('=')
            .ok_or_else(|| HarnessError::config("filter", format!("{s:?} is not key=value")))?;
        if !FILTER_KEYS.contains(&key) {
            return Err(HarnessError::config("filter", format!("unknown field {key:?}")));
        }
        Ok(Self { key: key.to_string(), value: value.to_string() })
    }
}

impl Filter {
    /// Numeric fields compare by value so `c=0.40` matches `0.4`.
    pub fn matches(&self, actual: &str) -> bool {
        if actual == self.value {
            return true;
        }
        match (actual.parse::<f64>(), self.value.parse::<f64>()) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    pub fn accepts(&self, record: &RunRecord) -> bool {
        record.field(&self.key).is_some_and(|v| self.matches(&v))
    }
}

pub fn apply_filters(records: Vec<RunRecord>, filters: &[Filter]) -> Vec<RunRecord> {
    records.into_iter().filter(|r| filters.iter().all(|f| f.accepts(r))).collect()
}

pub fn write_records<W: Write>(writer: W, records: &[RunRecord]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(reader: R) -> Result<Vec<RunRecord>, HarnessError> {
    let mut r = csv::Reader::from_reader(reader);
    r.deserialize().map(|row| row.map_err(HarnessError::from)).collect()
}

pub fn save_records(path: &Path, records: &[RunRecord]) -> Result<(), HarnessError> {
    let file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    write_records(std::io::BufWriter::new(file), records)
}

pub fn load_records(path: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    let file = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_records(std::io::BufReader::new(file))
}
