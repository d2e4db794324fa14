use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::record::RunRecord;
use super::HarnessError;

/// Aggregate over all runs of one parameter configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub environment: String,
    pub algorithm: String,
    pub c: f64,
    pub rl: Option<usize>,
    pub q: Option<f64>,
    pub z_critical: Option<f64>,
    pub budget: u64,
    pub runs: u64,
    /// Mean over runs of the run's mean numeric reward.
    pub mean_value: f64,
    /// Mean over runs of the final death (or loss) count.
    pub mean_deaths: f64,
    /// Fraction of episodes ending in a win; empty for bandits.
    pub win_rate: Option<f64>,
    /// Mean final game score; empty for bandits.
    pub mean_score: Option<f64>,
    /// Rank among all configurations of the same problem (1 = best).
    pub rank: f64,
    /// Best configuration of its algorithm on this problem.
    pub best: bool,
}

/// Average rank of an algorithm's best configuration across problems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmRank {
    pub algorithm: String,
    pub problems: u64,
    pub average_rank: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub groups: Vec<GroupSummary>,
    pub ranks: Vec<AlgorithmRank>,
}

pub(crate) fn group_key(r: &RunRecord) -> String {
    format!(
        "{}|{}|{}|{:?}|{:?}|{:?}|{}",
        r.environment, r.algorithm, r.c, r.rl, r.q, r.z_critical, r.budget
    )
}

impl GroupSummary {
    fn problem(&self) -> (String, u64) {
        (self.environment.clone(), self.budget)
    }

    /// Higher is better: (win rate, mean score) for games, mean value for
    /// bandits.
    fn merit(&self) -> (f64, f64) {
        match (self.win_rate, self.mean_score) {
            (Some(w), Some(s)) => (w, s),
            _ => (self.mean_value, 0.0),
        }
    }
}

/// Fractional 1-based ranks, best merit first; exact ties share the mean
/// of the positions they occupy.
pub fn fractional_ranks(merits: &[(f64, f64)]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..merits.len()).collect();
    order.sort_by(|&a, &b| merits[b].partial_cmp(&merits[a]).unwrap_or(std::cmp::Ordering::Equal));
    let mut ranks = vec![0.0; merits.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && merits[order[end]] == merits[order[start]] {
            end += 1;
        }
        let shared = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    ranks
}

/// Summarises records per configuration, ranks configurations per problem
/// (environment and budget) and averages each algorithm's best rank.
pub fn summarize(records: &[RunRecord]) -> Result<Report, HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::EmptyInput);
    }
    let mut last: HashMap<u64, &RunRecord> = HashMap::new();
    for r in records {
        let entry = last.entry(r.run_id).or_insert(r);
        if r.step > entry.step {
            *entry = r;
        }
    }
    let mut finals: Vec<&RunRecord> = last.into_values().collect();
    finals.sort_by_key(|r| r.run_id);

    let mut index: HashMap<String, usize> = HashMap::new();
    let mut groups: Vec<GroupSummary> = Vec::new();
    let mut wins: Vec<u64> = Vec::new();
    let mut scores: Vec<Option<f64>> = Vec::new();
    for r in finals {
        let i = *index.entry(group_key(r)).or_insert_with(|| {
            groups.push(GroupSummary {
                environment: r.environment.clone(),
                algorithm: r.algorithm.clone(),
                c: r.c,
                rl: r.rl,
                q: r.q,
                z_critical: r.z_critical,
                budget: r.budget,
                runs: 0,
                mean_value: 0.0,
                mean_deaths: 0.0,
                win_rate: None,
                mean_score: None,
                rank: 0.0,
                best: false,
            });
            wins.push(0);
            scores.push(r.score.map(|_| 0.0));
            groups.len() - 1
        });
        let g = &mut groups[i];
        g.runs += 1;
        g.mean_value += r.mean_value;
        g.mean_deaths += r.cum_deaths as f64;
        wins[i] += u64::from(r.status.as_deref() == Some("won"));
        if let (Some(total), Some(score)) = (scores[i].as_mut(), r.score) {
            *total += score as f64;
        }
    }
    for (i, g) in groups.iter_mut().enumerate() {
        let n = g.runs as f64;
        g.mean_value /= n;
        g.mean_deaths /= n;
        if let Some(total) = scores[i] {
            g.win_rate = Some(wins[i] as f64 / n);
            g.mean_score = Some(total / n);
        }
    }

    let mut problems: Vec<(String, u64)> = Vec::new();
    for g in &groups {
        if !problems.contains(&g.problem()) {
            problems.push(g.problem());
        }
    }
    let mut algorithms: Vec<String> = Vec::new();
    let mut rank_sums: HashMap<String, (f64, u64)> = HashMap::new();
    for problem in &problems {
        let members: Vec<usize> = (0..groups.len()).filter(|&i| groups[i].problem() == *problem).collect();
        let merits: Vec<(f64, f64)> = members.iter().map(|&i| groups[i].merit()).collect();
        for (&i, rank) in members.iter().zip(fractional_ranks(&merits)) {
            groups[i].rank = rank;
        }
        let mut best: Vec<(String, usize)> = Vec::new();
        for &i in &members {
            let alg = groups[i].algorithm.clone();
            match best.iter_mut().find(|(a, _)| *a == alg) {
                Some((_, b)) if groups[i].rank < groups[*b].rank => *b = i,
                Some(_) => {}
                None => best.push((alg, i)),
            }
        }
        for &(_, i) in &best {
            groups[i].best = true;
        }
        let merits: Vec<(f64, f64)> = best.iter().map(|&(_, i)| groups[i].merit()).collect();
        for ((alg, _), rank) in best.iter().zip(fractional_ranks(&merits)) {
            if !algorithms.contains(alg) {
                algorithms.push(alg.clone());
            }
            let entry = rank_sums.entry(alg.clone()).or_insert((0.0, 0));
            entry.0 += rank;
            entry.1 += 1;
        }
    }
    let ranks = algorithms
        .into_iter()
        .map(|algorithm| {
            let (sum, problems) = rank_sums[&algorithm];
            AlgorithmRank { algorithm, problems, average_rank: sum / problems as f64 }
        })
        .collect();
    Ok(Report { groups, ranks })
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

impl Report {
    /// Plain-text table for the terminal.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<12} {:<10} {:>6} {:>4} {:>5} {:>6} {:>7} {:>5} {:>9} {:>9} {:>8} {:>9} {:>6}",
            "environment", "algorithm", "c", "rl", "q", "z", "budget", "runs", "value", "deaths", "win", "score", "rank"
        );
        for g in &self.groups {
            let _ = writeln!(
                out,
                "{:<12} {:<10} {:>6} {:>4} {:>5} {:>6} {:>7} {:>5} {:>9.4} {:>9.2} {:>8} {:>9} {:>5.1}{}",
                g.environment,
                g.algorithm,
                g.c,
                opt(g.rl),
                opt(g.q),
                opt(g.z_critical),
                g.budget,
                g.runs,
                g.mean_value,
                g.mean_deaths,
                opt(g.win_rate.map(|w| format!("{w:.3}"))),
                opt(g.mean_score.map(|s| format!("{s:.2}"))),
                g.rank,
                if g.best { " *" } else { "" }
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<10} {:>8} {:>12}", "algorithm", "problems", "average rank");
        for r in &self.ranks {
            let _ = writeln!(out, "{:<10} {:>8} {:>12.2}", r.algorithm, r.problems, r.average_rank);
        }
        out
    }

    pub fn write_groups<W: std::io::Write>(&self, writer: W) -> Result<(), HarnessError> {
        write_rows(writer, &self.groups)
    }

    pub fn write_ranks<W: std::io::Write>(&self, writer: W) -> Result<(), HarnessError> {
        write_rows(writer, &self.ranks)
    }
}

pub(crate) fn write_rows<W: std::io::Write, T: Serialize>(writer: W, rows: &[T]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(run_id: u64, algorithm: &str, c: f64, step: u64, value: f64, deaths: u64) -> RunRecord {
        RunRecord {
            run_id,
            seed: run_id,
            environment: "medicine".into(),
            algorithm: algorithm.into(),
            c,
            rl: None,
            q: None,
            z_critical: None,
            budget: 2,
            repetition: 0,
            step,
            action: 0,
            rank: 0,
            status: None,
            score: None,
            reward: value,
            cum_deaths: deaths,
            mean_value: value,
            calls: 1,
            budget_used: step,
        }
    }

    fn game(run_id: u64, algorithm: &str, environment: &str, status: &str, score: i64) -> RunRecord {
        RunRecord {
            environment: environment.into(),
            status: Some(status.into()),
            score: Some(score),
            rl: Some(10),
            ..record(run_id, algorithm, 1.0, 1, 0.0, u64::from(status == "lost"))
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(summarize(&[]), Err(HarnessError::EmptyInput)));
    }

    #[test]
    fn single_run_means_are_raw_values() {
        let records = vec![record(0, "ucb1", 0.4, 1, 0.6, 0), record(0, "ucb1", 0.4, 2, 0.3, 1)];
        let report = summarize(&records).unwrap();
        assert_eq!(report.groups.len(), 1);
        assert_eq!(report.groups[0].mean_value, 0.3);
        assert_eq!(report.groups[0].mean_deaths, 1.0);
        assert!(report.groups[0].best);
    }

    #[test]
    fn known_dominance_order_ranks_in_order() {
        let algs = ["a", "b", "c", "d"];
        let mut records = Vec::new();
        for problem in ["p1", "p2"] {
            for (i, alg) in algs.iter().enumerate() {
                for rep in 0..3 {
                    let id = records.len() as u64;
                    let status = if rep < 3 - i.min(3) { "won" } else { "lost" };
                    records.push(game(id, alg, problem, status, 10 - i as i64));
                }
            }
        }
        let report = summarize(&records).unwrap();
        let avg: Vec<f64> = report.ranks.iter().map(|r| r.average_rank).collect();
        assert_eq!(avg, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(report.ranks[0].problems, 2);
    }

    #[test]
    fn ties_share_ranks() {
        assert_eq!(fractional_ranks(&[(1.0, 0.0), (2.0, 0.0), (1.0, 0.0)]), vec![2.5, 1.0, 2.5]);
    }

    #[test]
    fn best_marks_one_config_per_algorithm() {
        let records = vec![
            record(0, "ucb1", 0.1, 1, 0.5, 0),
            record(1, "ucb1", 0.4, 1, 0.7, 0),
            record(2, "o-ucb", 0.4, 1, 0.6, 0),
        ];
        let report = summarize(&records).unwrap();
        let best: Vec<(String, f64)> =
            report.groups.iter().filter(|g| g.best).map(|g| (g.algorithm.clone(), g.c)).collect();
        assert_eq!(best, vec![("ucb1".to_string(), 0.4), ("o-ucb".to_string(), 0.4)]);
        assert_eq!(report.groups[1].rank, 1.0);
        assert!(report.render().contains("o-ucb"));
    }
}
