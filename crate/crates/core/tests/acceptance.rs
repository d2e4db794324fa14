//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero when any criterion fails.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use ordinal_search::bandits::{BanditPolicy, BordaRegret};
use ordinal_search::envs::{CategoricalBandit, GapPlatformer, Relabeled, TreeGame, JUMP};
use ordinal_search::harness::{
    play_episode, run_experiment, summarize, write_records, ExperimentConfig, GroupSummary, Report,
};
use ordinal_search::mcts::{search, SearchParams, TreePolicy};
use ordinal_search::mdp::{BudgetMeter, Environment};
use ordinal_search::ordinal::{prob_beats, BordaTable, EmpiricalDistribution};

const C_GRID: &str = "[0.1, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0]";
const MEDICINE_REPS: u32 = 200;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn brute_force(a: &[u64], b: &[u64]) -> f64 {
    let expand = |counts: &[u64]| -> Vec<usize> {
        counts.iter().enumerate().flat_map(|(r, &n)| std::iter::repeat_n(r, n as usize)).collect()
    };
    let (xs, ys) = (expand(a), expand(b));
    let mut wins = 0.0;
    for x in &xs {
        for y in &ys {
            wins += if x > y { 1.0 } else if x == y { 0.5 } else { 0.0 };
        }
    }
    wins / (xs.len() * ys.len()) as f64
}

fn random_counts<R: Rng>(rng: &mut R, size: usize) -> Vec<u64> {
    let total = rng.random_range(1..=50);
    let mut counts = vec![0u64; size];
    for _ in 0..total {
        counts[rng.random_range(0..size)] += 1;
    }
    counts
}

fn borda_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let size = rng.random_range(1..=10);
        let arms: Vec<Vec<u64>> = (0..3).map(|_| random_counts(&mut rng, size)).collect();
        let direct = prob_beats(&EmpiricalDistribution::from_counts(&arms[0]), &EmpiricalDistribution::from_counts(&arms[1]))
            .expect("nonempty");
        worst = worst.max((direct - brute_force(&arms[0], &arms[1])).abs());

        let mut pulls: Vec<(usize, usize)> = arms
            .iter()
            .enumerate()
            .flat_map(|(arm, counts)| {
                counts.iter().enumerate().flat_map(move |(r, &n)| std::iter::repeat_n((arm, r), n as usize))
            })
            .collect();
        pulls.shuffle(&mut rng);
        let mut table = BordaTable::new(3, size).expect("table");
        for (arm, rank) in pulls {
            table.update(arm, rank).expect("update");
        }
        for a in 0..3 {
            let mut borda = 0.0;
            for b in (0..3).filter(|&b| b != a) {
                let exact = brute_force(&arms[a], &arms[b]);
                worst = worst.max((table.beat(a, b) - exact).abs());
                borda += exact / 2.0;
            }
            worst = worst.max((table.borda(a) - borda).abs());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-12 && elapsed < Duration::from_secs(5),
        format!("max deviation {worst:.2e} over 1000 cases in {:.2}s", elapsed.as_secs_f64()),
    )
}

fn medicine_report() -> Report {
    let config = format!(
        r#"{{"experiment": "medicine", "environment": {{"id": "medicine"}},
            "algorithms": [{{"kind": "ucb1", "c": {C_GRID}}}, {{"kind": "o-ucb", "c": {C_GRID}}},
                           {{"kind": "oh-ucb", "c": {C_GRID}, "hierarchy": [[0]], "z_critical": 0.65}},
                           {{"kind": "multisbm", "c": {C_GRID}}}],
            "budget": 500, "repetitions": {MEDICINE_REPS}, "seed": 2018}}"#
    );
    let config = ExperimentConfig::from_json(&config).expect("config");
    summarize(&run_experiment(&config, &[], None).expect("run")).expect("report")
}

fn group<'a>(report: &'a Report, algorithm: &str, c: f64) -> &'a GroupSummary {
    report.groups.iter().find(|g| g.algorithm == algorithm && g.c == c).expect("group")
}

fn best_value<'a>(report: &'a Report, algorithm: &str) -> &'a GroupSummary {
    report
        .groups
        .iter()
        .filter(|g| g.algorithm == algorithm)
        .max_by(|a, b| a.mean_value.total_cmp(&b.mean_value))
        .expect("group")
}

fn medicine_oucb(report: &Report, elapsed: Duration) -> Outcome {
    let g = group(report, "o-ucb", 0.4);
    outcome(
        (0.75..=0.81).contains(&g.mean_value) && (70.0..=95.0).contains(&g.mean_deaths) && elapsed < Duration::from_secs(60),
        format!("o-ucb c=0.4 over {} runs: value {:.4}, deaths {:.2}", g.runs, g.mean_value, g.mean_deaths),
    )
}

fn medicine_ohucb(report: &Report) -> Outcome {
    let g = group(report, "oh-ucb", 0.2);
    let best = best_value(report, "o-ucb");
    let ratio = g.mean_deaths / best.mean_deaths;
    outcome(
        g.mean_deaths <= 10.0 && g.mean_value >= 0.68 && ratio < 0.15,
        format!(
            "oh-ucb c=0.2: value {:.4}, deaths {:.2}; o-ucb best c={} has {:.2} deaths (ratio {ratio:.3})",
            g.mean_value, g.mean_deaths, best.c, best.mean_deaths
        ),
    )
}

fn medicine_baselines(report: &Report) -> Outcome {
    let ucb = group(report, "ucb1", 0.4);
    let sbm = best_value(report, "multisbm");
    let (ucb_best, oucb_best) = (best_value(report, "ucb1"), best_value(report, "o-ucb"));
    outcome(
        (0.74..=0.81).contains(&ucb.mean_value)
            && sbm.mean_value < ucb_best.mean_value
            && sbm.mean_value < oucb_best.mean_value,
        format!(
            "ucb1 c=0.4 value {:.4}; best values: multisbm {:.4} (c={}), ucb1 {:.4} (c={}), o-ucb {:.4} (c={})",
            ucb.mean_value, sbm.mean_value, sbm.c, ucb_best.mean_value, ucb_best.c, oucb_best.mean_value, oucb_best.c
        ),
    )
}

/// Share of arm `target` among the last 1000 of 5000 pulls, pooled over 50
/// seeds.
fn late_share(env: &CategoricalBandit, make: impl Fn() -> BanditPolicy + Sync, target: usize) -> f64 {
    let hits: u64 = (0..50u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut policy = make();
            let mut hits = 0;
            for t in 0..5000 {
                let arm = policy.select(&mut rng);
                let rank = env.pull(arm, &mut rng).expect("arm");
                policy.update(arm, rank, env.value(rank)).expect("update");
                if t >= 4000 && arm == target {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    hits as f64 / (50.0 * 1000.0)
}

fn bias_divergence() -> Outcome {
    let env = CategoricalBandit::skew(0.7, [0.0, 0.6, 0.8]).expect("skew");
    let oucb_a = late_share(&env, || BanditPolicy::oucb(2, 3, 0.25).expect("policy"), 0);
    let ucb_b = late_share(&env, || BanditPolicy::ucb1(2, 0.25).expect("policy"), 1);
    let borda = env.true_borda();
    outcome(
        oucb_a > 0.8 && ucb_b > 0.8,
        format!(
            "late pulls: o-ucb on A {oucb_a:.3}, ucb1 on B {ucb_b:.3} (means {:.2}/{:.2}, Borda {:.2}/{:.2})",
            env.expected_value(0),
            env.expected_value(1),
            borda[0],
            borda[1]
        ),
    )
}

fn oucb_sequence(env: &CategoricalBandit, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut policy = BanditPolicy::oucb(env.arms(), env.scale().len(), 0.4).expect("policy");
    (0..300)
        .map(|_| {
            let arm = policy.select(&mut rng);
            let rank = env.pull(arm, &mut rng).expect("arm");
            policy.update(arm, rank, env.value(rank)).expect("update");
            arm
        })
        .collect()
}

fn tree_trace<E: Environment>(env: &E, policy: TreePolicy, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut meter = BudgetMeter::new(300);
    let result = search(env, &env.initial_state(), SearchParams::new(policy, 0.6, 3), &mut meter, &mut rng, true)
        .expect("search");
    result.trace.expect("trace")
}

fn ordinal_invariance() -> Outcome {
    let medicine = CategoricalBandit::medicine();
    let tree = TreeGame::random(4, 3, 9, 0.2, 8).expect("tree");
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut bandit_same, mut tree_same, mut uct_differs) = (0, 0, 0);
    for i in 0..100u64 {
        let mut values: Vec<f64> = (0..4).map(|_| rng.random::<f64>()).collect();
        values.sort_by(f64::total_cmp);
        let relabeled_bandit = medicine.with_values(values).expect("values");
        bandit_same += u32::from(oucb_sequence(&medicine, i) == oucb_sequence(&relabeled_bandit, i));

        let relabeled_tree = Relabeled::random(tree.clone(), 40, &mut rng).expect("relabel");
        tree_same += u32::from(tree_trace(&tree, TreePolicy::Borda, i) == tree_trace(&relabeled_tree, TreePolicy::Borda, i));
        uct_differs += u32::from(tree_trace(&tree, TreePolicy::Uct, i) != tree_trace(&relabeled_tree, TreePolicy::Uct, i));
    }
    outcome(
        bandit_same == 100 && tree_same == 100,
        format!("identical sequences: o-ucb {bandit_same}/100, o-mcts {tree_same}/100 (uct changed in {uct_differs}/100)"),
    )
}

fn empirical_regret() -> Outcome {
    let env = CategoricalBandit::medicine();
    let regret = BordaRegret::new(env.pmfs());
    let checkpoints = [1_000usize, 10_000, 100_000];
    let runs = 20u64;
    let totals: Vec<[f64; 3]> = (0..runs)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut policy = BanditPolicy::oucb(4, 4, 0.4).expect("policy");
            let mut cumulative = 0.0;
            let mut out = [0.0; 3];
            for t in 1..=checkpoints[2] {
                let arm = policy.select(&mut rng);
                let rank = env.pull(arm, &mut rng).expect("arm");
                policy.update(arm, rank, env.value(rank)).expect("update");
                cumulative += regret.regret(arm);
                if let Some(i) = checkpoints.iter().position(|&c| c == t) {
                    out[i] = cumulative;
                }
            }
            out
        })
        .collect();
    let mean: Vec<f64> = (0..3).map(|i| totals.iter().map(|t| t[i]).sum::<f64>() / runs as f64).collect();
    let k = mean[0] / (checkpoints[0] as f64).ln();
    let bounds: Vec<f64> = checkpoints.iter().map(|&n| k * (n as f64).ln()).collect();
    outcome(
        mean[1] <= bounds[1] && mean[2] <= bounds[2],
        format!(
            "mean regret {:.1} / {:.1} / {:.1} at 1e3/1e4/1e5 pulls; K={k:.3} gives bounds {:.1} / {:.1}",
            mean[0], mean[1], mean[2], bounds[1], bounds[2]
        ),
    )
}

struct Episodes {
    mean_score: f64,
    wins: usize,
    jump_rate: f64,
}

fn platformer_episodes(env: &GapPlatformer, policy: TreePolicy) -> Episodes {
    let params = SearchParams::new(policy, std::f64::consts::FRAC_1_SQRT_2, 10);
    let results: Vec<(i64, bool, u64, u64)> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let moves = play_episode(env, params, 500, &mut rng).expect("episode");
            let (mut adjacent, mut jumps) = (0, 0);
            for m in moves.iter().filter(|m| env.is_gap_adjacent(&m.before)) {
                adjacent += 1;
                jumps += u64::from(m.search.action == JUMP);
            }
            let last = moves.last().expect("at least one move");
            (last.after.score, last.after.status.name() == "won", adjacent, jumps)
        })
        .collect();
    let adjacent: u64 = results.iter().map(|r| r.2).sum();
    let jumps: u64 = results.iter().map(|r| r.3).sum();
    Episodes {
        mean_score: results.iter().map(|r| r.0 as f64).sum::<f64>() / results.len() as f64,
        wins: results.iter().filter(|r| r.1).count(),
        jump_rate: jumps as f64 / adjacent.max(1) as f64,
    }
}

fn platformer_contrast() -> Outcome {
    let start = Instant::now();
    let env = GapPlatformer::default();
    let o = platformer_episodes(&env, TreePolicy::Borda);
    let u = platformer_episodes(&env, TreePolicy::Uct);
    let elapsed = start.elapsed();
    outcome(
        o.mean_score >= u.mean_score && o.jump_rate > u.jump_rate && elapsed < Duration::from_secs(600),
        format!(
            "o-mcts score {:.2} ({} wins), jump rate {:.3}; uct score {:.2} ({} wins), jump rate {:.3}",
            o.mean_score, o.wins, o.jump_rate, u.mean_score, u.wins, u.jump_rate
        ),
    )
}

fn determinism_and_accounting() -> Outcome {
    let text = r#"{"experiment": "audit", "environment": {"id": "platformer"},
        "algorithms": [{"kind": "uct"}, {"kind": "mixmax"}, {"kind": "o-mcts", "rl": [5, 25]}],
        "budget": [37, 250], "repetitions": 3, "seed": 11}"#;
    let bandits = format!(
        r#"{{"experiment": "audit", "environment": {{"id": "medicine"}},
            "algorithms": [{{"kind": "o-ucb", "c": {C_GRID}}}, {{"kind": "multisbm", "c": 0.4}}],
            "budget": 500, "repetitions": 3, "seed": 11}}"#
    );
    let mut identical = true;
    let mut exact = true;
    let mut moves = 0;
    for config in [text.to_string(), bandits] {
        let config = ExperimentConfig::from_json(&config).expect("config");
        let csv = |threads| {
            let records = run_experiment(&config, &[], Some(threads)).expect("run");
            let mut buf = Vec::new();
            write_records(&mut buf, &records).expect("csv");
            (records, buf)
        };
        let (records, first) = csv(1);
        let (_, second) = csv(4);
        identical &= first == second;
        for run in records.chunk_by(|a, b| a.run_id == b.run_id) {
            let last = run.last().expect("nonempty");
            exact &= run.iter().all(|r| r.calls == if r.rl.is_some() { r.budget } else { 1 });
            exact &= last.budget_used == run.iter().map(|r| r.calls).sum::<u64>();
            moves += run.len();
        }
    }
    let env = GapPlatformer::default();
    for policy in TreePolicy::ALL {
        for budget in [1, 10, 250, 500] {
            let mut meter = BudgetMeter::new(budget);
            let mut rng = ChaCha8Rng::seed_from_u64(budget);
            let r = search(&env, &env.initial_state(), SearchParams::new(policy, 0.7, 10), &mut meter, &mut rng, false)
                .expect("search");
            exact &= meter.used() == budget && r.expansions + r.selection_steps + r.rollout_steps == budget;
        }
    }
    outcome(
        identical && exact,
        format!("csv identical across reruns: {identical}; forward-model calls equal budgets: {exact} ({moves} records)"),
    )
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    results.push((1, "Borda oracle equivalence", borda_oracle()));
    let start = Instant::now();
    let report = medicine_report();
    let elapsed = start.elapsed();
    results.push((2, "medicine o-ucb reproduction", medicine_oucb(&report, elapsed)));
    results.push((3, "medicine oh-ucb reproduction", medicine_ohucb(&report)));
    results.push((4, "medicine ucb1 and multisbm", medicine_baselines(&report)));
    results.push((5, "bias divergence", bias_divergence()));
    results.push((6, "ordinal invariance", ordinal_invariance()));
    results.push((7, "empirical logarithmic regret", empirical_regret()));
    results.push((8, "o-mcts vs mcts on the gap platformer", platformer_contrast()));
    results.push((9, "determinism and accounting", determinism_and_accounting()));

    println!();
    for (n, name, o) in &results {
        println!("criterion {n} [{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    let failed: Vec<usize> = results.iter().filter(|(_, _, o)| !o.pass).map(|(n, _, _)| *n).collect();
    println!("acceptance: {} of {} criteria passed", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
