//! Python bindings: ordinal statistics, bandit policies, the built-in
//! environments and the experiment harness.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ordinal_search::bandits;
use ordinal_search::envs::{self, GapPlatformer};
use ordinal_search::harness::{self, ExperimentConfig};
use ordinal_search::mcts::{SearchParams, TreePolicy};
use ordinal_search::ordinal::{self, Hierarchy};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "OrdinalScale", module = "pyordinal")]
struct OrdinalScale(ordinal::OrdinalScale);

#[pymethods]
impl OrdinalScale {
    #[new]
    fn new(labels: Vec<String>) -> PyResult<Self> {
        ordinal::OrdinalScale::new(labels).map(Self).map_err(value_error)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn labels(&self) -> Vec<String> {
        self.0.labels().to_vec()
    }

    fn rank_of(&self, label: &str) -> Option<usize> {
        self.0.rank_of(label)
    }
}

#[pyclass(name = "EmpiricalDistribution", module = "pyordinal")]
struct EmpiricalDistribution(ordinal::EmpiricalDistribution);

#[pymethods]
impl EmpiricalDistribution {
    #[new]
    fn new(size: usize) -> Self {
        Self(ordinal::EmpiricalDistribution::new(size))
    }

    #[staticmethod]
    fn from_counts(counts: Vec<u64>) -> Self {
        Self(ordinal::EmpiricalDistribution::from_counts(&counts))
    }

    fn update(&mut self, rank: usize) -> PyResult<()> {
        self.0.update(rank).map_err(value_error)
    }

    fn total(&self) -> u64 {
        self.0.total()
    }

    fn counts(&self) -> Vec<u64> {
        self.0.counts().to_vec()
    }

    fn cdf(&self, rank: usize) -> Option<f64> {
        self.0.cdf(rank)
    }

    fn prob_beats(&self, other: &EmpiricalDistribution) -> PyResult<f64> {
        ordinal::prob_beats(&self.0, &other.0).map_err(value_error)
    }
}

/// Pr(a beats b) + half the tie probability for two count vectors.
#[pyfunction]
fn prob_beats(a: Vec<u64>, b: Vec<u64>) -> PyResult<f64> {
    let (a, b) = (ordinal::EmpiricalDistribution::from_counts(&a), ordinal::EmpiricalDistribution::from_counts(&b));
    ordinal::prob_beats(&a, &b).map_err(value_error)
}

/// Mann-Whitney z statistic from Pr(a beats b) and the two sample sizes.
#[pyfunction]
fn mann_whitney_z(p: f64, n: u64, m: u64) -> f64 {
    ordinal::mann_whitney_z_from_prob(p, n, m)
}

#[pyclass(name = "BordaTable", module = "pyordinal")]
struct BordaTable(ordinal::BordaTable);

#[pymethods]
impl BordaTable {
    #[new]
    fn new(arms: usize, scale_size: usize) -> PyResult<Self> {
        ordinal::BordaTable::new(arms, scale_size).map(Self).map_err(value_error)
    }

    fn update(&mut self, arm: usize, rank: usize) -> PyResult<()> {
        self.0.update(arm, rank).map_err(value_error)
    }

    fn beat(&self, a: usize, b: usize) -> f64 {
        self.0.beat(a, b)
    }

    fn borda(&self, arm: usize) -> f64 {
        self.0.borda(arm)
    }

    fn borda_scores(&self) -> Vec<f64> {
        self.0.borda_scores().to_vec()
    }

    fn winner(&self) -> usize {
        self.0.winner()
    }

    fn pulls(&self, arm: usize) -> u64 {
        self.0.pulls(arm)
    }
}

/// A bandit policy with its own seeded random stream (used by MultiSBM).
#[pyclass(name = "BanditPolicy", module = "pyordinal")]
struct BanditPolicy {
    inner: bandits::BanditPolicy,
    rng: ChaCha8Rng,
}

impl BanditPolicy {
    fn wrap(inner: Result<bandits::BanditPolicy, bandits::BanditError>, seed: u64) -> PyResult<Self> {
        Ok(Self { inner: inner.map_err(value_error)?, rng: ChaCha8Rng::seed_from_u64(seed) })
    }
}

#[pymethods]
impl BanditPolicy {
    #[staticmethod]
    #[pyo3(signature = (arms, c, seed=0))]
    fn ucb1(arms: usize, c: f64, seed: u64) -> PyResult<Self> {
        Self::wrap(bandits::BanditPolicy::ucb1(arms, c), seed)
    }

    #[staticmethod]
    #[pyo3(signature = (arms, scale_size, c, seed=0))]
    fn oucb(arms: usize, scale_size: usize, c: f64, seed: u64) -> PyResult<Self> {
        Self::wrap(bandits::BanditPolicy::oucb(arms, scale_size, c), seed)
    }

    #[staticmethod]
    #[pyo3(signature = (arms, scale_size, levels, c, z_critical=0.65, seed=0))]
    fn ohucb(arms: usize, scale_size: usize, levels: Vec<Vec<usize>>, c: f64, z_critical: f64, seed: u64) -> PyResult<Self> {
        let h = Hierarchy::new(scale_size, levels, z_critical).map_err(value_error)?;
        Self::wrap(bandits::BanditPolicy::ohucb(arms, h, c), seed)
    }

    #[staticmethod]
    #[pyo3(signature = (arms, c, seed=0))]
    fn multisbm(arms: usize, c: f64, seed: u64) -> PyResult<Self> {
        Self::wrap(bandits::BanditPolicy::multisbm(arms, c), seed)
    }

    fn kind(&self) -> &'static str {
        self.inner.kind().name()
    }

    fn select(&mut self) -> usize {
        self.inner.select(&mut self.rng)
    }

    /// Reports the outcome of the last selected arm.
    fn update(&mut self, arm: usize, rank: usize, value: f64) -> PyResult<()> {
        self.inner.update(arm, rank, value).map_err(value_error)
    }
}

#[pyclass(name = "CategoricalBandit", module = "pyordinal")]
struct CategoricalBandit {
    inner: envs::CategoricalBandit,
    rng: ChaCha8Rng,
}

#[pymethods]
impl CategoricalBandit {
    #[staticmethod]
    #[pyo3(signature = (seed=0))]
    fn medicine(seed: u64) -> Self {
        Self { inner: envs::CategoricalBandit::medicine(), rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    #[staticmethod]
    #[pyo3(signature = (p=0.7, values=[0.0, 0.6, 0.8], seed=0))]
    fn skew(p: f64, values: [f64; 3], seed: u64) -> PyResult<Self> {
        let inner = envs::CategoricalBandit::skew(p, values).map_err(value_error)?;
        Ok(Self { inner, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    fn arms(&self) -> usize {
        self.inner.arms()
    }

    fn scale_size(&self) -> usize {
        self.inner.scale().len()
    }

    fn pull(&mut self, arm: usize) -> PyResult<usize> {
        self.inner.pull(arm, &mut self.rng).map_err(value_error)
    }

    fn value(&self, rank: usize) -> f64 {
        self.inner.value(rank)
    }

    fn expected_value(&self, arm: usize) -> f64 {
        self.inner.expected_value(arm)
    }

    fn true_borda(&self) -> Vec<f64> {
        self.inner.true_borda()
    }
}

/// Plays one gap-platformer episode with a fresh budgeted search per move.
/// Returns (action, status, score) per executed move.
#[pyfunction]
#[pyo3(signature = (policy="o-mcts", budget=500, seed=0, c=std::f64::consts::FRAC_1_SQRT_2, rl=10))]
fn platformer_episode(policy: &str, budget: u64, seed: u64, c: f64, rl: usize) -> PyResult<Vec<(usize, String, i64)>> {
    let policy: TreePolicy = policy.parse().map_err(PyValueError::new_err)?;
    let env = GapPlatformer::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let moves = harness::play_episode(&env, SearchParams::new(policy, c, rl), budget, &mut rng).map_err(value_error)?;
    Ok(moves
        .into_iter()
        .map(|m| (m.search.action, m.after.status.name().to_string(), m.after.score))
        .collect())
}

/// Runs an experiment config given as JSON and returns the records as CSV.
#[pyfunction]
#[pyo3(signature = (config, threads=None))]
fn run_config(py: Python<'_>, config: &str, threads: Option<usize>) -> PyResult<String> {
    let config = ExperimentConfig::from_json(config).map_err(value_error)?;
    let records = py.detach(|| harness::run_experiment(&config, &[], threads)).map_err(value_error)?;
    let mut buf = Vec::new();
    harness::write_records(&mut buf, &records).map_err(value_error)?;
    String::from_utf8(buf).map_err(value_error)
}

/// Renders the summary table of a records CSV.
#[pyfunction]
fn report(records_csv: &str) -> PyResult<String> {
    let records = harness::read_records(records_csv.as_bytes()).map_err(value_error)?;
    Ok(harness::summarize(&records).map_err(value_error)?.render())
}

#[pymodule]
fn pyordinal(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<OrdinalScale>()?;
    m.add_class::<EmpiricalDistribution>()?;
    m.add_class::<BordaTable>()?;
    m.add_class::<BanditPolicy>()?;
    m.add_class::<CategoricalBandit>()?;
    m.add_function(wrap_pyfunction!(prob_beats, m)?)?;
    m.add_function(wrap_pyfunction!(mann_whitney_z, m)?)?;
    m.add_function(wrap_pyfunction!(platformer_episode, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    Ok(())
}
