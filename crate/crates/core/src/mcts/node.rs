use super::SearchError;
use crate::bandits::{argmax_by, exploration_bonus};
use crate::ordinal::BordaTable;

/// Per-node statistics, one slot per action.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchNode {
    actions: Vec<usize>,
    children: Vec<Option<usize>>,
    tried: usize,
    visits: Vec<u64>,
    sums: Vec<f64>,
    maxes: Vec<f64>,
    table: Option<BordaTable>,
}

impl SearchNode {
    /// `scale_size` enables the node-local Borda table.
    pub fn new(actions: Vec<usize>, scale_size: Option<usize>) -> Result<Self, SearchError> {
        let k = actions.len();
        let table = match scale_size {
            Some(size) if k > 0 => Some(BordaTable::new(k, size)?),
            _ => None,
        };
        Ok(Self {
            children: vec![None; k],
            tried: 0,
            visits: vec![0; k],
            sums: vec![0.0; k],
            maxes: vec![f64::NEG_INFINITY; k],
            table,
            actions,
        })
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// Lowest untried slot, if any.
    pub fn next_untried(&self) -> Option<usize> {
        (self.tried < self.actions.len()).then_some(self.tried)
    }

    pub fn untried(&self) -> &[usize] {
        &self.actions[self.tried..]
    }

    pub(crate) fn mark_tried(&mut self, slot: usize, child: usize) {
        debug_assert_eq!(slot, self.tried);
        self.children[slot] = Some(child);
        self.tried += 1;
    }

    pub fn child(&self, slot: usize) -> Option<usize> {
        self.children[slot]
    }

    pub fn visits(&self) -> &[u64] {
        &self.visits
    }

    pub fn total_visits(&self) -> u64 {
        self.visits.iter().sum()
    }

    pub fn mean(&self, slot: usize) -> Option<f64> {
        (self.visits[slot] > 0).then(|| self.sums[slot] / self.visits[slot] as f64)
    }

    pub fn max(&self, slot: usize) -> Option<f64> {
        (self.visits[slot] > 0).then_some(self.maxes[slot])
    }

    pub fn table(&self) -> Option<&BordaTable> {
        self.table.as_ref()
    }

    /// Adds one backed-up outcome to `slot`.
    pub fn record(&mut self, slot: usize, value: f64, rank: Option<usize>) -> Result<(), SearchError> {
        if let (Some(table), Some(rank)) = (self.table.as_mut(), rank) {
            table.update(slot, rank)?;
        }
        self.visits[slot] += 1;
        self.sums[slot] += value;
        self.maxes[slot] = self.maxes[slot].max(value);
        Ok(())
    }

    fn check_visited(&self) -> Result<(), SearchError> {
        if self.actions.is_empty() {
            return Err(SearchError::NoActions);
        }
        match self.visits.iter().position(|&v| v == 0) {
            Some(slot) => Err(SearchError::UnvisitedAction(slot)),
            None => Ok(()),
        }
    }

    fn select_by<F: Fn(usize) -> f64>(&self, c: f64, exploit: F) -> Result<usize, SearchError> {
        self.check_visited()?;
        let n = self.total_visits();
        Ok(argmax_by(0..self.len(), |s| exploit(s) + 2.0 * exploration_bonus(c, n, self.visits[s])).expect("nonempty"))
    }
}

/// Slot maximising mean + 2c·sqrt(2·ln n_v / n_v(a)); the tree policies
/// carry twice the bandit exploration bonus.
pub fn select_child_uct(node: &SearchNode, c: f64) -> Result<usize, SearchError> {
    node.select_by(c, |s| node.sums[s] / node.visits[s] as f64)
}

/// As UCT with exploitation term q·max + (1 − q)·mean.
pub fn select_child_mixmax(node: &SearchNode, c: f64, q: f64) -> Result<usize, SearchError> {
    node.select_by(c, |s| q * node.maxes[s] + (1.0 - q) * node.sums[s] / node.visits[s] as f64)
}

/// As UCT with the node-local Borda score as exploitation term.
pub fn select_child_borda(node: &SearchNode, c: f64) -> Result<usize, SearchError> {
    let table = node.table.as_ref().ok_or(SearchError::NoActions)?;
    node.select_by(c, |s| table.borda(s))
}
