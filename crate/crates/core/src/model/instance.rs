use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use super::ModelError;
use crate::rational::{dot, sum, Rational};

/// A principal-agent instance with `n` actions and `m` outcomes.
///
/// Actions are stored sorted by cost and outcomes sorted by reward (both
/// stable), so index `0` is always the cheapest action and the lowest reward.
/// The permutations back to the caller's order are kept for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    costs: Vec<Rational>,
    rewards: Vec<Rational>,
    probs: Vec<Vec<Rational>>,
    action_origin: Vec<usize>,
    outcome_origin: Vec<usize>,
    action_labels: Vec<String>,
    outcome_labels: Vec<String>,
}

impl Instance {
    pub fn new(
        costs: Vec<Rational>,
        rewards: Vec<Rational>,
        probs: Vec<Vec<Rational>>,
    ) -> Result<Self, ModelError> {
        Self::with_labels(costs, rewards, probs, None, None)
    }

    pub fn with_labels(
        costs: Vec<Rational>,
        rewards: Vec<Rational>,
        probs: Vec<Vec<Rational>>,
        action_labels: Option<Vec<String>>,
        outcome_labels: Option<Vec<String>>,
    ) -> Result<Self, ModelError> {
        let n = costs.len();
        let m = rewards.len();
        if n == 0 {
            return Err(ModelError::NoActions);
        }
        if m == 0 {
            return Err(ModelError::NoOutcomes);
        }
        if probs.len() != n {
            return Err(ModelError::RowCount { expected: n, found: probs.len() });
        }
        for (i, row) in probs.iter().enumerate() {
            if row.len() != m {
                return Err(ModelError::Ragged { row: i, expected: m, found: row.len() });
            }
            for (j, p) in row.iter().enumerate() {
                if p.is_negative() || *p > Rational::one() {
                    return Err(ModelError::Probability { row: i, col: j, value: p.clone() });
                }
            }
            let total = sum(row);
            if !total.is_one() {
                return Err(ModelError::RowSum { row: i, sum: total });
            }
        }
        if let Some(i) = costs.iter().position(Signed::is_negative) {
            return Err(ModelError::NegativeCost { action: i });
        }
        if let Some(j) = rewards.iter().position(Signed::is_negative) {
            return Err(ModelError::NegativeReward { outcome: j });
        }
        let action_labels =
            action_labels.unwrap_or_else(|| (1..=n).map(|k| k.to_string()).collect());
        let outcome_labels =
            outcome_labels.unwrap_or_else(|| (1..=m).map(|k| k.to_string()).collect());
        if action_labels.len() != n {
            return Err(ModelError::LabelCount { expected: n, found: action_labels.len() });
        }
        if outcome_labels.len() != m {
            return Err(ModelError::LabelCount { expected: m, found: outcome_labels.len() });
        }

        let mut action_origin: Vec<usize> = (0..n).collect();
        action_origin.sort_by(|&a, &b| costs[a].cmp(&costs[b]));
        let mut outcome_origin: Vec<usize> = (0..m).collect();
        outcome_origin.sort_by(|&a, &b| rewards[a].cmp(&rewards[b]));

        Ok(Self {
            costs: action_origin.iter().map(|&i| costs[i].clone()).collect(),
            rewards: outcome_origin.iter().map(|&j| rewards[j].clone()).collect(),
            probs: action_origin
                .iter()
                .map(|&i| outcome_origin.iter().map(|&j| probs[i][j].clone()).collect())
                .collect(),
            action_labels: action_origin.iter().map(|&i| action_labels[i].clone()).collect(),
            outcome_labels: outcome_origin.iter().map(|&j| outcome_labels[j].clone()).collect(),
            action_origin,
            outcome_origin,
        })
    }

    pub fn n(&self) -> usize {
        self.costs.len()
    }

    pub fn m(&self) -> usize {
        self.rewards.len()
    }

    pub fn costs(&self) -> &[Rational] {
        &self.costs
    }

    pub fn cost(&self, i: usize) -> &Rational {
        &self.costs[i]
    }

    pub fn rewards(&self) -> &[Rational] {
        &self.rewards
    }

    pub fn probs(&self) -> &[Vec<Rational>] {
        &self.probs
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.probs[i]
    }

    pub fn p(&self, i: usize, j: usize) -> &Rational {
        &self.probs[i][j]
    }

    /// Caller-side index of sorted action `i`.
    pub fn action_origin(&self, i: usize) -> usize {
        self.action_origin[i]
    }

    /// Caller-side index of sorted outcome `j`.
    pub fn outcome_origin(&self, j: usize) -> usize {
        self.outcome_origin[j]
    }

    /// Sorted position of the action the caller supplied at index `original`.
    pub fn action_position(&self, original: usize) -> Option<usize> {
        self.action_origin.iter().position(|&k| k == original)
    }

    pub fn action_label(&self, i: usize) -> &str {
        &self.action_labels[i]
    }

    pub fn outcome_label(&self, j: usize) -> &str {
        &self.outcome_labels[j]
    }

    /// Reorders a payment vector given in caller outcome order into sorted order.
    pub fn payments_from_original(&self, original: &[Rational]) -> Vec<Rational> {
        self.outcome_origin.iter().map(|&j| original[j].clone()).collect()
    }

    /// Reorders a payment vector given in sorted outcome order into caller order.
    pub fn payments_to_original(&self, sorted: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.m()];
        for (j, v) in sorted.iter().enumerate() {
            out[self.outcome_origin[j]] = v.clone();
        }
        out
    }

    /// Costs, rewards, rows and labels in the caller's original order.
    pub fn original_layout(&self) -> OriginalLayout {
        let n = self.n();
        let mut costs = vec![Rational::zero(); n];
        let mut probs = vec![Vec::new(); n];
        let mut action_labels = vec![String::new(); n];
        for i in 0..n {
            let k = self.action_origin[i];
            costs[k] = self.costs[i].clone();
            probs[k] = self.payments_to_original(&self.probs[i]);
            action_labels[k] = self.action_labels[i].clone();
        }
        let mut outcome_labels = vec![String::new(); self.m()];
        for j in 0..self.m() {
            outcome_labels[self.outcome_origin[j]] = self.outcome_labels[j].clone();
        }
        OriginalLayout {
            costs,
            rewards: self.payments_to_original(&self.rewards),
            probs,
            action_labels,
            outcome_labels,
        }
    }

    pub fn expected_reward(&self, i: usize) -> Rational {
        dot(&self.probs[i], &self.rewards)
    }

    pub fn welfare(&self, i: usize) -> Rational {
        self.expected_reward(i) - &self.costs[i]
    }

    /// `(action, welfare)` maximising welfare; ties go to the smaller index.
    pub fn first_best(&self) -> (usize, Rational) {
        let mut best = (0, self.welfare(0));
        for i in 1..self.n() {
            let w = self.welfare(i);
            if w > best.1 {
                best = (i, w);
            }
        }
        best
    }

    /// Index of the lowest outcome in the support of `p_i`.
    pub fn support_low(&self, i: usize) -> usize {
        self.probs[i].iter().position(|p| !p.is_zero()).expect("rows sum to one")
    }

    /// Index of the highest outcome in the support of `p_i`.
    pub fn support_high(&self, i: usize) -> usize {
        self.probs[i].iter().rposition(|p| !p.is_zero()).expect("rows sum to one")
    }

    /// `Σ_{j ≥ k} p_ij` for every `k`.
    pub fn tail_sums(&self, i: usize) -> Vec<Rational> {
        let mut tails = vec![Rational::zero(); self.m()];
        let mut acc = Rational::zero();
        for j in (0..self.m()).rev() {
            acc += &self.probs[i][j];
            tails[j] = acc.clone();
        }
        tails
    }

    /// First pair of actions `(a, b)`, `a < b`, with identical rows.
    pub fn duplicate_rows(&self) -> Option<(usize, usize)> {
        let mut seen: HashMap<&[Rational], usize> = HashMap::with_capacity(self.n());
        for (i, row) in self.probs.iter().enumerate() {
            if let Some(&a) = seen.get(row.as_slice()) {
                return Some((a, i));
            }
            seen.insert(row, i);
        }
        None
    }

    /// Sub-instance keeping the listed sorted actions, in order.
    pub fn restrict_actions(&self, keep: &[usize]) -> Result<Self, ModelError> {
        Self::with_labels(
            keep.iter().map(|&i| self.costs[i].clone()).collect(),
            self.rewards.clone(),
            keep.iter().map(|&i| self.probs[i].clone()).collect(),
            Some(keep.iter().map(|&i| self.action_labels[i].clone()).collect()),
            Some(self.outcome_labels.clone()),
        )
    }
}

/// Instance data laid out in the order the caller supplied it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OriginalLayout {
    pub costs: Vec<Rational>,
    pub rewards: Vec<Rational>,
    pub probs: Vec<Vec<Rational>>,
    pub action_labels: Vec<String>,
    pub outcome_labels: Vec<String>,
}
