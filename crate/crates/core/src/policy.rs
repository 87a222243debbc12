//! Joint policies over local histories.
//!
//! Deterministic policies are indexed by per-agent observation sequences
//! (sufficient for deterministic behavior, since the actions along a branch
//! are determined by the policy itself). Stochastic policies are indexed by
//! full action-observation histories. Both expose the same interface to the
//! exact evaluator: a distribution over one agent's actions at that agent's
//! local history.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::history::LocalHistory;

/// Anything the exact evaluator can score.
pub trait JointPolicy {
    fn n_agents(&self) -> usize;
    /// Probability distribution over agent `i`'s actions at its history.
    fn action_distribution(&self, agent: usize, local: &LocalHistory) -> Vec<f64>;
}

/// Per-agent deterministic maps from observation sequences to actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDeterministicPolicy {
    pub per_agent: Vec<BTreeMap<Vec<usize>, usize>>,
    pub n_actions: Vec<usize>,
}

impl JointDeterministicPolicy {
    pub fn new(n_actions: Vec<usize>) -> Self {
        let n = n_actions.len();
        JointDeterministicPolicy {
            per_agent: vec![BTreeMap::new(); n],
            n_actions,
        }
    }

    /// A policy that plays the same fixed joint action at every history.
    pub fn constant(n_actions: Vec<usize>, joint_action: &[usize]) -> Self {
        let mut p = Self::new(n_actions);
        for (i, &a) in joint_action.iter().enumerate() {
            p.per_agent[i].insert(Vec::new(), a);
        }
        p
    }

    pub fn set(&mut self, agent: usize, obs_seq: Vec<usize>, action: usize) {
        debug_assert!(action < self.n_actions[agent]);
        self.per_agent[agent].insert(obs_seq, action);
    }

    /// Action at an observation sequence. Falls back to the longest stored
    /// prefix map entry, so `constant` policies answer every history.
    pub fn action(&self, agent: usize, obs_seq: &[usize]) -> usize {
        if let Some(&a) = self.per_agent[agent].get(obs_seq) {
            return a;
        }
        // Constant policies store only the empty sequence.
        self.per_agent[agent]
            .get(&Vec::new())
            .copied()
            .unwrap_or(0)
    }
}

impl JointPolicy for JointDeterministicPolicy {
    fn n_agents(&self) -> usize {
        self.per_agent.len()
    }

    fn action_distribution(&self, agent: usize, local: &LocalHistory) -> Vec<f64> {
        let a = self.action(agent, &local.observation_seq());
        let mut dist = vec![0.0; self.n_actions[agent]];
        dist[a] = 1.0;
        dist
    }
}

/// Per-agent stochastic maps from action-observation histories to
/// distributions over actions.
#[derive(Debug, Clone, PartialEq)]
pub struct JointStochasticPolicy {
    pub per_agent: Vec<BTreeMap<Vec<(usize, usize)>, Vec<f64>>>,
    pub n_actions: Vec<usize>,
}

impl JointStochasticPolicy {
    pub fn new(n_actions: Vec<usize>) -> Self {
        let n = n_actions.len();
        JointStochasticPolicy {
            per_agent: vec![BTreeMap::new(); n],
            n_actions,
        }
    }

    pub fn set(&mut self, agent: usize, history: Vec<(usize, usize)>, dist: Vec<f64>) {
        debug_assert_eq!(dist.len(), self.n_actions[agent]);
        self.per_agent[agent].insert(history, dist);
    }

    /// The uniform-random joint policy (constant over histories).
    pub fn uniform(n_actions: Vec<usize>) -> Self {
        let mut p = Self::new(n_actions.clone());
        for (i, &na) in n_actions.iter().enumerate() {
            p.per_agent[i].insert(Vec::new(), vec![1.0 / na as f64; na]);
        }
        p
    }
}

impl JointPolicy for JointStochasticPolicy {
    fn n_agents(&self) -> usize {
        self.per_agent.len()
    }

    fn action_distribution(&self, agent: usize, local: &LocalHistory) -> Vec<f64> {
        if let Some(dist) = self.per_agent[agent].get(&local.entries) {
            return dist.clone();
        }
        self.per_agent[agent]
            .get(&Vec::new())
            .cloned()
            .unwrap_or_else(|| {
                let na = self.n_actions[agent];
                vec![1.0 / na as f64; na]
            })
    }
}
