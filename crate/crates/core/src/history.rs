//! Local and joint action-observation histories.
//!
//! A history's timestep is implicit in its length: a local history of `t`
//! `(action, observation)` pairs describes an agent about to act at step `t`.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalHistory {
    pub agent: usize,
    /// `(action, observation)` pairs in chronological order.
    pub entries: Vec<(usize, usize)>,
}

impl LocalHistory {
    pub fn empty(agent: usize) -> Self {
        LocalHistory {
            agent,
            entries: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The observation subsequence, which indexes deterministic policies.
    pub fn observation_seq(&self) -> Vec<usize> {
        self.entries.iter().map(|&(_, o)| o).collect()
    }

    pub fn child(&self, action: usize, observation: usize) -> Self {
        let mut entries = self.entries.clone();
        entries.push((action, observation));
        LocalHistory {
            agent: self.agent,
            entries,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JointHistory {
    pub locals: Vec<LocalHistory>,
}

impl JointHistory {
    pub fn empty(n_agents: usize) -> Self {
        JointHistory {
            locals: (0..n_agents).map(LocalHistory::empty).collect(),
        }
    }

    pub fn n_agents(&self) -> usize {
        self.locals.len()
    }

    /// Shared length of the local histories.
    pub fn len(&self) -> usize {
        self.locals.first().map(|l| l.len()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn local(&self, agent: usize) -> &LocalHistory {
        &self.locals[agent]
    }

    /// Extend every local history by the step `(a_i, o_i)`.
    pub fn child(&self, joint_action: &[usize], joint_obs: &[usize]) -> Self {
        debug_assert_eq!(joint_action.len(), self.n_agents());
        debug_assert_eq!(joint_obs.len(), self.n_agents());
        JointHistory {
            locals: self
                .locals
                .iter()
                .enumerate()
                .map(|(i, l)| l.child(joint_action[i], joint_obs[i]))
                .collect(),
        }
    }

    /// The per-step `(joint action, joint observation)` sequence.
    pub fn steps(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut out = Vec::with_capacity(self.len());
        for t in 0..self.len() {
            let mut a = vec![0; self.n_agents()];
            let mut o = vec![0; self.n_agents()];
            for (i, l) in self.locals.iter().enumerate() {
                a[i] = l.entries[t].0;
                o[i] = l.entries[t].1;
            }
            out.push((a, o));
        }
        out
    }
}
