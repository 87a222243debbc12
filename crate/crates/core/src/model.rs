//! Tabular Dec-POMDP models.
//!
//! A model is the tuple of agents, states, per-agent action and observation
//! sets, a transition table `T(s, a, s')`, a reward table `R(s, a)`, an
//! observation table `O(a, s', o)`, a horizon, a discount and an initial
//! state distribution. Joint actions and joint observations are addressed by
//! mixed-radix indices with agent 0 least significant; probability rows are
//! stored sparsely so deterministic models with large state spaces stay
//! cheap.

use crate::error::CoreError;
use crate::rng::Stream;
use crate::Result;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Probability-row normalization tolerance.
pub const PROB_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Horizon {
    Finite(usize),
    Infinite,
}

impl Horizon {
    pub fn finite(&self) -> Option<usize> {
        match self {
            Horizon::Finite(h) => Some(*h),
            Horizon::Infinite => None,
        }
    }
}

/// A sparse probability row: `(index, probability)` pairs, sorted by index.
pub type SparseRow = Vec<(usize, f64)>;

#[derive(Debug, Clone)]
pub struct DecPomdpModel {
    pub n_agents: usize,
    pub n_states: usize,
    pub n_actions: Vec<usize>,
    pub n_observations: Vec<usize>,
    pub horizon: Horizon,
    pub discount: f64,
    pub initial_belief: Vec<f64>,
    /// `transition[s * n_joint_actions + ja]` is the distribution over `s'`.
    transition: Vec<SparseRow>,
    /// `reward[s * n_joint_actions + ja]`.
    reward: Vec<f64>,
    /// `observation[ja * n_states + s']` is the distribution over joint obs.
    observation: Vec<SparseRow>,
    n_joint_actions: usize,
    n_joint_observations: usize,
}

impl DecPomdpModel {
    pub fn n_joint_actions(&self) -> usize {
        self.n_joint_actions
    }

    pub fn n_joint_observations(&self) -> usize {
        self.n_joint_observations
    }

    /// Mixed-radix joint action index, agent 0 least significant.
    pub fn joint_action_index(&self, actions: &[usize]) -> usize {
        debug_assert_eq!(actions.len(), self.n_agents);
        let mut idx = 0;
        for i in (0..self.n_agents).rev() {
            idx = idx * self.n_actions[i] + actions[i];
        }
        idx
    }

    pub fn split_joint_action(&self, mut ja: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n_agents);
        for i in 0..self.n_agents {
            out.push(ja % self.n_actions[i]);
            ja /= self.n_actions[i];
        }
        out
    }

    pub fn joint_obs_index(&self, obs: &[usize]) -> usize {
        debug_assert_eq!(obs.len(), self.n_agents);
        let mut idx = 0;
        for i in (0..self.n_agents).rev() {
            idx = idx * self.n_observations[i] + obs[i];
        }
        idx
    }

    pub fn split_joint_obs(&self, mut jo: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n_agents);
        for i in 0..self.n_agents {
            out.push(jo % self.n_observations[i]);
            jo /= self.n_observations[i];
        }
        out
    }

    pub fn transition_row(&self, state: usize, ja: usize) -> &[(usize, f64)] {
        &self.transition[state * self.n_joint_actions + ja]
    }

    pub fn observation_row(&self, ja: usize, next_state: usize) -> &[(usize, f64)] {
        &self.observation[ja * self.n_states + next_state]
    }

    pub fn reward(&self, state: usize, ja: usize) -> f64 {
        self.reward[state * self.n_joint_actions + ja]
    }

    /// `O(a, s', o)` for one particular joint observation.
    pub fn observation_prob(&self, ja: usize, next_state: usize, jo: usize) -> f64 {
        self.observation_row(ja, next_state)
            .iter()
            .find(|(i, _)| *i == jo)
            .map(|(_, p)| *p)
            .unwrap_or(0.0)
    }

    fn check_indices(&self, state: usize, joint_action: &[usize]) -> Result<usize> {
        if state >= self.n_states {
            return Err(CoreError::Dimension(format!(
                "state {state} out of range (n_states = {})",
                self.n_states
            )));
        }
        if joint_action.len() != self.n_agents {
            return Err(CoreError::Dimension(format!(
                "joint action has {} entries for {} agents",
                joint_action.len(),
                self.n_agents
            )));
        }
        for (i, &a) in joint_action.iter().enumerate() {
            if a >= self.n_actions[i] {
                return Err(CoreError::Dimension(format!(
                    "action {a} out of range for agent {i} (n_actions = {})",
                    self.n_actions[i]
                )));
            }
        }
        Ok(self.joint_action_index(joint_action))
    }

    /// Sample `(s', o, r)` for taking `joint_action` in `state`.
    pub fn sample_step(
        &self,
        state: usize,
        joint_action: &[usize],
        stream: &mut Stream,
    ) -> Result<(usize, Vec<usize>, f64)> {
        let ja = self.check_indices(state, joint_action)?;
        let next = draw_sparse(self.transition_row(state, ja), stream, "transition")?;
        let jo = draw_sparse(self.observation_row(ja, next), stream, "observation")?;
        let r = self.reward(state, ja);
        Ok((next, self.split_joint_obs(jo), r))
    }

    /// Sample an initial state from `b0`.
    pub fn sample_initial_state(&self, stream: &mut Stream) -> usize {
        stream.categorical(&self.initial_belief)
    }
}

fn draw_sparse(row: &[(usize, f64)], stream: &mut Stream, what: &str) -> Result<usize> {
    let total: f64 = row.iter().map(|(_, p)| p).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(CoreError::ModelIntegrity(format!(
            "{what} row sums to {total}, expected 1"
        )));
    }
    let u = stream.next_f64();
    let mut acc = 0.0;
    let mut last = row[0].0;
    for &(i, p) in row {
        acc += p;
        last = i;
        if u < acc {
            return Ok(i);
        }
    }
    Ok(last)
}

/// Incremental model constructor. Unset probability entries default to zero;
/// `build` validates that every reachable probability row is normalized.
pub struct ModelBuilder {
    n_agents: usize,
    n_states: usize,
    n_actions: Vec<usize>,
    n_observations: Vec<usize>,
    horizon: Horizon,
    discount: f64,
    initial_belief: Vec<f64>,
    transition: Vec<SparseRow>,
    reward: Vec<f64>,
    observation: Vec<SparseRow>,
    n_joint_actions: usize,
    n_joint_observations: usize,
}

impl ModelBuilder {
    pub fn new(
        n_states: usize,
        n_actions: Vec<usize>,
        n_observations: Vec<usize>,
        horizon: Horizon,
        discount: f64,
    ) -> Self {
        let n_agents = n_actions.len();
        assert_eq!(n_observations.len(), n_agents);
        let n_joint_actions: usize = n_actions.iter().product();
        let n_joint_observations: usize = n_observations.iter().product();
        ModelBuilder {
            n_agents,
            n_states,
            n_actions,
            n_observations,
            horizon,
            discount,
            initial_belief: vec![0.0; n_states],
            transition: vec![Vec::new(); n_states * n_joint_actions],
            reward: vec![0.0; n_states * n_joint_actions],
            observation: vec![Vec::new(); n_joint_actions * n_states],
            n_joint_actions,
            n_joint_observations,
        }
    }

    pub fn n_joint_actions(&self) -> usize {
        self.n_joint_actions
    }

    pub fn set_initial_belief(&mut self, belief: &[f64]) -> &mut Self {
        assert_eq!(belief.len(), self.n_states);
        self.initial_belief.copy_from_slice(belief);
        self
    }

    pub fn set_transition(&mut self, s: usize, ja: usize, s_next: usize, p: f64) -> &mut Self {
        push_entry(&mut self.transition[s * self.n_joint_actions + ja], s_next, p);
        self
    }

    pub fn set_reward(&mut self, s: usize, ja: usize, r: f64) -> &mut Self {
        self.reward[s * self.n_joint_actions + ja] = r;
        self
    }

    pub fn set_observation(&mut self, ja: usize, s_next: usize, jo: usize, p: f64) -> &mut Self {
        push_entry(&mut self.observation[ja * self.n_states + s_next], jo, p);
        self
    }

    pub fn build(self) -> Result<DecPomdpModel> {
        if self.n_states == 0 {
            return Err(CoreError::Spec(String::from("model needs at least one state")));
        }
        if let Horizon::Infinite = self.horizon {
            if self.discount >= 1.0 {
                return Err(CoreError::ModelIntegrity(String::from(
                    "infinite horizon requires discount < 1",
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.discount) {
            return Err(CoreError::ModelIntegrity(format!(
                "discount {} outside [0, 1]",
                self.discount
            )));
        }
        check_row(&to_sparse(&self.initial_belief), "initial belief")?;
        for s in 0..self.n_states {
            for ja in 0..self.n_joint_actions {
                check_row(
                    &self.transition[s * self.n_joint_actions + ja],
                    &format!("transition (s={s}, ja={ja})"),
                )?;
            }
        }
        for ja in 0..self.n_joint_actions {
            for s_next in 0..self.n_states {
                check_row(
                    &self.observation[ja * self.n_states + s_next],
                    &format!("observation (ja={ja}, s'={s_next})"),
                )?;
            }
        }
        Ok(DecPomdpModel {
            n_agents: self.n_agents,
            n_states: self.n_states,
            n_actions: self.n_actions,
            n_observations: self.n_observations,
            horizon: self.horizon,
            discount: self.discount,
            initial_belief: self.initial_belief,
            transition: self.transition,
            reward: self.reward,
            observation: self.observation,
            n_joint_actions: self.n_joint_actions,
            n_joint_observations: self.n_joint_observations,
        })
    }
}

fn push_entry(row: &mut SparseRow, idx: usize, p: f64) {
    if let Some(slot) = row.iter_mut().find(|(i, _)| *i == idx) {
        slot.1 = p;
    } else {
        row.push((idx, p));
        row.sort_unstable_by_key(|(i, _)| *i);
    }
}

fn to_sparse(dense: &[f64]) -> SparseRow {
    dense
        .iter()
        .enumerate()
        .filter(|(_, &p)| p != 0.0)
        .map(|(i, &p)| (i, p))
        .collect()
}

fn check_row(row: &[(usize, f64)], what: &str) -> Result<()> {
    let mut total = 0.0;
    for &(_, p) in row {
        if !(0.0..=1.0 + PROB_TOL).contains(&p) {
            return Err(CoreError::ModelIntegrity(format!(
                "{what}: probability {p} outside [0, 1]"
            )));
        }
        total += p;
    }
    if (total - 1.0).abs() > PROB_TOL {
        return Err(CoreError::ModelIntegrity(format!(
            "{what}: row sums to {total}, expected 1"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{role, Stream};

    /// One state, two agents with one action each, reward 1.
    fn single_state_model() -> DecPomdpModel {
        let mut b = ModelBuilder::new(1, vec![1, 1], vec![1, 1], Horizon::Finite(3), 1.0);
        b.set_initial_belief(&[1.0]);
        b.set_transition(0, 0, 0, 1.0);
        b.set_reward(0, 0, 1.0);
        b.set_observation(0, 0, 0, 1.0);
        b.build().unwrap()
    }

    #[test]
    fn deterministic_single_state_step() {
        let m = single_state_model();
        let mut s = Stream::derive(1, role::ENV, 0);
        let (next, obs, r) = m.sample_step(0, &[0, 0], &mut s).unwrap();
        assert_eq!(next, 0);
        assert_eq!(obs, vec![0, 0]);
        assert_eq!(r, 1.0);
    }

    #[test]
    fn deterministic_chain_step() {
        // T(s0, a, s1) = 1, O(a, s1, o1) = 1.
        let mut b = ModelBuilder::new(2, vec![1], vec![2], Horizon::Finite(1), 1.0);
        b.set_initial_belief(&[1.0, 0.0]);
        b.set_transition(0, 0, 1, 1.0);
        b.set_transition(1, 0, 1, 1.0);
        b.set_reward(0, 0, 0.5);
        b.set_observation(0, 0, 0, 1.0);
        b.set_observation(0, 1, 1, 1.0);
        let m = b.build().unwrap();
        let mut s = Stream::derive(2, role::ENV, 0);
        let (next, obs, r) = m.sample_step(0, &[0], &mut s).unwrap();
        assert_eq!(next, 1);
        assert_eq!(obs, vec![1]);
        assert_eq!(r, 0.5);
    }

    #[test]
    fn invalid_indices_are_dimension_errors() {
        let m = single_state_model();
        let mut s = Stream::derive(3, role::ENV, 0);
        assert!(matches!(
            m.sample_step(5, &[0, 0], &mut s),
            Err(CoreError::Dimension(_))
        ));
        assert!(matches!(
            m.sample_step(0, &[1, 0], &mut s),
            Err(CoreError::Dimension(_))
        ));
        assert!(matches!(
            m.sample_step(0, &[0], &mut s),
            Err(CoreError::Dimension(_))
        ));
    }

    #[test]
    fn non_normalized_row_rejected_at_build() {
        let mut b = ModelBuilder::new(1, vec![1], vec![1], Horizon::Finite(1), 1.0);
        b.set_initial_belief(&[1.0]);
        b.set_transition(0, 0, 0, 0.7);
        b.set_observation(0, 0, 0, 1.0);
        assert!(matches!(b.build(), Err(CoreError::ModelIntegrity(_))));
    }

    #[test]
    fn infinite_horizon_requires_discount_below_one() {
        let mut b = ModelBuilder::new(1, vec![1], vec![1], Horizon::Infinite, 1.0);
        b.set_initial_belief(&[1.0]);
        b.set_transition(0, 0, 0, 1.0);
        b.set_observation(0, 0, 0, 1.0);
        assert!(matches!(b.build(), Err(CoreError::ModelIntegrity(_))));
    }

    #[test]
    fn sampler_frequencies_match_transition_row() {
        // Stochastic two-state flip: empirical frequency within 3 binomial
        // standard deviations of the table entry.
        let mut b = ModelBuilder::new(2, vec![1], vec![1], Horizon::Finite(1), 1.0);
        b.set_initial_belief(&[1.0, 0.0]);
        let p = 0.3;
        for s in 0..2 {
            b.set_transition(s, 0, 0, p);
            b.set_transition(s, 0, 1, 1.0 - p);
            b.set_observation(0, s, 0, 1.0);
        }
        let m = b.build().unwrap();
        let mut stream = Stream::derive(4, role::ENV, 0);
        let n = 100_000;
        let mut count0 = 0usize;
        for _ in 0..n {
            let (next, _, _) = m.sample_step(0, &[0], &mut stream).unwrap();
            if next == 0 {
                count0 += 1;
            }
        }
        let expect = p * n as f64;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        assert!(
            (count0 as f64 - expect).abs() < 3.0 * sd,
            "count {count0} vs expectation {expect} (sd {sd})"
        );
    }

    #[test]
    fn joint_index_round_trip() {
        let mut b = ModelBuilder::new(1, vec![2, 3], vec![2, 2], Horizon::Finite(1), 1.0);
        b.set_initial_belief(&[1.0]);
        for ja in 0..6 {
            b.set_transition(0, ja, 0, 1.0);
            b.set_observation(ja, 0, 0, 1.0);
        }
        let m = b.build().unwrap();
        for ja in 0..6 {
            let split = m.split_joint_action(ja);
            assert_eq!(m.joint_action_index(&split), ja);
        }
        // Agent 0 is least significant.
        assert_eq!(m.joint_action_index(&[1, 0]), 1);
        assert_eq!(m.joint_action_index(&[0, 1]), 2);
    }
}
