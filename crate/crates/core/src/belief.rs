//! Bayesian state estimation conditioned on joint histories.

use crate::error::CoreError;
use crate::history::JointHistory;
use crate::model::DecPomdpModel;
use crate::Result;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// A distribution over states.
#[derive(Debug, Clone, PartialEq)]
pub struct Belief(pub Vec<f64>);

impl Belief {
    pub fn initial(model: &DecPomdpModel) -> Self {
        Belief(model.initial_belief.clone())
    }

    pub fn prob(&self, state: usize) -> f64 {
        self.0[state]
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// One Bayes update: `b'(s') ∝ O(a, s', o) · Σ_s T(s, a, s') b(s)`.
///
/// Errors with a zero-probability event when the observation is impossible
/// under the predicted distribution.
pub fn belief_filter(
    model: &DecPomdpModel,
    belief: &Belief,
    joint_action: &[usize],
    joint_obs: &[usize],
) -> Result<Belief> {
    let ja = model.joint_action_index(joint_action);
    let jo = model.joint_obs_index(joint_obs);
    filter_indexed(model, belief, ja, jo)
}

/// Same update keyed by joint indices; used by the exact evaluator.
pub fn filter_indexed(
    model: &DecPomdpModel,
    belief: &Belief,
    ja: usize,
    jo: usize,
) -> Result<Belief> {
    let mut predicted = vec![0.0; model.n_states];
    for (s, &b) in belief.0.iter().enumerate() {
        if b == 0.0 {
            continue;
        }
        for &(s_next, p) in model.transition_row(s, ja) {
            predicted[s_next] += b * p;
        }
    }
    let mut post = vec![0.0; model.n_states];
    let mut norm = 0.0;
    for (s_next, &pred) in predicted.iter().enumerate() {
        if pred == 0.0 {
            continue;
        }
        let w = pred * model.observation_prob(ja, s_next, jo);
        post[s_next] = w;
        norm += w;
    }
    if norm <= 0.0 {
        return Err(CoreError::ZeroProbabilityEvent(format!(
            "observation {jo} has probability zero after action {ja}"
        )));
    }
    for p in &mut post {
        *p /= norm;
    }
    Ok(Belief(post))
}

/// Probability of observing joint observation `jo` after acting `ja` in
/// `belief`: `Σ_s' O(a, s', o) Σ_s T(s, a, s') b(s)`.
pub fn observation_likelihood(
    model: &DecPomdpModel,
    belief: &Belief,
    ja: usize,
    jo: usize,
) -> f64 {
    let mut total = 0.0;
    for (s, &b) in belief.0.iter().enumerate() {
        if b == 0.0 {
            continue;
        }
        for &(s_next, p) in model.transition_row(s, ja) {
            total += b * p * model.observation_prob(ja, s_next, jo);
        }
    }
    total
}

/// Filter the initial belief through an entire joint history.
///
/// Fails with a zero-probability event if the history is unreachable.
pub fn belief_after(model: &DecPomdpModel, history: &JointHistory) -> Result<Belief> {
    let mut b = Belief::initial(model);
    for (a, o) in history.steps() {
        b = belief_filter(model, &b, &a, &o)?;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Horizon, ModelBuilder};

    /// Two states that never change; identical uninformative observations.
    fn state_invariant_model() -> DecPomdpModel {
        let mut b = ModelBuilder::new(2, vec![2], vec![2], Horizon::Finite(3), 1.0);
        b.set_initial_belief(&[0.5, 0.5]);
        for s in 0..2 {
            for a in 0..2 {
                b.set_transition(s, a, s, 1.0);
                b.set_observation(a, s, 0, 0.5);
                b.set_observation(a, s, 1, 0.5);
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn uniform_belief_stays_uniform_under_symmetry() {
        let m = state_invariant_model();
        let b0 = Belief::initial(&m);
        let b1 = belief_filter(&m, &b0, &[0], &[1]).unwrap();
        assert!((b1.prob(0) - 0.5).abs() < 1e-12);
        assert!((b1.prob(1) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn deterministic_model_gives_point_mass() {
        // s0 -> s1 deterministically, observation identifies the state.
        let mut b = ModelBuilder::new(2, vec![1], vec![2], Horizon::Finite(2), 1.0);
        b.set_initial_belief(&[0.5, 0.5]);
        b.set_transition(0, 0, 1, 1.0);
        b.set_transition(1, 0, 0, 1.0);
        b.set_observation(0, 0, 0, 1.0);
        b.set_observation(0, 1, 1, 1.0);
        let m = b.build().unwrap();
        let post = belief_filter(&m, &Belief::initial(&m), &[0], &[1]).unwrap();
        assert_eq!(post.0, vec![0.0, 1.0]);
    }

    #[test]
    fn impossible_observation_is_an_error() {
        let mut b = ModelBuilder::new(1, vec![1], vec![2], Horizon::Finite(1), 1.0);
        b.set_initial_belief(&[1.0]);
        b.set_transition(0, 0, 0, 1.0);
        b.set_observation(0, 0, 0, 1.0); // observation 1 never occurs
        let m = b.build().unwrap();
        let r = belief_filter(&m, &Belief::initial(&m), &[0], &[1]);
        assert!(matches!(r, Err(CoreError::ZeroProbabilityEvent(_))));
    }
}
