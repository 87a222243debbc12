//! Exact evaluation of joint policies on finite-horizon models.
//!
//! The value of a joint policy at a joint history is computed by the full
//! recursion over states, successor states and joint observations, with the
//! state uncertainty carried as a filtered belief. Values are zero at
//! histories whose length equals the horizon.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::belief::{belief_after, filter_indexed, Belief};
use crate::error::CoreError;
use crate::history::JointHistory;
use crate::model::{DecPomdpModel, Horizon};
use crate::policy::JointPolicy;
use crate::Result;

/// Memoizing evaluator for one `(model, policy)` pair.
pub struct ExactEvaluator<'a, P: JointPolicy + ?Sized> {
    model: &'a DecPomdpModel,
    policy: &'a P,
    horizon: usize,
    memo: BTreeMap<Vec<(usize, usize)>, f64>,
}

impl<'a, P: JointPolicy + ?Sized> ExactEvaluator<'a, P> {
    pub fn new(model: &'a DecPomdpModel, policy: &'a P) -> Result<Self> {
        let horizon = match model.horizon {
            Horizon::Finite(h) => h,
            Horizon::Infinite => return Err(CoreError::UnsupportedExact),
        };
        Ok(ExactEvaluator {
            model,
            policy,
            horizon,
            memo: BTreeMap::new(),
        })
    }

    /// `V^π(h)`.
    pub fn value(&mut self, start: &JointHistory) -> Result<f64> {
        let belief = belief_after(self.model, start)?;
        let mut key: Vec<(usize, usize)> = start
            .steps()
            .iter()
            .map(|(a, o)| {
                (
                    self.model.joint_action_index(a),
                    self.model.joint_obs_index(o),
                )
            })
            .collect();
        self.value_rec(&mut key, start, &belief)
    }

    /// `Q^π(h, a)`: act `a` now, then continue with the policy.
    pub fn q_value(&mut self, history: &JointHistory, joint_action: &[usize]) -> Result<f64> {
        if history.len() >= self.horizon {
            return Ok(0.0);
        }
        let belief = belief_after(self.model, history)?;
        let mut key: Vec<(usize, usize)> = history
            .steps()
            .iter()
            .map(|(a, o)| {
                (
                    self.model.joint_action_index(a),
                    self.model.joint_obs_index(o),
                )
            })
            .collect();
        let ja = self.model.joint_action_index(joint_action);
        self.action_value(&mut key, history, &belief, ja)
    }

    fn value_rec(
        &mut self,
        key: &mut Vec<(usize, usize)>,
        h: &JointHistory,
        belief: &Belief,
    ) -> Result<f64> {
        if h.len() >= self.horizon {
            return Ok(0.0);
        }
        if let Some(&v) = self.memo.get(key) {
            return Ok(v);
        }
        let dists: Vec<Vec<f64>> = (0..self.model.n_agents)
            .map(|i| self.policy.action_distribution(i, h.local(i)))
            .collect();
        let mut total = 0.0;
        for ja in 0..self.model.n_joint_actions() {
            let actions = self.model.split_joint_action(ja);
            let mut p_a = 1.0;
            for (i, &a) in actions.iter().enumerate() {
                p_a *= dists[i][a];
            }
            if p_a == 0.0 {
                continue;
            }
            total += p_a * self.action_value(key, h, belief, ja)?;
        }
        self.memo.insert(key.clone(), total);
        Ok(total)
    }

    /// Expected immediate reward plus discounted continuation for one joint
    /// action taken at `(h, belief)`.
    fn action_value(
        &mut self,
        key: &mut Vec<(usize, usize)>,
        h: &JointHistory,
        belief: &Belief,
        ja: usize,
    ) -> Result<f64> {
        let model = self.model;
        let mut value = 0.0;
        for (s, &b) in belief.0.iter().enumerate() {
            if b != 0.0 {
                value += b * model.reward(s, ja);
            }
        }
        if h.len() + 1 >= self.horizon || model.discount == 0.0 {
            return Ok(value);
        }
        let actions = model.split_joint_action(ja);
        // Predicted next-state distribution, shared by all observations.
        let mut predicted = alloc::vec![0.0; model.n_states];
        for (s, &b) in belief.0.iter().enumerate() {
            if b == 0.0 {
                continue;
            }
            for &(s_next, p) in model.transition_row(s, ja) {
                predicted[s_next] += b * p;
            }
        }
        for jo in 0..model.n_joint_observations() {
            let mut likelihood = 0.0;
            for (s_next, &pred) in predicted.iter().enumerate() {
                if pred != 0.0 {
                    likelihood += pred * model.observation_prob(ja, s_next, jo);
                }
            }
            if likelihood <= 0.0 {
                continue;
            }
            let posterior = filter_indexed(model, belief, ja, jo)?;
            let obs = model.split_joint_obs(jo);
            let child = h.child(&actions, &obs);
            key.push((ja, jo));
            let v_child = self.value_rec(key, &child, &posterior)?;
            key.pop();
            value += model.discount * likelihood * v_child;
        }
        Ok(value)
    }
}

/// `V^π(start)` for a joint policy.
pub fn exact_policy_value<P: JointPolicy + ?Sized>(
    model: &DecPomdpModel,
    policy: &P,
    start: &JointHistory,
) -> Result<f64> {
    ExactEvaluator::new(model, policy)?.value(start)
}

/// `Q^π(history, joint_action)`.
pub fn exact_q_value<P: JointPolicy + ?Sized>(
    model: &DecPomdpModel,
    policy: &P,
    history: &JointHistory,
    joint_action: &[usize],
) -> Result<f64> {
    ExactEvaluator::new(model, policy)?.q_value(history, joint_action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelBuilder;
    use crate::policy::{JointDeterministicPolicy, JointStochasticPolicy};
    use alloc::vec;

    /// Two-agent one-shot matrix game with payoff rows [[3,1],[1,2]].
    fn m1() -> DecPomdpModel {
        let payoff = [[3.0, 1.0], [1.0, 2.0]];
        let mut b = ModelBuilder::new(1, vec![2, 2], vec![1, 1], Horizon::Finite(1), 1.0);
        b.set_initial_belief(&[1.0]);
        for ja in 0..4 {
            b.set_transition(0, ja, 0, 1.0);
            b.set_observation(ja, 0, 0, 1.0);
        }
        for a0 in 0..2 {
            for a1 in 0..2 {
                let ja = a0 + 2 * a1;
                b.set_reward(0, ja, payoff[a0][a1]);
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn zero_reward_model_values_zero() {
        let mut b = ModelBuilder::new(1, vec![2], vec![1], Horizon::Finite(3), 1.0);
        b.set_initial_belief(&[1.0]);
        for a in 0..2 {
            b.set_transition(0, a, 0, 1.0);
            b.set_observation(a, 0, 0, 1.0);
        }
        let m = b.build().unwrap();
        let p = JointDeterministicPolicy::constant(vec![2], &[1]);
        let v = exact_policy_value(&m, &p, &JointHistory::empty(1)).unwrap();
        assert_eq!(v, 0.0);
        let u = JointStochasticPolicy::uniform(vec![2]);
        let v = exact_policy_value(&m, &u, &JointHistory::empty(1)).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn matrix_game_lookup() {
        let m = m1();
        let p = JointDeterministicPolicy::constant(vec![2, 2], &[0, 0]);
        let v = exact_policy_value(&m, &p, &JointHistory::empty(2)).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn value_is_zero_at_horizon() {
        let m = m1();
        let p = JointDeterministicPolicy::constant(vec![2, 2], &[0, 0]);
        let h = JointHistory::empty(2).child(&[0, 0], &[0, 0]);
        let v = exact_policy_value(&m, &p, &h).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn q_of_policy_action_equals_value() {
        let m = m1();
        for ja in 0..4usize {
            let a = m.split_joint_action(ja);
            let p = JointDeterministicPolicy::constant(vec![2, 2], &a);
            let h = JointHistory::empty(2);
            let v = exact_policy_value(&m, &p, &h).unwrap();
            let q = exact_q_value(&m, &p, &h, &a).unwrap();
            assert!((q - v).abs() < 1e-12, "ja={ja}");
        }
    }

    #[test]
    fn one_shot_q_is_expected_immediate_reward() {
        let m = m1();
        let p = JointDeterministicPolicy::constant(vec![2, 2], &[1, 1]);
        let h = JointHistory::empty(2);
        let q = exact_q_value(&m, &p, &h, &[0, 1]).unwrap();
        assert!((q - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infinite_horizon_is_unsupported() {
        let mut b = ModelBuilder::new(1, vec![1], vec![1], Horizon::Infinite, 0.9);
        b.set_initial_belief(&[1.0]);
        b.set_transition(0, 0, 0, 1.0);
        b.set_observation(0, 0, 0, 1.0);
        let m = b.build().unwrap();
        let p = JointDeterministicPolicy::constant(vec![1], &[0]);
        assert!(matches!(
            exact_policy_value(&m, &p, &JointHistory::empty(1)),
            Err(CoreError::UnsupportedExact)
        ));
    }
}
