//! Built-in environments behind a single reset/step interface.
//!
//! Every environment is constructed as a full [`DecPomdpModel`], so the
//! exact evaluation, belief filtering and brute-force oracles apply to all
//! of them, and simulated trajectories can be replayed against the tables.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::model::{DecPomdpModel, Horizon, ModelBuilder};
use crate::rng::Stream;
use crate::Result;

/// A running episode over a tabular model.
///
/// Rewards accumulate discounted by the model's discount factor, so the
/// episode return is directly comparable with exact policy values.
#[derive(Debug, Clone)]
pub struct EnvInstance {
    model: DecPomdpModel,
    state: usize,
    timestep: usize,
    episode_return: f64,
    discount_acc: f64,
    started: bool,
}

impl EnvInstance {
    pub fn new(model: DecPomdpModel) -> Self {
        EnvInstance {
            model,
            state: 0,
            timestep: 0,
            episode_return: 0.0,
            discount_acc: 1.0,
            started: false,
        }
    }

    pub fn model(&self) -> &DecPomdpModel {
        &self.model
    }

    pub fn state(&self) -> usize {
        self.state
    }

    pub fn timestep(&self) -> usize {
        self.timestep
    }

    pub fn episode_return(&self) -> f64 {
        self.episode_return
    }

    pub fn done(&self) -> bool {
        match self.model.horizon {
            Horizon::Finite(h) => self.started && self.timestep >= h,
            Horizon::Infinite => false,
        }
    }

    /// Start an episode. Agents have observed nothing yet, so the per-agent
    /// observation list is all `None`.
    pub fn reset(&mut self, stream: &mut Stream) -> Vec<Option<usize>> {
        self.state = self.model.sample_initial_state(stream);
        self.timestep = 0;
        self.episode_return = 0.0;
        self.discount_acc = 1.0;
        self.started = true;
        vec![None; self.model.n_agents]
    }

    /// Advance one step: returns `(per-agent observations, reward, done)`.
    pub fn step(
        &mut self,
        joint_action: &[usize],
        stream: &mut Stream,
    ) -> Result<(Vec<usize>, f64, bool)> {
        if !self.started || self.done() {
            return Err(CoreError::Lifecycle);
        }
        let (next, obs, reward) = self.model.sample_step(self.state, joint_action, stream)?;
        self.state = next;
        self.episode_return += self.discount_acc * reward;
        self.discount_acc *= self.model.discount;
        self.timestep += 1;
        Ok((obs, reward, self.done()))
    }
}

/// A two-agent cooperative matrix game, optionally repeated for several
/// stages with an uninformative observation per agent.
#[derive(Debug, Clone)]
pub struct MatrixGameSpec {
    /// `payoff[a0][a1]`.
    pub payoff: Vec<Vec<f64>>,
    pub repeats: usize,
}

impl MatrixGameSpec {
    pub fn one_shot(payoff: Vec<Vec<f64>>) -> Self {
        MatrixGameSpec { payoff, repeats: 1 }
    }
}

/// Build the tabular model of a matrix game: a stage-counter state chain,
/// one dummy observation per agent, and `R(s, a) = payoff(a)` at every
/// stage.
pub fn make_matrix_game(spec: &MatrixGameSpec) -> Result<DecPomdpModel> {
    if spec.repeats == 0 {
        return Err(CoreError::Spec(String::from("repeats must be at least 1")));
    }
    let n0 = spec.payoff.len();
    if n0 == 0 {
        return Err(CoreError::Spec(String::from("payoff table is empty")));
    }
    let n1 = spec.payoff[0].len();
    if n1 == 0 || spec.payoff.iter().any(|row| row.len() != n1) {
        return Err(CoreError::Spec(String::from(
            "payoff table must be rectangular and complete",
        )));
    }
    let n_states = spec.repeats;
    let mut b = ModelBuilder::new(
        n_states,
        vec![n0, n1],
        vec![1, 1],
        Horizon::Finite(spec.repeats),
        1.0,
    );
    let mut belief = vec![0.0; n_states];
    belief[0] = 1.0;
    b.set_initial_belief(&belief);
    for s in 0..n_states {
        let next = (s + 1).min(n_states - 1);
        for a0 in 0..n0 {
            for a1 in 0..n1 {
                let ja = a0 + n0 * a1;
                b.set_transition(s, ja, next, 1.0);
                b.set_reward(s, ja, spec.payoff[a0][a1]);
            }
        }
    }
    for ja in 0..n0 * n1 {
        for s in 0..n_states {
            b.set_observation(ja, s, 0, 1.0);
        }
    }
    b.build()
}

/// Two agents, a tiger behind one of two doors.
///
/// Actions per agent: 0 = open left, 1 = open right, 2 = listen. States:
/// 0 = tiger left, 1 = tiger right. Observations: 0 = hear left, 1 = hear
/// right.
///
/// While both agents listen the state is unchanged and each agent hears the
/// tiger's side independently with probability `listen_accuracy`. As soon as
/// any door opens the tiger is re-placed uniformly and all observations that
/// step are uninformative coin flips.
///
/// Rewards: every listener pays `listen_cost`; door outcomes add
/// `both_open_correct` when all openers picked the tiger-free door,
/// `open_wrong` when all openers picked the tiger's door, and `mixed_open`
/// when the two agents opened different doors.
#[derive(Debug, Clone)]
pub struct DecTigerSpec {
    pub listen_accuracy: f64,
    pub listen_cost: f64,
    pub both_open_correct: f64,
    pub open_wrong: f64,
    pub mixed_open: f64,
    pub horizon: usize,
}

impl Default for DecTigerSpec {
    fn default() -> Self {
        DecTigerSpec {
            listen_accuracy: 0.85,
            listen_cost: -2.0,
            both_open_correct: 20.0,
            open_wrong: -100.0,
            mixed_open: -50.0,
            horizon: 3,
        }
    }
}

pub const TIGER_OPEN_LEFT: usize = 0;
pub const TIGER_OPEN_RIGHT: usize = 1;
pub const TIGER_LISTEN: usize = 2;

pub fn make_dec_tiger(spec: &DecTigerSpec) -> Result<DecPomdpModel> {
    if !(spec.listen_accuracy > 0.5 && spec.listen_accuracy <= 1.0) {
        return Err(CoreError::Spec(format!(
            "listen accuracy {} outside (0.5, 1]",
            spec.listen_accuracy
        )));
    }
    if spec.horizon == 0 {
        return Err(CoreError::Spec(String::from("horizon must be positive")));
    }
    let mut b = ModelBuilder::new(
        2,
        vec![3, 3],
        vec![2, 2],
        Horizon::Finite(spec.horizon),
        1.0,
    );
    b.set_initial_belief(&[0.5, 0.5]);
    let acc = spec.listen_accuracy;
    for s in 0..2usize {
        for a0 in 0..3usize {
            for a1 in 0..3usize {
                let ja = a0 + 3 * a1;
                let both_listen = a0 == TIGER_LISTEN && a1 == TIGER_LISTEN;
                if both_listen {
                    b.set_transition(s, ja, s, 1.0);
                } else {
                    b.set_transition(s, ja, 0, 0.5);
                    b.set_transition(s, ja, 1, 0.5);
                }
                b.set_reward(s, ja, tiger_reward(spec, s, a0, a1));
            }
        }
    }
    for a0 in 0..3usize {
        for a1 in 0..3usize {
            let ja = a0 + 3 * a1;
            let both_listen = a0 == TIGER_LISTEN && a1 == TIGER_LISTEN;
            for s_next in 0..2usize {
                for o0 in 0..2usize {
                    for o1 in 0..2usize {
                        let jo = o0 + 2 * o1;
                        let p = if both_listen {
                            let p0 = if o0 == s_next { acc } else { 1.0 - acc };
                            let p1 = if o1 == s_next { acc } else { 1.0 - acc };
                            p0 * p1
                        } else {
                            0.25
                        };
                        if p > 0.0 {
                            b.set_observation(ja, s_next, jo, p);
                        }
                    }
                }
            }
        }
    }
    b.build()
}

fn tiger_reward(spec: &DecTigerSpec, state: usize, a0: usize, a1: usize) -> f64 {
    let mut r = 0.0;
    let mut doors: Vec<usize> = Vec::with_capacity(2);
    for a in [a0, a1] {
        if a == TIGER_LISTEN {
            r += spec.listen_cost;
        } else {
            doors.push(a);
        }
    }
    match doors.as_slice() {
        [] => {}
        [d] => {
            // The tiger sits behind door `state`; opening it is the bad case.
            r += if *d == state {
                spec.open_wrong
            } else {
                spec.both_open_correct
            };
        }
        [d0, d1] => {
            if d0 != d1 {
                r += spec.mixed_open;
            } else if *d0 == state {
                r += spec.open_wrong;
            } else {
                r += spec.both_open_correct;
            }
        }
        _ => unreachable!(),
    }
    r
}

/// Cooperative grid rendezvous. Agents move in a `width x height` grid
/// (actions: up, down, left, right, stay) with deterministic motion clipped
/// at the walls; the team is rewarded 1 whenever every agent's *next*
/// position is the target cell (the far corner). Each agent observes its own
/// cell plus the number of other agents within Chebyshev distance
/// `obs_radius`, so positions of distant teammates stay hidden.
#[derive(Debug, Clone)]
pub struct GridCaptureSpec {
    pub width: usize,
    pub height: usize,
    pub n_agents: usize,
    pub obs_radius: usize,
    pub horizon: usize,
}

pub const GRID_STATE_BUDGET: usize = 100_000;

const GRID_MOVES: [(isize, isize); 5] = [(0, -1), (0, 1), (-1, 0), (1, 0), (0, 0)];

pub fn make_grid_capture(spec: &GridCaptureSpec) -> Result<DecPomdpModel> {
    if spec.width == 0 || spec.height == 0 || spec.n_agents == 0 || spec.horizon == 0 {
        return Err(CoreError::Spec(String::from(
            "grid dimensions, agent count and horizon must be positive",
        )));
    }
    let cells = spec.width * spec.height;
    let mut n_states: usize = 1;
    for _ in 0..spec.n_agents {
        n_states = n_states.checked_mul(cells).unwrap_or(usize::MAX);
        if n_states > GRID_STATE_BUDGET {
            return Err(CoreError::Spec(format!(
                "joint state space exceeds the {GRID_STATE_BUDGET} budget"
            )));
        }
    }
    let n_agents = spec.n_agents;
    let n_obs_per_agent = cells * n_agents;
    let mut b = ModelBuilder::new(
        n_states,
        vec![5; n_agents],
        vec![n_obs_per_agent; n_agents],
        Horizon::Finite(spec.horizon),
        1.0,
    );
    let mut belief = vec![0.0; n_states];
    belief[0] = 1.0; // all agents start in cell 0
    b.set_initial_belief(&belief);

    let target = cells - 1;
    let positions = |mut state: usize| -> Vec<usize> {
        let mut pos = Vec::with_capacity(n_agents);
        for _ in 0..n_agents {
            pos.push(state % cells);
            state /= cells;
        }
        pos
    };
    let pack = |pos: &[usize]| -> usize {
        let mut state = 0;
        for i in (0..n_agents).rev() {
            state = state * cells + pos[i];
        }
        state
    };
    let step_cell = |cell: usize, action: usize| -> usize {
        let x = (cell % spec.width) as isize;
        let y = (cell / spec.width) as isize;
        let (dx, dy) = GRID_MOVES[action];
        let nx = (x + dx).clamp(0, spec.width as isize - 1);
        let ny = (y + dy).clamp(0, spec.height as isize - 1);
        ny as usize * spec.width + nx as usize
    };

    let n_joint_actions: usize = 5usize.pow(n_agents as u32);
    for s in 0..n_states {
        let pos = positions(s);
        for ja in 0..n_joint_actions {
            let mut a = ja;
            let mut next_pos = Vec::with_capacity(n_agents);
            for p in pos.iter().take(n_agents) {
                next_pos.push(step_cell(*p, a % 5));
                a /= 5;
            }
            let s_next = pack(&next_pos);
            b.set_transition(s, ja, s_next, 1.0);
            let captured = next_pos.iter().all(|&c| c == target);
            b.set_reward(s, ja, if captured { 1.0 } else { 0.0 });
        }
    }
    // Observations depend only on the next state: own cell and the count of
    // other agents within the radius.
    for ja in 0..n_joint_actions {
        for s_next in 0..n_states {
            let pos = positions(s_next);
            let mut obs = Vec::with_capacity(n_agents);
            for i in 0..n_agents {
                let (xi, yi) = (pos[i] % spec.width, pos[i] / spec.width);
                let mut near = 0usize;
                for (j, pj) in pos.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let (xj, yj) = (pj % spec.width, pj / spec.width);
                    let d = xi.abs_diff(xj).max(yi.abs_diff(yj));
                    if d <= spec.obs_radius {
                        near += 1;
                    }
                }
                obs.push(pos[i] * n_agents + near);
            }
            let mut jo = 0;
            for i in (0..n_agents).rev() {
                jo = jo * n_obs_per_agent + obs[i];
            }
            b.set_observation(ja, s_next, jo, 1.0);
        }
    }
    b.build()
}

/// Registry of built-in environments usable by name.
pub fn builtin_names() -> &'static [&'static str] {
    &[
        "m1",
        "m2",
        "zero",
        "dec-tiger",
        "dec-tiger-h2",
        "grid-1x1",
        "grid-2x1",
        "grid-2x2",
    ]
}

/// Build a built-in environment model by name.
pub fn builtin(name: &str) -> Result<DecPomdpModel> {
    match name {
        "m1" => make_matrix_game(&MatrixGameSpec::one_shot(vec![
            vec![3.0, 1.0],
            vec![1.0, 2.0],
        ])),
        "m2" => make_matrix_game(&MatrixGameSpec::one_shot(vec![
            vec![8.0, -12.0],
            vec![-12.0, 0.0],
        ])),
        "zero" => make_matrix_game(&MatrixGameSpec::one_shot(vec![
            vec![0.0, 0.0],
            vec![0.0, 0.0],
        ])),
        "dec-tiger" => make_dec_tiger(&DecTigerSpec::default()),
        "dec-tiger-h2" => make_dec_tiger(&DecTigerSpec {
            horizon: 2,
            ..DecTigerSpec::default()
        }),
        "grid-1x1" => make_grid_capture(&GridCaptureSpec {
            width: 1,
            height: 1,
            n_agents: 1,
            obs_radius: 0,
            horizon: 3,
        }),
        "grid-2x1" => make_grid_capture(&GridCaptureSpec {
            width: 2,
            height: 1,
            n_agents: 1,
            obs_radius: 0,
            horizon: 2,
        }),
        "grid-2x2" => make_grid_capture(&GridCaptureSpec {
            width: 2,
            height: 2,
            n_agents: 2,
            obs_radius: 1,
            horizon: 3,
        }),
        other => Err(CoreError::Spec(format!("unknown environment `{other}`"))),
    }
}
