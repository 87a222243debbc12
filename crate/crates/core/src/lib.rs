//! Cooperative multi-agent reinforcement learning on tabular Dec-POMDP models.
//!
//! The crate has three layers:
//!
//! - **Ground truth**: [`model::DecPomdpModel`] holds the full tabular
//!   dynamics of a decentralized partially observable problem, with exact
//!   policy evaluation ([`exact`]), belief filtering ([`belief`]) and
//!   brute-force optimal policy search ([`search`]) serving as oracles for
//!   everything learned.
//! - **Differentiation**: a small reverse-mode engine ([`graph`]) with dense
//!   tensors, MLP / gated-recurrent / hypernetwork building blocks ([`nn`]),
//!   SGD and Adam ([`optim`]), and a finite-difference checker
//!   ([`gradcheck`]).
//! - **Learning**: value-factorization methods (VDN, QMIX, Weighted QMIX,
//!   QTRAN, QPLEX) in [`factorization`], and centralized-critic actor-critic
//!   methods (IACC, IA2CC, COMA, MAPPO, IPPO, and a small deterministic
//!   continuous-action variant) in [`actor_critic`].
//!
//! Training always happens with centralized information, but every learned
//! policy executes decentrally: action selection reads only per-agent local
//! histories. All randomness flows through the splittable counter-based
//! streams in [`rng`], so runs are bit-reproducible given a seed.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI live in
//! the companion `ctde-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod actor_critic;
pub mod belief;
pub mod buffer;
pub mod checkpoint;
pub mod envs;
pub mod error;
pub mod evalpol;
pub mod exact;
pub mod factorization;
pub mod gradcheck;
pub mod graph;
pub mod history;
pub mod math;
pub mod model;
pub mod nn;
pub mod optim;
pub mod policy;
pub mod rng;
pub mod search;

pub use error::CoreError;

/// Result alias used across the crate.
pub type Result<T> = core::result::Result<T, CoreError>;
