//! Tabular concave-utility reinforcement learning (CURL) treated as a
//! potential mean-field game.
//!
//! The crate is organised bottom-up:
//!
//! - [`mdp`]: exact occupancy measures, policy evaluation and best responses.
//! - [`objectives`]: concave utilities `F(μ)` with analytic gradients.
//! - [`mfg`]: the potential game whose reward is `∇F(μ)`, exploitability and
//!   monotonicity probing.
//! - [`solvers`]: Fictitious Play / Frank-Wolfe, the mixture formulation,
//!   Online Mirror Descent and a pairwise Frank-Wolfe refiner.
//! - [`envs`]: grid worlds (JSON grid specs) and seeded random MDPs.
//! - [`experiment`]: config-driven experiment runs writing CSV/PGM/JSON.
//!
//! Batch work (exploitability along traces, probes, sweeps) goes through
//! [`parallel`], which uses rayon when the `parallel` feature is enabled.

pub mod bounds;
pub mod envs;
pub mod error;
pub mod experiment;
pub mod mdp;
pub mod mfg;
pub mod objectives;
pub mod parallel;
pub mod solvers;

pub use error::{Error, Result};
pub use mdp::{BestResponse, OccupancyMeasure, Policy, QFunction, TabularMdp};
pub use mfg::PotentialMfg;
pub use objectives::{ConcaveObjective, Objective, ObjectiveKind};
pub use parallel::ExecMode;

/// Dense state-action table, one row per state and one column per action.
pub type Table = nalgebra::DMatrix<f64>;

/// Dense per-state vector.
pub type StateVector = nalgebra::DVector<f64>;
