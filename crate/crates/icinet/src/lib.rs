//! Bayesian reconstruction of interdependent critical infrastructure networks
//! from cascading-failure observations.
//!
//! The pipeline has four stages, each with its own module:
//!
//! 1. [`network`] — the structural model: blocks (one per infrastructure
//!    system), supply/transmission/demand levels, declared interdependencies,
//!    the feasible edge set they induce, and the structural constraints a
//!    physically plausible topology must satisfy.
//! 2. [`synth`] — synthetic ground-truth generation: a minimal valid backbone
//!    plus density-controlled extra edges, used to benchmark reconstruction.
//! 3. [`cascade`] — a discrete-time stochastic failure-propagation model that
//!    simulates observation datasets on a known topology.
//! 4. [`inference`] + [`evaluation`] — Metropolis-Hastings sampling over the
//!    constrained topology space given observed cascades, and the precision /
//!    recall machinery that scores the recovered edge marginals against a
//!    known ground truth.
//!
//! Everything is deterministic for a fixed seed: a master seed is split into
//! named sub-streams (see [`seed`]) so generation, simulation, and sampling
//! draw from independent, reproducible generators.

pub mod cascade;
pub mod evaluation;
pub mod inference;
pub mod network;
pub mod seed;
pub mod synth;

mod error;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
