//! Bayesian Battle of Sexes played over classical (factorizable) and EPR
//! (possibly non-factorizable) probability sets.
//!
//! - [`probset`]: the 16-entry behavior sets, their constraints, the
//!   independent-octet parametrization and CHSH classification.
//! - [`quantum_source`]: behavior sets generated from a two-qubit pure state
//!   measured along planar directions.
//! - [`game`]: the game data, payoff tables and payoff functions.
//! - [`equilibrium`]: classical pure/mixed equilibria, the EPR equilibrium and
//!   a brute-force best-response oracle.
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod probset;
pub mod quantum_source;

pub use error::{Error, Result};

/// Global tolerance for every constraint and equality check.
pub const TAU: f64 = 1e-9;
