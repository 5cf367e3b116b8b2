//! Optimal stopping of Gauss-Markov processes conditioned to hit a
//! prescribed terminal density.
//!
//! The library covers the full pipeline: exact Gaussian laws of the
//! unconditioned process ([`gmp`]), the reduction to a Brownian bridge with a
//! random pinning point ([`timechange`]), terminal-density priors and their
//! posterior pinning laws ([`priors`]), a backward-induction Monte Carlo
//! solver for the value function and stopping region ([`mc`]), Picard
//! solutions of the free-boundary Volterra equations for Gaussian and Dirac
//! priors ([`volterra`]), exact path simulation for validation ([`pathsim`]),
//! and the experiment configuration / output plumbing used by the CLI.

pub mod config;
pub mod curves;
pub mod error;
pub mod gmp;
pub mod io;
pub mod mc;
pub mod normal;
pub mod pathsim;
pub mod priors;
pub mod quad;
pub mod render;
pub mod rng;
pub mod timechange;
pub mod validate;
pub mod volterra;

pub use curves::CoefficientCurve;
pub use error::{Error, Result};
pub use gmp::{GmLaw, GmpModel};
pub use mc::{Boundary, SolveResult, SolverGrid};
pub use priors::{Frame, Posterior, Prior};
pub use timechange::TimeChange;
pub use volterra::{BoundarySolution, GainCase, OuGain};
