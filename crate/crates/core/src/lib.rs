//! Exact combinatorics and simulation for single-peaked elections.
//!
//! The crate recognizes single-peaked elections, tests containment of
//! forbidden configurations and permutation patterns, evaluates exact counts
//! and probability bounds for single-peakedness under the Impartial Culture,
//! Impartial Anonymous Culture, Pólya urn and Mallows models, samples
//! elections from those models, and cross-checks everything against
//! brute-force enumeration.

pub mod cli;
pub mod configurations;
pub mod counting;
pub mod decimal;
pub mod error;
pub mod estimate;
pub mod io;
pub mod oracle;
pub mod patterns;
pub mod recognition;
pub mod sampling;
pub mod tables;
pub mod vote;

pub use error::{Error, Result};
pub use recognition::{recognize_exhaustive, recognize_fast, Axis};
pub use vote::{Candidate, Election, MultisetElection, Permutation, Vote};
