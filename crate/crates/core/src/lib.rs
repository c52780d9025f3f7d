//! Competitive influence maximization under unknown edge probabilities.
//!
//! Two items spread through a directed graph under the competitive
//! independent cascade: every edge has a single live/blocked coin shared by
//! both items, and a node reached by both in the same step adopts the item
//! favoured by the tie rule. The crate provides the diffusion engine, exact
//! and sampled spread evaluation, offline seed-selection oracles (including
//! the interval-constrained variants needed because spread is not monotone
//! in the edge probabilities), and the online learners built on them.
//!
//! The crate is `no_std` with `alloc`; file formats and the experiment
//! driver live in the companion `ocim` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bandits;
pub mod diffusion;
pub mod error;
pub mod graph;
pub mod oracles;
pub mod probs;
pub mod spread;

pub use diffusion::{propagate, Action, Cascade, Item, LiveEdgeMask, PropagationOutcome, TieRule};
pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, NodeId};
pub use oracles::{OfuOracle, OracleParams, OracleResult};
pub use probs::{IntervalVector, ProbVector};
pub use spread::{Evaluation, SpreadEstimate, SpreadEvaluator};
