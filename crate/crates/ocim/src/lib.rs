//! File formats, configuration and the regret-experiment driver for
//! online competitive influence maximization, on top of `ocim-core`.

pub mod config;
pub mod edge_list;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod trace;
pub mod verify;

pub use error::{Error, Result};
