//! Library side of the experiment CLI: configuration parsing, archive and
//! metrics persistence, and heatmap emission. The `qd` binary is a thin
//! wrapper over these modules.

pub mod config;
pub mod heatmap;
pub mod persist;
pub mod runner;
