//! Search loops: MAP-Elites, novelty search (with optional local
//! competition), and an elitist objective GA.
//!
//! All engines share the same determinism scheme: candidates receive
//! sequential global counters, each counter keys an independent random
//! substream, and evaluations may run in parallel while selection and
//! insertion stay sequential. Total evaluations always equal the budget
//! exactly; the last generation is truncated to fit.

mod map_elites;
mod novelty_search;
mod objective_ga;

pub use map_elites::run_map_elites;
pub use novelty_search::{run_novelty_search, NsConfig, NsResult};
pub use objective_ga::{run_objective_ga, GaConfig};

use rayon::prelude::*;

use crate::domain::Domain;
use crate::error::{QdError, Result};
use crate::types::{Evaluation, Genome};

/// Evaluation budget and bootstrap size for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    /// Total number of evaluations.
    pub budget: u64,
    /// Candidates per generation.
    pub batch: usize,
    /// Random bootstrap evaluations (MAP-Elites only; population engines
    /// bootstrap with one full population).
    pub init_count: usize,
    pub seed: u64,
}

impl EngineConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.batch == 0 {
            return Err(QdError::InvalidInput("batch must be >= 1".into()));
        }
        if self.init_count == 0 {
            return Err(QdError::InvalidInput("init_count must be >= 1".into()));
        }
        if self.budget > 0 && self.init_count as u64 > self.budget {
            return Err(QdError::InvalidInput(format!(
                "init_count = {} exceeds budget = {}",
                self.init_count, self.budget
            )));
        }
        Ok(())
    }
}

/// One metrics snapshot per generation.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    /// Evaluations consumed so far; strictly increasing across rows.
    pub evals: u64,
    /// Archive coverage for niche archives; archive size for novelty runs;
    /// 0 for the plain GA.
    pub coverage: f64,
    /// Archive QD-score (0 for the plain GA).
    pub qd_score: f64,
    /// Best fitness seen so far.
    pub best_fitness: f64,
}

/// Evaluate a batch in parallel; output order matches input order, so the
/// result is independent of the worker count.
pub(crate) fn evaluate_batch<D: Domain + ?Sized>(
    domain: &D,
    genomes: &[Genome],
) -> Result<Vec<Evaluation>> {
    genomes.par_iter().map(|g| domain.evaluate(g)).collect()
}

/// Tournament winner over `scores`: highest score among `size` uniform
/// draws, ties won by the lowest candidate index.
pub(crate) fn tournament(
    scores: &[f64],
    size: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> usize {
    use rand::Rng;
    debug_assert!(!scores.is_empty());
    let mut winner = rng.random_range(0..scores.len());
    for _ in 1..size {
        let c = rng.random_range(0..scores.len());
        if scores[c] > scores[winner] || (scores[c] == scores[winner] && c < winner) {
            winner = c;
        }
    }
    winner
}
