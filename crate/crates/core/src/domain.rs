//! The problem interface consumed by every engine.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::types::{Evaluation, Genome};
use crate::variation::{iso_line, mutate_gaussian, VariationConfig};

/// What kind of genome a domain searches over.
#[derive(Debug, Clone, PartialEq)]
pub enum GenomeSpec {
    /// Bounded real vector with per-gene bounds.
    RealVector { bounds: Vec<(f64, f64)> },
    /// Function-composition graph; varied by the domain itself.
    Cppn,
}

/// A benchmark problem: genome spec, evaluation, and the declared descriptor
/// and fitness bounds. Evaluations must be pure so batches can run in
/// parallel.
pub trait Domain: Sync {
    fn name(&self) -> &str;

    fn genome_spec(&self) -> GenomeSpec;

    fn descriptor_dim(&self) -> usize;

    /// Per-dimension descriptor bounds; every evaluation's descriptor lies
    /// inside them.
    fn descriptor_bounds(&self) -> Vec<(f64, f64)>;

    /// Declared `(f_min, f_max)`; every evaluation's fitness lies inside.
    fn fitness_bounds(&self) -> (f64, f64);

    fn random_genome(&self, rng: &mut ChaCha8Rng) -> Genome;

    /// Produce one child from two parents. Real-vector domains recombine
    /// with iso+line and then mutate; graph domains mutate the first parent.
    fn vary(
        &self,
        a: &Genome,
        b: &Genome,
        cfg: &VariationConfig,
        rng: &mut ChaCha8Rng,
    ) -> Result<Genome>;

    fn evaluate(&self, genome: &Genome) -> Result<Evaluation>;
}

/// Uniform random genome inside per-gene bounds.
pub fn random_real(bounds: &[(f64, f64)], rng: &mut ChaCha8Rng) -> Vec<f64> {
    bounds.iter().map(|&(lo, hi)| rng.random_range(lo..hi)).collect()
}

/// The default real-vector child pipeline: iso+line recombination followed
/// by bounded Gaussian mutation.
pub fn vary_real(
    bounds: &[(f64, f64)],
    a: &[f64],
    b: &[f64],
    cfg: &VariationConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let blended = iso_line(a, b, bounds, cfg, rng)?;
    mutate_gaussian(&blended, bounds, cfg, rng)
}
