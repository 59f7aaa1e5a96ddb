//! MAP-Elites main loop.

use rand::Rng;

use crate::archive::{Archive, NicheIndexer};
use crate::domain::Domain;
use crate::engines::{evaluate_batch, EngineConfig, MetricsRow};
use crate::error::{QdError, Result};
use crate::rng::substream;
use crate::types::Elite;
use crate::variation::VariationConfig;

/// Illuminate `archive` with `domain` evaluations.
///
/// Bootstraps with `init_count` uniform random genomes, then repeatedly
/// draws a batch of children — each recombined from two uniformly random
/// elites and mutated — evaluates them (possibly in parallel) and inserts
/// them in batch-index order. Stops when the evaluation budget is spent;
/// the final batch is truncated so the total matches exactly.
pub fn run_map_elites<I, D>(
    domain: &D,
    mut archive: Archive<I>,
    var: &VariationConfig,
    cfg: &EngineConfig,
) -> Result<(Archive<I>, Vec<MetricsRow>)>
where
    I: NicheIndexer,
    D: Domain + ?Sized,
{
    cfg.validate()?;
    if cfg.init_count as u64 > cfg.budget {
        return Err(QdError::InvalidInput("budget smaller than init_count".into()));
    }
    if domain.descriptor_dim() != archive.indexer().dim() {
        return Err(QdError::DimensionMismatch {
            expected: archive.indexer().dim(),
            actual: domain.descriptor_dim(),
        });
    }

    let mut metrics = Vec::new();
    let mut evals: u64 = 0;

    // Bootstrap.
    let genomes: Vec<_> = (0..cfg.init_count)
        .map(|i| domain.random_genome(&mut substream(cfg.seed, evals + i as u64)))
        .collect();
    let evaluations = evaluate_batch(domain, &genomes)?;
    for (genome, evaluation) in genomes.into_iter().zip(evaluations) {
        archive.try_insert(Elite::new(genome, evaluation))?;
    }
    evals += cfg.init_count as u64;
    metrics.push(snapshot(&archive, domain, evals));

    while evals < cfg.budget {
        let count = (cfg.budget - evals).min(cfg.batch as u64) as usize;
        let parents = archive.filled_niches();

        let genomes: Vec<_> = (0..count)
            .map(|i| {
                let mut rng = substream(cfg.seed, evals + i as u64);
                let a = archive
                    .get(parents[rng.random_range(0..parents.len())])
                    .expect("filled niche");
                let b = archive
                    .get(parents[rng.random_range(0..parents.len())])
                    .expect("filled niche");
                domain.vary(&a.genome, &b.genome, var, &mut rng)
            })
            .collect::<Result<_>>()?;

        let evaluations = evaluate_batch(domain, &genomes)?;
        for (genome, evaluation) in genomes.into_iter().zip(evaluations) {
            archive.try_insert(Elite::new(genome, evaluation))?;
        }
        evals += count as u64;
        metrics.push(snapshot(&archive, domain, evals));
    }

    Ok((archive, metrics))
}

fn snapshot<I: NicheIndexer, D: Domain + ?Sized>(
    archive: &Archive<I>,
    domain: &D,
    evals: u64,
) -> MetricsRow {
    let m = archive.metrics(domain.fitness_bounds());
    MetricsRow {
        evals,
        coverage: m.coverage,
        qd_score: m.qd_score,
        best_fitness: archive.best().map(|(_, e)| e.fitness()).unwrap_or(f64::NEG_INFINITY),
    }
}
