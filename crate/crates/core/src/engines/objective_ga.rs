//! Elitist objective-based GA baseline.

use crate::domain::Domain;
use crate::engines::{evaluate_batch, tournament, EngineConfig, MetricsRow};
use crate::error::{QdError, Result};
use crate::rng::substream;
use crate::types::{Elite, Evaluation, Genome};
use crate::variation::VariationConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub pop_size: usize,
    pub tournament_size: usize,
    /// Survivors copied unchanged into the next generation.
    pub elite_keep: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig { pop_size: 200, tournament_size: 3, elite_keep: 10 }
    }
}

/// (mu + lambda) GA: keep the `elite_keep` best, refill the population by
/// fitness tournaments plus variation. Returns the best-ever elite and the
/// per-generation metrics log.
pub fn run_objective_ga<D: Domain + ?Sized>(
    domain: &D,
    ga: &GaConfig,
    var: &VariationConfig,
    cfg: &EngineConfig,
) -> Result<(Elite, Vec<MetricsRow>)> {
    if ga.pop_size == 0 || ga.tournament_size == 0 {
        return Err(QdError::InvalidInput("pop_size and tournament_size must be >= 1".into()));
    }
    if ga.elite_keep >= ga.pop_size {
        return Err(QdError::InvalidInput("elite_keep must be < pop_size".into()));
    }
    if cfg.budget == 0 {
        return Err(QdError::InvalidInput("budget must be >= 1".into()));
    }

    let mut metrics = Vec::new();
    let mut evals: u64 = 0;
    let mut best: Option<Elite> = None;

    let count = cfg.budget.min(ga.pop_size as u64) as usize;
    let genomes: Vec<_> = (0..count)
        .map(|i| domain.random_genome(&mut substream(cfg.seed, evals + i as u64)))
        .collect();
    let evaluations = evaluate_batch(domain, &genomes)?;
    evals += count as u64;
    let mut population: Vec<(Genome, Evaluation)> =
        genomes.into_iter().zip(evaluations).collect();
    track_best(&population, &mut best);
    metrics.push(row(evals, &best));

    while evals < cfg.budget {
        let children = (ga.pop_size - ga.elite_keep) as u64;
        let count = (cfg.budget - evals).min(children) as usize;
        let fitnesses: Vec<f64> = population.iter().map(|(_, e)| e.fitness).collect();

        let genomes: Vec<_> = (0..count)
            .map(|i| {
                let mut rng = substream(cfg.seed, evals + i as u64);
                let a = tournament(&fitnesses, ga.tournament_size, &mut rng);
                let b = tournament(&fitnesses, ga.tournament_size, &mut rng);
                domain.vary(&population[a].0, &population[b].0, var, &mut rng)
            })
            .collect::<Result<_>>()?;
        let evaluations = evaluate_batch(domain, &genomes)?;
        evals += count as u64;

        // Survivors: the elite_keep best of the current population (ties
        // resolved by the lower index), then the fresh children.
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| fitnesses[b].total_cmp(&fitnesses[a]).then(a.cmp(&b)));
        let mut next: Vec<(Genome, Evaluation)> = order
            .into_iter()
            .take(ga.elite_keep)
            .map(|i| population[i].clone())
            .collect();
        next.extend(genomes.into_iter().zip(evaluations));
        population = next;
        track_best(&population, &mut best);
        metrics.push(row(evals, &best));
    }

    Ok((best.expect("budget >= 1"), metrics))
}

fn track_best(population: &[(Genome, Evaluation)], best: &mut Option<Elite>) {
    for (genome, evaluation) in population {
        match best {
            Some(b) if evaluation.fitness <= b.fitness() => {}
            _ => *best = Some(Elite::new(genome.clone(), evaluation.clone())),
        }
    }
}

fn row(evals: u64, best: &Option<Elite>) -> MetricsRow {
    MetricsRow {
        evals,
        coverage: 0.0,
        qd_score: 0.0,
        best_fitness: best.as_ref().map(|b| b.fitness()).unwrap_or(f64::NEG_INFINITY),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::SphereDomain;

    fn engine(budget: u64, seed: u64) -> EngineConfig {
        EngineConfig { budget, batch: 1, init_count: 1, seed }
    }

    #[test]
    fn init_only_budget_returns_best_of_random() {
        let domain = SphereDomain::new(4).unwrap();
        let ga = GaConfig { pop_size: 30, ..Default::default() };
        let (best, metrics) =
            run_objective_ga(&domain, &ga, &VariationConfig::default(), &engine(30, 3)).unwrap();
        assert_eq!(metrics.len(), 1);
        assert_eq!(metrics[0].evals, 30);
        assert_eq!(metrics[0].best_fitness, best.fitness());
    }

    #[test]
    fn converges_on_the_sphere() {
        let domain = SphereDomain::new(10).unwrap();
        let ga = GaConfig::default();
        let (best, _) =
            run_objective_ga(&domain, &ga, &VariationConfig::default(), &engine(20_000, 1))
                .unwrap();
        assert!(best.fitness() > -1e-3, "best fitness {}", best.fitness());
    }

    #[test]
    fn best_log_is_monotone() {
        let domain = SphereDomain::new(6).unwrap();
        let ga = GaConfig { pop_size: 40, elite_keep: 4, ..Default::default() };
        let (_, metrics) =
            run_objective_ga(&domain, &ga, &VariationConfig::default(), &engine(2_000, 12))
                .unwrap();
        assert_eq!(metrics.last().unwrap().evals, 2_000);
        for pair in metrics.windows(2) {
            assert!(pair[1].best_fitness >= pair[0].best_fitness);
        }
    }

    #[test]
    fn elite_keep_must_be_small() {
        let domain = SphereDomain::new(4).unwrap();
        let ga = GaConfig { pop_size: 5, elite_keep: 5, ..Default::default() };
        assert!(
            run_objective_ga(&domain, &ga, &VariationConfig::default(), &engine(100, 0)).is_err()
        );
    }
}
