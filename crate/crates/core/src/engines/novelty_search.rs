//! Novelty search with optional local competition.

use rayon::prelude::*;

use crate::domain::Domain;
use crate::engines::{evaluate_batch, tournament, EngineConfig, MetricsRow};
use crate::error::{QdError, Result};
use crate::novelty::{novelty_score, NoveltyArchive};
use crate::rng::substream;
use crate::types::{Elite, Evaluation, Genome};
use crate::variation::VariationConfig;

/// Novelty-search parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct NsConfig {
    pub pop_size: usize,
    /// Neighbor count for novelty and local-competition scoring.
    pub k: usize,
    /// Archive admission threshold.
    pub rho: f64,
    /// Blend rank-normalized novelty with local outperformance instead of
    /// selecting on raw novelty.
    pub local_competition: bool,
    /// Weight of novelty in the blend, in `[0, 1]`.
    pub blend_weight: f64,
    pub tournament_size: usize,
}

impl Default for NsConfig {
    fn default() -> Self {
        NsConfig {
            pop_size: 200,
            k: 15,
            rho: 0.03,
            local_competition: false,
            blend_weight: 0.5,
            tournament_size: 3,
        }
    }
}

impl NsConfig {
    fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(QdError::InvalidInput("pop_size must be >= 2".into()));
        }
        if self.k == 0 {
            return Err(QdError::InvalidInput("k must be >= 1".into()));
        }
        if !self.rho.is_finite() || self.rho <= 0.0 {
            return Err(QdError::InvalidInput("rho must be > 0".into()));
        }
        if !(0.0..=1.0).contains(&self.blend_weight) {
            return Err(QdError::InvalidInput("blend_weight must be in [0, 1]".into()));
        }
        if self.tournament_size == 0 {
            return Err(QdError::InvalidInput("tournament_size must be >= 1".into()));
        }
        Ok(())
    }
}

pub struct NsResult {
    pub archive: NoveltyArchive,
    /// Best-ever individual by raw fitness, tracked independently of the
    /// novelty-driven selection.
    pub best: Elite,
    pub metrics: Vec<MetricsRow>,
}

/// Run novelty search on `domain`.
///
/// Each generation evaluates a full population, scores every individual's
/// novelty against the archive plus the rest of the population, offers
/// every individual to the archive, and breeds the next population by
/// tournament selection on the novelty score (or the NSLC blend).
pub fn run_novelty_search<D: Domain + ?Sized>(
    domain: &D,
    ns: &NsConfig,
    var: &VariationConfig,
    cfg: &EngineConfig,
) -> Result<NsResult> {
    ns.validate()?;
    if cfg.budget == 0 {
        return Err(QdError::InvalidInput("budget must be >= 1".into()));
    }

    let mut archive = NoveltyArchive::new(ns.rho, ns.k)?;
    let mut metrics = Vec::new();
    let mut best: Option<Elite> = None;
    let mut evals: u64 = 0;

    let count = (cfg.budget - evals).min(ns.pop_size as u64) as usize;
    let genomes: Vec<_> = (0..count)
        .map(|i| domain.random_genome(&mut substream(cfg.seed, evals + i as u64)))
        .collect();
    let evaluations = evaluate_batch(domain, &genomes)?;
    evals += count as u64;
    let mut population: Vec<(Genome, Evaluation)> =
        genomes.into_iter().zip(evaluations).collect();
    let mut scores = process_generation(&population, &mut archive, &mut best, ns)?;
    metrics.push(snapshot(&archive, domain, evals, &best));

    while evals < cfg.budget {
        let count = (cfg.budget - evals).min(ns.pop_size as u64) as usize;
        let genomes: Vec<_> = (0..count)
            .map(|i| {
                let mut rng = substream(cfg.seed, evals + i as u64);
                let a = tournament(&scores, ns.tournament_size, &mut rng);
                let b = tournament(&scores, ns.tournament_size, &mut rng);
                domain.vary(&population[a].0, &population[b].0, var, &mut rng)
            })
            .collect::<Result<_>>()?;
        let evaluations = evaluate_batch(domain, &genomes)?;
        evals += count as u64;
        population = genomes.into_iter().zip(evaluations).collect();
        scores = process_generation(&population, &mut archive, &mut best, ns)?;
        metrics.push(snapshot(&archive, domain, evals, &best));
    }

    Ok(NsResult {
        archive,
        best: best.expect("budget >= 1 evaluated at least one individual"),
        metrics,
    })
}

/// Score the evaluated population, admit candidates to the archive and
/// update the best-ever elite. Returns the selection scores.
fn process_generation(
    population: &[(Genome, Evaluation)],
    archive: &mut NoveltyArchive,
    best: &mut Option<Elite>,
    ns: &NsConfig,
) -> Result<Vec<f64>> {
    let novelties = population_novelty(population, archive, ns.k)?;
    let scores = if ns.local_competition {
        nslc_scores(population, archive, &novelties, ns)
    } else {
        novelties.clone()
    };

    for (i, (genome, evaluation)) in population.iter().enumerate() {
        archive.try_admit(
            evaluation.descriptor.clone(),
            novelties[i],
            Some(Elite::new(genome.clone(), evaluation.clone())),
        );
        match best {
            Some(b) if evaluation.fitness <= b.fitness() => {}
            _ => *best = Some(Elite::new(genome.clone(), evaluation.clone())),
        }
    }
    Ok(scores)
}

/// Novelty of every individual against the archive plus the population
/// minus itself.
fn population_novelty(
    population: &[(Genome, Evaluation)],
    archive: &NoveltyArchive,
    k: usize,
) -> Result<Vec<f64>> {
    population
        .par_iter()
        .enumerate()
        .map(|(i, (_, evaluation))| {
            let refs = archive.descriptors().chain(
                population
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, (_, e))| &e.descriptor),
            );
            novelty_score(&evaluation.descriptor, refs, k)
        })
        .collect()
}

/// NSLC blend: `w * rank_norm(novelty) + (1 - w) * local_quality`, where
/// local quality is the fraction of the `k` nearest archive+population
/// neighbors the individual strictly outperforms on fitness.
fn nslc_scores(
    population: &[(Genome, Evaluation)],
    archive: &NoveltyArchive,
    novelties: &[f64],
    ns: &NsConfig,
) -> Vec<f64> {
    let n = population.len();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| novelties[a].total_cmp(&novelties[b]).then(a.cmp(&b)));
    let mut rank_norm = vec![0.0; n];
    for (pos, &i) in order.iter().enumerate() {
        rank_norm[i] = if n > 1 { pos as f64 / (n - 1) as f64 } else { 1.0 };
    }

    // Neighbor pool: archive entries that carry an elite, then the
    // population itself.
    let pool: Vec<(&crate::types::Descriptor, f64)> = archive
        .entries()
        .iter()
        .filter_map(|e| e.elite.as_ref().map(|el| (&e.descriptor, el.fitness())))
        .chain(population.iter().map(|(_, e)| (&e.descriptor, e.fitness)))
        .collect();
    let pop_offset = pool.len() - n;

    let local: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let me = &population[i].1;
            let mut neighbors: Vec<(f64, usize)> = pool
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != pop_offset + i)
                .map(|(j, (d, _))| (me.descriptor.euclidean(d), j))
                .collect();
            let take = ns.k.min(neighbors.len());
            if take == 0 {
                return 0.0;
            }
            if neighbors.len() > take {
                neighbors.select_nth_unstable_by(take - 1, |a, b| {
                    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
                });
                neighbors.truncate(take);
            }
            let beaten = neighbors.iter().filter(|&&(_, j)| me.fitness > pool[j].1).count();
            beaten as f64 / take as f64
        })
        .collect();

    (0..n)
        .map(|i| ns.blend_weight * rank_norm[i] + (1.0 - ns.blend_weight) * local[i])
        .collect()
}

fn snapshot<D: Domain + ?Sized>(
    archive: &NoveltyArchive,
    domain: &D,
    evals: u64,
    best: &Option<Elite>,
) -> MetricsRow {
    let (f_min, f_max) = domain.fitness_bounds();
    let qd_score = archive
        .entries()
        .iter()
        .filter_map(|e| e.elite.as_ref())
        .map(|el| ((el.fitness() - f_min) / (f_max - f_min)).clamp(0.0, 1.0))
        .sum();
    MetricsRow {
        evals,
        coverage: archive.len() as f64,
        qd_score,
        best_fitness: best.as_ref().map(|b| b.fitness()).unwrap_or(f64::NEG_INFINITY),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::SphereDomain;
    use crate::types::Descriptor;

    fn engine(budget: u64, seed: u64) -> EngineConfig {
        EngineConfig { budget, batch: 1, init_count: 1, seed }
    }

    #[test]
    fn best_fitness_is_monotone() {
        let domain = SphereDomain::new(4).unwrap();
        let ns = NsConfig { pop_size: 20, ..Default::default() };
        let result =
            run_novelty_search(&domain, &ns, &VariationConfig::default(), &engine(400, 5)).unwrap();
        for pair in result.metrics.windows(2) {
            assert!(pair[1].best_fitness >= pair[0].best_fitness);
            assert!(pair[1].evals > pair[0].evals);
            assert!(pair[1].coverage >= pair[0].coverage);
        }
        assert_eq!(result.metrics.last().unwrap().evals, 400);
    }

    #[test]
    fn identical_population_scores_equally() {
        let genome = Genome::Real(vec![0.5; 4]);
        let evaluation = Evaluation {
            fitness: -0.1,
            descriptor: Descriptor::new(vec![0.5, 0.5]),
        };
        let population: Vec<_> =
            (0..10).map(|_| (genome.clone(), evaluation.clone())).collect();
        let archive = NoveltyArchive::new(0.1, 3).unwrap();
        let novelties = population_novelty(&population, &archive, 3).unwrap();
        assert!(novelties.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn lc_off_reduces_to_raw_novelty() {
        // The selection path with local competition off must hand back the
        // novelty scores untouched.
        let domain = SphereDomain::new(4).unwrap();
        let mut rng = substream(3, 0);
        let population: Vec<(Genome, Evaluation)> = (0..12)
            .map(|_| {
                let g = domain.random_genome(&mut rng);
                let e = domain.evaluate(&g).unwrap();
                (g, e)
            })
            .collect();
        let mut archive = NoveltyArchive::new(0.05, 4).unwrap();
        let mut best = None;
        let ns = NsConfig { pop_size: 12, k: 4, local_competition: false, ..Default::default() };
        let scores = process_generation(&population, &mut archive, &mut best, &ns).unwrap();
        let novelties =
            population_novelty(&population, &NoveltyArchive::new(0.05, 4).unwrap(), 4).unwrap();
        assert_eq!(scores, novelties);
    }

    #[test]
    fn nslc_blend_stays_in_unit_range() {
        let domain = SphereDomain::new(4).unwrap();
        let ns = NsConfig {
            pop_size: 16,
            local_competition: true,
            blend_weight: 0.5,
            ..Default::default()
        };
        let result =
            run_novelty_search(&domain, &ns, &VariationConfig::default(), &engine(320, 8)).unwrap();
        assert!(!result.archive.is_empty());
        assert!(result.best.fitness() <= 0.0);
    }

    #[test]
    fn deterministic_across_runs() {
        let domain = SphereDomain::new(4).unwrap();
        let ns = NsConfig { pop_size: 25, ..Default::default() };
        let a = run_novelty_search(&domain, &ns, &VariationConfig::default(), &engine(500, 77))
            .unwrap();
        let b = run_novelty_search(&domain, &ns, &VariationConfig::default(), &engine(500, 77))
            .unwrap();
        assert_eq!(a.metrics, b.metrics);
        assert_eq!(a.archive.entries(), b.archive.entries());
        assert_eq!(a.best, b.best);
    }
}
