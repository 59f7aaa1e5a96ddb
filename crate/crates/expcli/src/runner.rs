//! Run orchestration shared by the CLI subcommands.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use qd_core::adapt::{
    arm_damaged_objective, arm_recovery_prior, run_adaptation, AdaptConfig, DamageSpec, GpParams,
};
use qd_core::archive::{Archive, CvtIndexer, GridIndexer, NicheIndexer};
use qd_core::cvt::build_cvt;
use qd_core::domain::Domain;
use qd_core::domains::cppn::{cppn_render, random_structured_cppn};
use qd_core::domains::{ArmDomain, CppnImageDomain, MazeDomain, MazeWorld, SphereDomain};
use qd_core::engines::{
    run_map_elites, run_novelty_search, run_objective_ga, EngineConfig, GaConfig, NsConfig,
};
use qd_core::rng::mix64;
use qd_core::types::{Elite, Genome};

use crate::config::{serialize_config, Algorithm, ArchiveKind, DomainName, RunConfig};
use crate::heatmap::emit_heatmap;
use crate::persist::{
    load_archive, save_archive, save_metrics, save_pgm, save_trials, write_atomic, AnyArchive,
    SavedArchive,
};

/// Target image side length for the image-matching domain.
const IMAGE_SIZE: usize = 32;

pub fn build_domain(cfg: &RunConfig) -> Result<Box<dyn Domain>> {
    Ok(match cfg.run.domain {
        DomainName::Sphere => Box::new(SphereDomain::new(10)?),
        DomainName::Arm => Box::new(ArmDomain::new(7)?),
        DomainName::Maze => Box::new(MazeDomain::new(MazeWorld::default())?),
        DomainName::CppnImage => {
            let target =
                cppn_render(&random_structured_cppn(cfg.run.target_seed), IMAGE_SIZE, IMAGE_SIZE)?;
            Box::new(CppnImageDomain::new(target)?)
        }
    })
}

fn resolve_bins(bins: &[usize], d: usize) -> Result<Vec<usize>> {
    if bins.len() == d {
        Ok(bins.to_vec())
    } else if bins.len() == 1 {
        Ok(vec![bins[0]; d])
    } else {
        bail!("`bins` has {} entries for a {d}-D descriptor space", bins.len())
    }
}

/// Prepare the output directory; refuse to reuse a non-empty one unless
/// forced.
fn claim_out_dir(out: &Path, force: bool) -> Result<()> {
    if out.exists() && out.read_dir().map(|mut d| d.next().is_some()).unwrap_or(false) && !force {
        bail!("output directory {} is not empty (use --force to overwrite)", out.display());
    }
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    Ok(())
}

fn engine_config(cfg: &RunConfig, niche_count: usize) -> EngineConfig {
    let init_count = if cfg.run.init_count > 0 {
        cfg.run.init_count
    } else {
        (niche_count / 10).max(100)
    };
    EngineConfig {
        budget: cfg.run.budget,
        batch: cfg.run.batch,
        init_count,
        seed: cfg.run.seed,
    }
}

/// Run the configured engine inside a worker pool and persist everything.
pub fn run(cfg: &RunConfig, out: &Path, force: bool) -> Result<()> {
    claim_out_dir(out, force)?;
    write_atomic(&out.join("config.ini"), serialize_config(cfg).as_bytes())?;

    let domain = build_domain(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.run.workers)
        .build()
        .context("building worker pool")?;

    let (archive, metrics, best) = pool.install(|| -> Result<_> {
        Ok(match cfg.run.algorithm {
            Algorithm::MapElites => {
                let d = domain.descriptor_dim();
                let bounds = domain.descriptor_bounds();
                match cfg.archive.kind {
                    ArchiveKind::Grid => {
                        let bins = resolve_bins(&cfg.archive.bins, d)?;
                        let indexer = GridIndexer::new(bounds, bins)?;
                        let engine = engine_config(cfg, indexer.niche_count());
                        let (archive, metrics) = run_map_elites(
                            domain.as_ref(),
                            Archive::new(indexer),
                            &cfg.variation,
                            &engine,
                        )?;
                        let best = archive.best().map(|(_, e)| e.clone());
                        (AnyArchive::Grid(archive), metrics, best)
                    }
                    ArchiveKind::Cvt => {
                        // The tessellation seed is derived from the run seed
                        // so one seed pins the whole run.
                        let centroids = build_cvt(
                            cfg.archive.k,
                            &bounds,
                            cfg.archive.cvt_samples,
                            cfg.archive.cvt_iters,
                            mix64(cfg.run.seed ^ 0x4356_5400),
                        )?;
                        let indexer = CvtIndexer::new(centroids)?;
                        let engine = engine_config(cfg, indexer.niche_count());
                        let (archive, metrics) = run_map_elites(
                            domain.as_ref(),
                            Archive::new(indexer),
                            &cfg.variation,
                            &engine,
                        )?;
                        let best = archive.best().map(|(_, e)| e.clone());
                        (AnyArchive::Cvt(archive), metrics, best)
                    }
                }
            }
            Algorithm::NoveltySearch => {
                let ns = NsConfig {
                    pop_size: cfg.ns.pop_size,
                    k: cfg.ns.k,
                    rho: cfg.ns.rho,
                    local_competition: cfg.ns.local_competition,
                    blend_weight: cfg.ns.blend_weight,
                    tournament_size: cfg.ns.tournament_size,
                };
                let engine = engine_config(cfg, 0);
                let result = run_novelty_search(domain.as_ref(), &ns, &cfg.variation, &engine)?;
                (AnyArchive::Novelty(result.archive), result.metrics, Some(result.best))
            }
            Algorithm::ObjectiveGa => {
                let ga = GaConfig {
                    pop_size: cfg.ga.pop_size,
                    tournament_size: cfg.ga.tournament_size,
                    elite_keep: cfg.ga.elite_keep,
                };
                let engine = engine_config(cfg, 0);
                let (best, metrics) =
                    run_objective_ga(domain.as_ref(), &ga, &cfg.variation, &engine)?;
                (AnyArchive::Best(best.clone()), metrics, Some(best))
            }
        })
    })?;

    let saved = SavedArchive {
        archive,
        fitness_bounds: domain.fitness_bounds(),
        descriptor_bounds: domain.descriptor_bounds(),
    };
    save_archive(out, &saved)?;
    save_metrics(&out.join("metrics.csv"), &metrics)?;

    if cfg.run.domain == DomainName::CppnImage {
        let target = cppn_render(&random_structured_cppn(cfg.run.target_seed), IMAGE_SIZE, IMAGE_SIZE)?;
        save_pgm(&out.join("target.pgm"), &target)?;
        if let Some(best) = &best {
            if let Genome::Cppn(g) = &best.genome {
                save_pgm(&out.join("best.pgm"), &cppn_render(g, IMAGE_SIZE, IMAGE_SIZE)?)?;
            }
        }
    }

    if let Some(row) = metrics.last() {
        println!(
            "evals={} coverage={:.6} qd_score={:.6} best_fitness={:.6}",
            row.evals, row.coverage, row.qd_score, row.best_fitness
        );
    }
    Ok(())
}

/// Load an arm archive and run the damage-recovery loop.
pub fn adapt(archive_dir: &Path, cfg: &RunConfig, out: &Path, force: bool) -> Result<()> {
    claim_out_dir(out, force)?;
    write_atomic(&out.join("config.ini"), serialize_config(cfg).as_bytes())?;

    let saved = load_archive(archive_dir)?;
    let rows = saved.archive.rows();
    if rows.is_empty() {
        bail!("archive in {} is empty", archive_dir.display());
    }
    let n_joints = match &rows[0].1.genome {
        Genome::Real(v) => v.len(),
        Genome::Cppn(_) => bail!("damage recovery needs an arm archive with real-vector genomes"),
    };
    if rows.iter().any(|(_, e)| e.genome.as_real().map(|v| v.len()) != Some(n_joints)) {
        bail!("archive genomes have inconsistent lengths");
    }
    let arm = ArmDomain::new(n_joints)?;
    let damage =
        DamageSpec { locked_joint: cfg.adapt.locked_joint, locked_angle: cfg.adapt.locked_angle };
    let adapt_cfg = AdaptConfig {
        ucb_beta: cfg.adapt.ucb_beta,
        max_trials: cfg.adapt.max_trials,
        success_eps: cfg.adapt.success_eps,
        target: cfg.adapt.target,
        gp: GpParams::default(),
    };
    let objective = arm_damaged_objective(&arm, damage, cfg.adapt.target)?;
    let prior = arm_recovery_prior(&arm, cfg.adapt.target);

    let result = match &saved.archive {
        AnyArchive::Grid(a) => run_adaptation(a, &objective, prior, &adapt_cfg)?,
        AnyArchive::Cvt(a) => run_adaptation(a, &objective, prior, &adapt_cfg)?,
        other => bail!("damage recovery needs a grid or cvt archive, got `{}`", other.kind_name()),
    };

    save_trials(&out.join("trials.csv"), &result.log)?;
    println!(
        "converged={} trials={} best_niche={} best_objective={:.6}",
        result.converged,
        result.log.len(),
        result.best_niche,
        result.best_objective
    );
    Ok(())
}

pub fn plot(archive_dir: &Path, out: Option<&Path>) -> Result<()> {
    let saved = load_archive(archive_dir)?;
    let default = archive_dir.join("heatmap.svg");
    let path = out.unwrap_or(&default);
    emit_heatmap(path, &saved)?;
    println!("{}", path.display());
    Ok(())
}

pub fn stats(archive_dir: &Path) -> Result<()> {
    let saved = load_archive(archive_dir)?;
    let (f_min, f_max) = saved.fitness_bounds;
    let (coverage, qd_score, best) = match &saved.archive {
        AnyArchive::Grid(a) => {
            let m = a.metrics((f_min, f_max));
            (m.coverage, m.qd_score, a.best().map(|(_, e)| e.fitness()))
        }
        AnyArchive::Cvt(a) => {
            let m = a.metrics((f_min, f_max));
            (m.coverage, m.qd_score, a.best().map(|(_, e)| e.fitness()))
        }
        AnyArchive::Novelty(a) => {
            let qd: f64 = a
                .entries()
                .iter()
                .filter_map(|e| e.elite.as_ref())
                .map(|el| ((el.fitness() - f_min) / (f_max - f_min)).clamp(0.0, 1.0))
                .sum();
            let best = a
                .entries()
                .iter()
                .filter_map(|e| e.elite.as_ref().map(Elite::fitness))
                .fold(None, |acc: Option<f64>, f| Some(acc.map_or(f, |a| a.max(f))));
            (a.len() as f64, qd, best)
        }
        AnyArchive::Best(e) => (0.0, 0.0, Some(e.fitness())),
    };
    let best = best.map(|b| b.to_string()).unwrap_or_else(|| "nan".into());
    println!("coverage = {coverage}");
    println!("qd_score = {qd_score}");
    println!("best_fitness = {best}");
    Ok(())
}
