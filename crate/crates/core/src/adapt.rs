//! Map-based damage recovery.
//!
//! A Gaussian process over normalized descriptor space, with a prior mean
//! derived from the undamaged archive geometry, ranks untested niches by
//! upper confidence bound. Each trial runs that niche's stored elite on the
//! damaged system and feeds the observation back into the model, so a
//! compensating solution is found in a handful of trials instead of a
//! re-run of the whole search.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;

use crate::archive::{Archive, NicheIndexer};
use crate::domains::arm::ArmDomain;
use crate::error::{QdError, Result};
use crate::rng::substream;
use crate::types::{Descriptor, Elite, Genome};

/// A joint stuck at a fixed angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DamageSpec {
    pub locked_joint: usize,
    pub locked_angle: f64,
}

/// Squared-exponential kernel hyperparameters. Fixed, not fitted: the loop
/// stays deterministic and the test surface small.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpParams {
    /// Kernel length scale over normalized descriptor space.
    pub length_scale: f64,
    /// Prior standard deviation.
    pub signal_sd: f64,
    /// Observation noise standard deviation.
    pub noise_sd: f64,
}

impl Default for GpParams {
    fn default() -> Self {
        GpParams { length_scale: 0.2, signal_sd: 0.5, noise_sd: 0.01 }
    }
}

/// Gaussian-process posterior over descriptor space with an explicit prior
/// mean function. Regression runs on the residuals `y - m(x)`:
///
/// `mu(q)     = m(q) + k*^T (K + sigma_n^2 I)^-1 (y - m)`
/// `sigma2(q) = k(q, q) - k*^T (K + sigma_n^2 I)^-1 k*`
pub struct GpModel<F: Fn(&[f64]) -> f64> {
    params: GpParams,
    prior: F,
    train_x: Vec<Vec<f64>>,
    train_y: Vec<f64>,
}

impl<F: Fn(&[f64]) -> f64> GpModel<F> {
    pub fn new(params: GpParams, prior: F) -> Result<Self> {
        if !params.length_scale.is_finite()
            || params.length_scale <= 0.0
            || !params.signal_sd.is_finite()
            || params.signal_sd <= 0.0
        {
            return Err(QdError::InvalidInput(
                "length_scale and signal_sd must be > 0".into(),
            ));
        }
        if !params.noise_sd.is_finite() || params.noise_sd < 0.0 {
            return Err(QdError::InvalidInput("noise_sd must be >= 0".into()));
        }
        Ok(GpModel { params, prior, train_x: Vec::new(), train_y: Vec::new() })
    }

    pub fn observe(&mut self, x: Vec<f64>, y: f64) {
        self.train_x.push(x);
        self.train_y.push(y);
    }

    pub fn observation_count(&self) -> usize {
        self.train_x.len()
    }

    fn kernel(&self, a: &[f64], b: &[f64]) -> f64 {
        let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        let ell = self.params.length_scale;
        self.params.signal_sd * self.params.signal_sd * (-d2 / (2.0 * ell * ell)).exp()
    }

    /// Posterior `(mean, variance)` at each query point. With no training
    /// data the posterior is the prior: `(m(q), signal_sd^2)`.
    pub fn posterior(&self, queries: &[Vec<f64>]) -> Result<Vec<(f64, f64)>> {
        let sf2 = self.params.signal_sd * self.params.signal_sd;
        let n = self.train_x.len();
        if n == 0 {
            return Ok(queries.iter().map(|q| ((self.prior)(q), sf2)).collect());
        }

        let sn2 = self.params.noise_sd * self.params.noise_sd;
        let k = DMatrix::from_fn(n, n, |i, j| {
            let v = self.kernel(&self.train_x[i], &self.train_x[j]);
            if i == j {
                v + sn2
            } else {
                v
            }
        });
        let chol = Cholesky::new(k).ok_or_else(|| {
            QdError::Numerical(
                "kernel matrix is not positive definite (duplicate points with zero noise?)"
                    .into(),
            )
        })?;
        let residuals =
            DVector::from_fn(n, |i, _| self.train_y[i] - (self.prior)(&self.train_x[i]));
        let alpha = chol.solve(&residuals);

        Ok(queries
            .iter()
            .map(|q| {
                let k_star = DVector::from_fn(n, |i, _| self.kernel(&self.train_x[i], q));
                let mean = (self.prior)(q) + k_star.dot(&alpha);
                let v = chol.solve(&k_star);
                let var = (sf2 - k_star.dot(&v)).max(0.0);
                (mean, var)
            })
            .collect())
    }
}

/// Recovery-loop parameters. `target` is the point in the plane the damaged
/// system should reach.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptConfig {
    /// Exploration weight of the upper confidence bound.
    pub ucb_beta: f64,
    pub max_trials: usize,
    /// Stop once the best observed objective reaches `-success_eps`.
    pub success_eps: f64,
    pub target: [f64; 2],
    pub gp: GpParams,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        AdaptConfig {
            ucb_beta: 0.5,
            max_trials: 20,
            success_eps: 0.02,
            target: [0.5, 0.5],
            gp: GpParams::default(),
        }
    }
}

/// One adaptation trial: the niche tested, the model's view of it before
/// the trial, and the observed objective.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub trial: usize,
    pub niche: usize,
    pub prior_mean: f64,
    pub posterior_mean: f64,
    pub posterior_sd: f64,
    pub observed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptResult {
    pub best: Elite,
    pub best_niche: usize,
    pub best_objective: f64,
    /// False when the trial budget ran out before reaching `-success_eps`.
    pub converged: bool,
    pub log: Vec<TrialRow>,
}

/// Trial-and-error recovery over a precomputed archive.
///
/// Each trial evaluates, on the damaged system, the elite of the untested
/// niche with the highest `mu + ucb_beta * sigma` (ties toward the lowest
/// niche index). The loop is deterministic; it stops on success or after
/// `max_trials`, returning the best elite found either way.
pub fn run_adaptation<I, E, P>(
    archive: &Archive<I>,
    damaged_evaluator: E,
    prior_mean: P,
    cfg: &AdaptConfig,
) -> Result<AdaptResult>
where
    I: NicheIndexer,
    E: Fn(&Genome) -> f64,
    P: Fn(&Descriptor) -> f64,
{
    if archive.is_empty() {
        return Err(QdError::InvalidInput("archive is empty".into()));
    }
    if cfg.max_trials == 0 {
        return Err(QdError::InvalidInput("max_trials must be >= 1".into()));
    }

    let niches: Vec<(usize, &Elite)> = archive.cells().collect();
    let coords: Vec<Vec<f64>> =
        niches.iter().map(|(_, e)| e.descriptor().values().to_vec()).collect();
    let priors: Vec<f64> = niches.iter().map(|(_, e)| prior_mean(e.descriptor())).collect();

    let mut model =
        GpModel::new(cfg.gp, move |q: &[f64]| prior_mean(&Descriptor::new(q.to_vec())))?;

    let mut tested = vec![false; niches.len()];
    let mut log = Vec::new();
    let mut best: Option<(usize, f64)> = None;

    for trial in 1..=cfg.max_trials {
        let posterior = model.posterior(&coords)?;
        let mut pick: Option<(usize, f64)> = None;
        for (i, &(mean, var)) in posterior.iter().enumerate() {
            if tested[i] {
                continue;
            }
            let ucb = mean + cfg.ucb_beta * var.sqrt();
            match pick {
                Some((_, b)) if ucb <= b => {}
                _ => pick = Some((i, ucb)),
            }
        }
        let Some((i, _)) = pick else { break };

        let observed = damaged_evaluator(&niches[i].1.genome);
        log.push(TrialRow {
            trial,
            niche: niches[i].0,
            prior_mean: priors[i],
            posterior_mean: posterior[i].0,
            posterior_sd: posterior[i].1.sqrt(),
            observed,
        });
        tested[i] = true;
        model.observe(coords[i].clone(), observed);

        match best {
            Some((_, b)) if observed <= b => {}
            _ => best = Some((i, observed)),
        }
        if best.map(|(_, b)| b >= -cfg.success_eps).unwrap_or(false) {
            break;
        }
    }

    let (best_idx, best_objective) = best.expect("max_trials >= 1 ran at least one trial");
    Ok(AdaptResult {
        best: niches[best_idx].1.clone(),
        best_niche: niches[best_idx].0,
        best_objective,
        converged: best_objective >= -cfg.success_eps,
        log,
    })
}

/// Objective of the damaged arm: negated distance from the realized
/// end-effector (with the locked joint overridden) to `target`.
pub fn arm_damaged_objective<'a>(
    arm: &'a ArmDomain,
    damage: DamageSpec,
    target: [f64; 2],
) -> Result<impl Fn(&Genome) -> f64 + 'a> {
    if damage.locked_joint >= arm.n_joints() {
        return Err(QdError::InvalidInput(format!(
            "locked_joint {} out of range for {} joints",
            damage.locked_joint,
            arm.n_joints()
        )));
    }
    Ok(move |genome: &Genome| {
        let theta = genome.as_real().expect("arm genomes are real vectors");
        let mut damaged = theta.to_vec();
        damaged[damage.locked_joint] = damage.locked_angle;
        let (x, y) = arm.forward_kinematics(&damaged).expect("genome length matches the arm");
        -((x - target[0]).hypot(y - target[1]))
    })
}

/// Prior mean from undamaged map geometry: negated distance from the stored
/// (denormalized) end-effector to `target`.
pub fn arm_recovery_prior(arm: &ArmDomain, target: [f64; 2]) -> impl Fn(&Descriptor) -> f64 + '_ {
    move |d: &Descriptor| {
        let (x, y) = arm.denormalize_descriptor(d);
        -((x - target[0]).hypot(y - target[1]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineResult {
    pub converged: bool,
    pub trials_used: usize,
    pub best_objective: f64,
}

/// Uniform-random niche testing with the same stopping rule; the control
/// arm of the recovery experiment.
pub fn run_random_baseline<I, E>(
    archive: &Archive<I>,
    damaged_evaluator: E,
    cfg: &AdaptConfig,
    seed: u64,
) -> Result<BaselineResult>
where
    I: NicheIndexer,
    E: Fn(&Genome) -> f64,
{
    if archive.is_empty() {
        return Err(QdError::InvalidInput("archive is empty".into()));
    }
    let niches: Vec<(usize, &Elite)> = archive.cells().collect();
    let mut rng = substream(seed, 0);
    let mut untested: Vec<usize> = (0..niches.len()).collect();
    let mut best = f64::NEG_INFINITY;
    for trial in 1..=cfg.max_trials {
        if untested.is_empty() {
            return Ok(BaselineResult { converged: false, trials_used: trial - 1, best_objective: best });
        }
        let pick = rng.random_range(0..untested.len());
        let idx = untested.swap_remove(pick);
        let observed = damaged_evaluator(&niches[idx].1.genome);
        if observed > best {
            best = observed;
        }
        if best >= -cfg.success_eps {
            return Ok(BaselineResult { converged: true, trials_used: trial, best_objective: best });
        }
    }
    Ok(BaselineResult { converged: false, trials_used: cfg.max_trials, best_objective: best })
}
