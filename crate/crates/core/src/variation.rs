//! Variation operators for real-vector genomes: bounded Gaussian mutation
//! and directional iso+line recombination. Both are pure functions of their
//! inputs and an explicit random substream, so candidates can be varied in
//! parallel.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{QdError, Result};

/// Scales for the real-vector variation operators. Mutation scale is a
/// fraction of each gene's range, so one config serves every domain.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationConfig {
    /// Per-gene mutation scale, as a fraction of the gene range.
    pub sigma_gauss: f64,
    /// Per-gene mutation probability.
    pub p_mut: f64,
    /// Isotropic component of the recombination noise (fraction of range).
    pub sigma_iso: f64,
    /// Scale of the shared line coefficient along `g2 - g1`.
    pub sigma_line: f64,
}

impl Default for VariationConfig {
    fn default() -> Self {
        VariationConfig { sigma_gauss: 0.1, p_mut: 0.2, sigma_iso: 0.01, sigma_line: 0.2 }
    }
}

fn clamp(v: f64, (lo, hi): (f64, f64)) -> f64 {
    v.max(lo).min(hi)
}

/// Each gene is perturbed with probability `p_mut` by
/// `Normal(0, (sigma_gauss * range)^2)` and clamped back into bounds.
pub fn mutate_gaussian(
    genes: &[f64],
    bounds: &[(f64, f64)],
    cfg: &VariationConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    if genes.len() != bounds.len() {
        return Err(QdError::DimensionMismatch { expected: bounds.len(), actual: genes.len() });
    }
    let mut child = Vec::with_capacity(genes.len());
    for (&g, &b) in genes.iter().zip(bounds) {
        let gate: f64 = rng.random();
        let v = if gate < cfg.p_mut {
            let n: f64 = StandardNormal.sample(rng);
            g + n * cfg.sigma_gauss * (b.1 - b.0)
        } else {
            g
        };
        child.push(clamp(v, b));
    }
    Ok(child)
}

/// Directional recombination:
/// `child = g1 + sigma_iso * range .* N(0, I) + sigma_line * N(0, 1) * (g2 - g1)`,
/// clamped into bounds. The line coefficient is one scalar draw shared by
/// all genes, which keeps children spread along the parent direction.
pub fn iso_line(
    g1: &[f64],
    g2: &[f64],
    bounds: &[(f64, f64)],
    cfg: &VariationConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    if g1.len() != g2.len() {
        return Err(QdError::DimensionMismatch { expected: g1.len(), actual: g2.len() });
    }
    if g1.len() != bounds.len() {
        return Err(QdError::DimensionMismatch { expected: bounds.len(), actual: g1.len() });
    }
    let line: f64 = StandardNormal.sample(rng);
    let line = cfg.sigma_line * line;
    let mut child = Vec::with_capacity(g1.len());
    for ((&a, &b), &bd) in g1.iter().zip(g2).zip(bounds) {
        let iso: f64 = StandardNormal.sample(rng);
        let v = a + cfg.sigma_iso * (bd.1 - bd.0) * iso + line * (b - a);
        child.push(clamp(v, bd));
    }
    Ok(child)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use proptest::prelude::*;

    const UNIT: [(f64, f64); 4] = [(0.0, 1.0); 4];

    #[test]
    fn zero_sigma_is_identity() {
        let g = [0.1, 0.4, 0.9, 0.5];
        let cfg = VariationConfig { sigma_gauss: 0.0, p_mut: 1.0, ..Default::default() };
        let out = mutate_gaussian(&g, &UNIT, &cfg, &mut substream(1, 0)).unwrap();
        assert_eq!(out, g.to_vec());
    }

    #[test]
    fn zero_p_mut_is_identity() {
        let g = [0.1, 0.4, 0.9, 0.5];
        let cfg = VariationConfig { p_mut: 0.0, ..Default::default() };
        let out = mutate_gaussian(&g, &UNIT, &cfg, &mut substream(1, 1)).unwrap();
        assert_eq!(out, g.to_vec());
    }

    #[test]
    fn mutation_moments_match_declared_distribution() {
        // 1e5 draws on an interior gene with p_mut = 1: displacement mean
        // within +-0.01 * range, sd within 5% of sigma_gauss * range.
        let cfg = VariationConfig { sigma_gauss: 0.1, p_mut: 1.0, ..Default::default() };
        let bounds = [(0.0, 1.0)];
        let g = [0.5];
        let n = 100_000;
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for i in 0..n {
            let out = mutate_gaussian(&g, &bounds, &cfg, &mut substream(7, i)).unwrap();
            let dx = out[0] - 0.5;
            sum += dx;
            sum2 += dx * dx;
        }
        let mean = sum / n as f64;
        let sd = (sum2 / n as f64 - mean * mean).sqrt();
        assert!(mean.abs() < 0.01, "mean displacement {mean}");
        assert!((sd - 0.1).abs() < 0.005, "sd {sd}");
    }

    #[test]
    fn sigma_zero_recombination_returns_first_parent() {
        let g1 = [0.2, 0.4, 0.6, 0.8];
        let g2 = [0.8, 0.6, 0.4, 0.2];
        let cfg = VariationConfig { sigma_iso: 0.0, sigma_line: 0.0, ..Default::default() };
        let out = iso_line(&g1, &g2, &UNIT, &cfg, &mut substream(2, 0)).unwrap();
        assert_eq!(out, g1.to_vec());
    }

    #[test]
    fn identical_parents_reproduce_exactly() {
        let g = [0.2, 0.4, 0.6, 0.8];
        let cfg = VariationConfig { sigma_iso: 0.0, sigma_line: 0.7, ..Default::default() };
        let out = iso_line(&g, &g, &UNIT, &cfg, &mut substream(2, 1)).unwrap();
        assert_eq!(out, g.to_vec());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let cfg = VariationConfig::default();
        assert!(iso_line(&[0.1, 0.2], &[0.1], &UNIT[..2], &cfg, &mut substream(0, 0)).is_err());
    }

    #[test]
    fn line_children_stay_on_the_parent_line() {
        // sigma_iso = 0: children lie on the line through the parents and
        // the recovered scalar coefficients match Normal(0, sigma_line^2).
        let g1 = [0.45, 0.45, 0.45];
        let g2 = [0.55, 0.55, 0.55];
        let cfg = VariationConfig { sigma_iso: 0.0, sigma_line: 0.2, ..Default::default() };
        let dir = [0.1, 0.1, 0.1];
        let norm2: f64 = dir.iter().map(|d| d * d).sum();
        let n = 100_000;
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for i in 0..n {
            let child = iso_line(&g1, &g2, &[(0.0, 1.0); 3], &cfg, &mut substream(3, i)).unwrap();
            let offset: Vec<f64> = child.iter().zip(&g1).map(|(c, p)| c - p).collect();
            let s = offset.iter().zip(&dir).map(|(o, d)| o * d).sum::<f64>() / norm2;
            for (o, d) in offset.iter().zip(&dir) {
                assert!((o - s * d).abs() < 1e-12, "orthogonal deviation {}", o - s * d);
            }
            sum += s;
            sum2 += s * s;
        }
        let mean = sum / n as f64;
        let sd = (sum2 / n as f64 - mean * mean).sqrt();
        assert!(mean.abs() < 0.005, "line coefficient mean {mean}");
        assert!((sd - 0.2).abs() < 0.01, "line coefficient sd {sd}");
    }

    #[test]
    fn vanishing_sigma_converges_to_identity() {
        let g = [0.3, 0.6, 0.2, 0.9];
        let cfg = VariationConfig { sigma_gauss: 1e-12, p_mut: 1.0, ..Default::default() };
        let out = mutate_gaussian(&g, &UNIT, &cfg, &mut substream(5, 0)).unwrap();
        for (a, b) in out.iter().zip(&g) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn same_substream_same_output() {
        let g1 = [0.2, 0.7];
        let g2 = [0.5, 0.1];
        let cfg = VariationConfig::default();
        let a = iso_line(&g1, &g2, &UNIT[..2], &cfg, &mut substream(9, 3)).unwrap();
        let b = iso_line(&g1, &g2, &UNIT[..2], &cfg, &mut substream(9, 3)).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        /// Outputs stay within gene bounds for any in-bounds input.
        #[test]
        fn outputs_respect_bounds(
            genes in prop::collection::vec(0.0f64..=1.0, 4),
            partner in prop::collection::vec(0.0f64..=1.0, 4),
            counter in 0u64..1000,
        ) {
            let cfg = VariationConfig {
                sigma_gauss: 0.5, p_mut: 1.0, sigma_iso: 0.3, sigma_line: 1.0,
            };
            let m = mutate_gaussian(&genes, &UNIT, &cfg, &mut substream(11, counter)).unwrap();
            prop_assert!(m.iter().all(|&v| (0.0..=1.0).contains(&v)));
            let c = iso_line(&genes, &partner, &UNIT, &cfg, &mut substream(12, counter)).unwrap();
            prop_assert!(c.iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }
}
