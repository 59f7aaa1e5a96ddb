//! Synthetic sphere test domain.

use rand_chacha::ChaCha8Rng;

use crate::domain::{random_real, vary_real, Domain, GenomeSpec};
use crate::error::{QdError, Result};
use crate::types::{Descriptor, Evaluation, Genome};
use crate::variation::VariationConfig;

/// `fitness = -sum((g_i - 0.5)^2)` over `[0, 1]^n`; the descriptor is the
/// first two genes. Mostly a unit-test and smoke-run domain.
#[derive(Debug, Clone)]
pub struct SphereDomain {
    n: usize,
    bounds: Vec<(f64, f64)>,
}

impl SphereDomain {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(QdError::InvalidInput("sphere needs n >= 2".into()));
        }
        Ok(SphereDomain { n, bounds: vec![(0.0, 1.0); n] })
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

impl Domain for SphereDomain {
    fn name(&self) -> &str {
        "sphere"
    }

    fn genome_spec(&self) -> GenomeSpec {
        GenomeSpec::RealVector { bounds: self.bounds.clone() }
    }

    fn descriptor_dim(&self) -> usize {
        2
    }

    fn descriptor_bounds(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 1.0), (0.0, 1.0)]
    }

    fn fitness_bounds(&self) -> (f64, f64) {
        (-(self.n as f64) / 4.0, 0.0)
    }

    fn random_genome(&self, rng: &mut ChaCha8Rng) -> Genome {
        Genome::Real(random_real(&self.bounds, rng))
    }

    fn vary(
        &self,
        a: &Genome,
        b: &Genome,
        cfg: &VariationConfig,
        rng: &mut ChaCha8Rng,
    ) -> Result<Genome> {
        let (a, b) = match (a.as_real(), b.as_real()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(QdError::InvalidInput("sphere expects real genomes".into())),
        };
        Ok(Genome::Real(vary_real(&self.bounds, a, b, cfg, rng)?))
    }

    fn evaluate(&self, genome: &Genome) -> Result<Evaluation> {
        let g = genome
            .as_real()
            .ok_or_else(|| QdError::InvalidInput("sphere expects real genomes".into()))?;
        if g.len() != self.n {
            return Err(QdError::DimensionMismatch { expected: self.n, actual: g.len() });
        }
        let fitness = -g.iter().map(|v| (v - 0.5) * (v - 0.5)).sum::<f64>();
        let descriptor = Descriptor::new(vec![g[0], g[1]]);
        Ok(Evaluation { fitness, descriptor })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optimum_at_the_center() {
        let dom = SphereDomain::new(4).unwrap();
        let e = dom.evaluate(&Genome::Real(vec![0.5; 4])).unwrap();
        assert_eq!(e.fitness, 0.0);
        assert_eq!(e.descriptor.values(), &[0.5, 0.5]);
    }

    #[test]
    fn corners_hit_the_fitness_floor() {
        let dom = SphereDomain::new(4).unwrap();
        let lo = dom.evaluate(&Genome::Real(vec![0.0; 4])).unwrap();
        assert_eq!(lo.fitness, -1.0);
        let hi = dom.evaluate(&Genome::Real(vec![1.0; 4])).unwrap();
        assert_eq!(hi.fitness, -1.0);
        assert_eq!(hi.descriptor.values(), &[1.0, 1.0]);
    }

    #[test]
    fn tiny_dimension_is_rejected() {
        assert!(SphereDomain::new(1).is_err());
    }
}
