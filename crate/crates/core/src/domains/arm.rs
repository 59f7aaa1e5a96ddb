//! Planar redundant arm.
//!
//! The genome is the vector of joint angles; forward kinematics places the
//! end-effector, the descriptor is the end-effector position normalized
//! into `[0, 1]^2`, and the fitness is the negated population variance of
//! the joint angles, so smooth configurations score best.

use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;

use crate::domain::{random_real, vary_real, Domain, GenomeSpec};
use crate::error::{QdError, Result};
use crate::types::{Descriptor, Evaluation, Genome};
use crate::variation::VariationConfig;

/// Geometry of the arm: equal link lengths summing to a total reach of 1,
/// joints limited to `[-pi, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmParams {
    pub n_joints: usize,
    pub link_lengths: Vec<f64>,
    pub joint_bounds: (f64, f64),
}

impl ArmParams {
    pub fn new(n_joints: usize) -> Result<Self> {
        if n_joints == 0 {
            return Err(QdError::InvalidInput("arm needs at least one joint".into()));
        }
        Ok(ArmParams {
            n_joints,
            link_lengths: vec![1.0 / n_joints as f64; n_joints],
            joint_bounds: (-PI, PI),
        })
    }

    /// Total reach; 1 by construction.
    pub fn reach(&self) -> f64 {
        self.link_lengths.iter().sum()
    }
}

impl Default for ArmParams {
    fn default() -> Self {
        ArmParams::new(7).expect("7 joints")
    }
}

#[derive(Debug, Clone)]
pub struct ArmDomain {
    params: ArmParams,
    bounds: Vec<(f64, f64)>,
}

impl ArmDomain {
    pub fn new(n_joints: usize) -> Result<Self> {
        let params = ArmParams::new(n_joints)?;
        let bounds = vec![params.joint_bounds; n_joints];
        Ok(ArmDomain { params, bounds })
    }

    pub fn params(&self) -> &ArmParams {
        &self.params
    }

    pub fn n_joints(&self) -> usize {
        self.params.n_joints
    }

    /// End-effector position: `x = sum l_i cos(phi_i)`,
    /// `y = sum l_i sin(phi_i)` with `phi_i = sum_{j<=i} theta_j`.
    pub fn forward_kinematics(&self, theta: &[f64]) -> Result<(f64, f64)> {
        if theta.len() != self.params.n_joints {
            return Err(QdError::DimensionMismatch {
                expected: self.params.n_joints,
                actual: theta.len(),
            });
        }
        let mut phi = 0.0;
        let mut x = 0.0;
        let mut y = 0.0;
        for (&t, &l) in theta.iter().zip(&self.params.link_lengths) {
            phi += t;
            x += l * phi.cos();
            y += l * phi.sin();
        }
        Ok((x, y))
    }

    /// Normalize an end-effector position into descriptor space.
    pub fn normalize_endpoint(&self, (x, y): (f64, f64)) -> Descriptor {
        let l = self.params.reach();
        Descriptor::new(vec![
            ((x + l) / (2.0 * l)).clamp(0.0, 1.0),
            ((y + l) / (2.0 * l)).clamp(0.0, 1.0),
        ])
    }

    /// Invert [`Self::normalize_endpoint`].
    pub fn denormalize_descriptor(&self, d: &Descriptor) -> (f64, f64) {
        let l = self.params.reach();
        (2.0 * l * d.values()[0] - l, 2.0 * l * d.values()[1] - l)
    }
}

// Welford's update; exactly zero for constant input, where a two-pass sum
// leaves rounding residue.
fn population_variance(values: &[f64]) -> f64 {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &v) in values.iter().enumerate() {
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
    }
    m2 / values.len() as f64
}

impl Domain for ArmDomain {
    fn name(&self) -> &str {
        "arm"
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
        (-PI * PI, 0.0)
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
            _ => return Err(QdError::InvalidInput("arm expects real genomes".into())),
        };
        Ok(Genome::Real(vary_real(&self.bounds, a, b, cfg, rng)?))
    }

    fn evaluate(&self, genome: &Genome) -> Result<Evaluation> {
        let theta = genome
            .as_real()
            .ok_or_else(|| QdError::InvalidInput("arm expects real genomes".into()))?;
        let endpoint = self.forward_kinematics(theta)?;
        let fitness = (-population_variance(theta)).clamp(-PI * PI, 0.0);
        Ok(Evaluation { fitness, descriptor: self.normalize_endpoint(endpoint) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn link_lengths_sum_to_the_reach() {
        let params = ArmParams::default();
        assert_eq!(params.n_joints, 7);
        assert!((params.reach() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn straight_arm_points_right() {
        let dom = ArmDomain::new(7).unwrap();
        let e = dom.evaluate(&Genome::Real(vec![0.0; 7])).unwrap();
        assert_eq!(e.fitness, 0.0);
        let (x, y) = dom.forward_kinematics(&[0.0; 7]).unwrap();
        assert!((x - 1.0).abs() < 1e-12 && y.abs() < 1e-12);
        assert_eq!(e.descriptor.values(), &[1.0, 0.5]);
    }

    #[test]
    fn folded_first_joint() {
        let dom = ArmDomain::new(7).unwrap();
        let mut theta = vec![0.0; 7];
        theta[0] = PI;
        let (x, y) = dom.forward_kinematics(&theta).unwrap();
        assert!((x + 1.0).abs() < 1e-12, "x = {x}");
        assert!(y.abs() < 1e-9, "y = {y}");
        let e = dom.evaluate(&Genome::Real(theta)).unwrap();
        let want = -6.0 * PI * PI / 49.0;
        assert!((e.fitness - want).abs() < 1e-12, "fitness {} vs {want}", e.fitness);
        assert!((e.descriptor.values()[0]).abs() < 1e-12);
        assert!((e.descriptor.values()[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn equal_angles_have_zero_variance() {
        let dom = ArmDomain::new(7).unwrap();
        let e = dom.evaluate(&Genome::Real(vec![0.37; 7])).unwrap();
        assert_eq!(e.fitness, 0.0);
    }

    #[test]
    fn fk_matches_complex_rotation_oracle() {
        // Compose rotations by complex multiplication instead of summing
        // angles.
        let dom = ArmDomain::new(7).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(404);
        for _ in 0..10_000 {
            let theta: Vec<f64> = (0..7).map(|_| rng.random_range(-PI..PI)).collect();
            let (x, y) = dom.forward_kinematics(&theta).unwrap();

            let (mut ox, mut oy) = (0.0f64, 0.0f64);
            let (mut ux, mut uy) = (1.0f64, 0.0f64);
            for &t in &theta {
                let (s, c) = t.sin_cos();
                let (nx, ny) = (ux * c - uy * s, ux * s + uy * c);
                ux = nx;
                uy = ny;
                ox += ux / 7.0;
                oy += uy / 7.0;
            }
            assert!((x - ox).abs() < 1e-10 && (y - oy).abs() < 1e-10);
        }
    }

    #[test]
    fn endpoint_stays_inside_the_reachable_disk() {
        let dom = ArmDomain::new(7).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let theta: Vec<f64> = (0..7).map(|_| rng.random_range(-PI..PI)).collect();
            let (x, y) = dom.forward_kinematics(&theta).unwrap();
            assert!(x.hypot(y) <= 1.0 + 1e-12);
            let e = dom.evaluate(&Genome::Real(theta)).unwrap();
            assert!(e.descriptor.values().iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }
}
