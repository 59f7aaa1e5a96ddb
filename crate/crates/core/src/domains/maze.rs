//! Deceptive point maze.
//!
//! An agent in the unit square integrates an open-loop command sequence.
//! A horizontal wall separates start from goal, so the greedy straight
//! path is blocked: the objective gradient pulls solutions into the dead
//! end just below the wall, while the actual solution detours around its
//! left end.

use rand_chacha::ChaCha8Rng;

use crate::domain::{random_real, vary_real, Domain, GenomeSpec};
use crate::error::{QdError, Result};
use crate::types::{Descriptor, Evaluation, Genome};
use crate::variation::VariationConfig;

const WALL_GAP: f64 = 1e-6;

/// Maze geometry and rollout parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MazeWorld {
    pub start: (f64, f64),
    pub goal: (f64, f64),
    /// Horizontal wall from `wall_from` to `wall_to` (same y).
    pub wall_from: (f64, f64),
    pub wall_to: (f64, f64),
    /// Displacement scale per step.
    pub step_scale: f64,
    /// Number of steps; the genome holds two commands per step.
    pub horizon: usize,
}

impl Default for MazeWorld {
    fn default() -> Self {
        MazeWorld {
            start: (0.5, 0.1),
            goal: (0.5, 0.95),
            wall_from: (0.2, 0.5),
            wall_to: (1.0, 0.5),
            step_scale: 0.05,
            horizon: 20,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MazeDomain {
    world: MazeWorld,
    bounds: Vec<(f64, f64)>,
}

impl MazeDomain {
    pub fn new(world: MazeWorld) -> Result<Self> {
        if world.wall_from.1 != world.wall_to.1 {
            return Err(QdError::InvalidInput("wall must be horizontal".into()));
        }
        if world.horizon == 0 {
            return Err(QdError::InvalidInput("horizon must be >= 1".into()));
        }
        let bounds = vec![(-1.0, 1.0); 2 * world.horizon];
        Ok(MazeDomain { world, bounds })
    }

    pub fn world(&self) -> &MazeWorld {
        &self.world
    }

    /// Roll out a command sequence and return every visited position,
    /// starting at the start cell. Each step proposes
    /// `delta * (u_t, v_t)`, clamped to the unit square; if the movement
    /// segment would touch the wall the agent stops a hair short of the
    /// contact point.
    pub fn simulate(&self, commands: &[f64]) -> Result<Vec<(f64, f64)>> {
        if commands.len() != 2 * self.world.horizon {
            return Err(QdError::DimensionMismatch {
                expected: 2 * self.world.horizon,
                actual: commands.len(),
            });
        }
        let w = &self.world;
        let wall_y = w.wall_from.1;
        let wall_x = (w.wall_from.0.min(w.wall_to.0), w.wall_from.0.max(w.wall_to.0));

        let mut trajectory = Vec::with_capacity(w.horizon + 1);
        let mut pos = w.start;
        trajectory.push(pos);
        for step in commands.chunks_exact(2) {
            let target = (
                (pos.0 + w.step_scale * step[0]).clamp(0.0, 1.0),
                (pos.1 + w.step_scale * step[1]).clamp(0.0, 1.0),
            );
            pos = advance(pos, target, wall_y, wall_x);
            trajectory.push(pos);
        }
        Ok(trajectory)
    }
}

/// Move from `p` toward `q`, stopping `WALL_GAP` before the wall when the
/// segment would touch it.
fn advance(p: (f64, f64), q: (f64, f64), wall_y: f64, wall_x: (f64, f64)) -> (f64, f64) {
    let Some(t) = wall_hit(p, q, wall_y, wall_x) else {
        return q;
    };
    let (dx, dy) = (q.0 - p.0, q.1 - p.1);
    let len = dx.hypot(dy);
    let stop = t * len - WALL_GAP;
    if stop <= 0.0 {
        return p;
    }
    let f = stop / len;
    (p.0 + f * dx, p.1 + f * dy)
}

/// First parameter `t` in `[0, 1]` at which the segment `p -> q` touches the
/// horizontal wall, if any.
fn wall_hit(p: (f64, f64), q: (f64, f64), wall_y: f64, wall_x: (f64, f64)) -> Option<f64> {
    let dy = q.1 - p.1;
    if dy == 0.0 {
        if p.1 != wall_y {
            return None;
        }
        // Sliding along the wall line: first contact with its x-extent.
        let dx = q.0 - p.0;
        if p.0 >= wall_x.0 && p.0 <= wall_x.1 {
            return Some(0.0);
        }
        if dx == 0.0 {
            return None;
        }
        let t0 = (wall_x.0 - p.0) / dx;
        let t1 = (wall_x.1 - p.0) / dx;
        let t = if t0 >= 0.0 && (t1 < 0.0 || t0 <= t1) { t0 } else { t1 };
        return (0.0..=1.0).contains(&t).then_some(t);
    }
    let t = (wall_y - p.1) / dy;
    if !(0.0..=1.0).contains(&t) {
        return None;
    }
    let x = p.0 + t * (q.0 - p.0);
    (x >= wall_x.0 && x <= wall_x.1).then_some(t)
}

impl Domain for MazeDomain {
    fn name(&self) -> &str {
        "maze"
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
        (-std::f64::consts::SQRT_2, 0.0)
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
            _ => return Err(QdError::InvalidInput("maze expects real genomes".into())),
        };
        Ok(Genome::Real(vary_real(&self.bounds, a, b, cfg, rng)?))
    }

    fn evaluate(&self, genome: &Genome) -> Result<Evaluation> {
        let commands = genome
            .as_real()
            .ok_or_else(|| QdError::InvalidInput("maze expects real genomes".into()))?;
        let trajectory = self.simulate(commands)?;
        let final_pos = *trajectory.last().expect("trajectory contains the start");
        let dist = (final_pos.0 - self.world.goal.0).hypot(final_pos.1 - self.world.goal.1);
        Ok(Evaluation {
            fitness: (-dist).clamp(-std::f64::consts::SQRT_2, 0.0),
            descriptor: Descriptor::new(vec![final_pos.0, final_pos.1]),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    fn domain() -> MazeDomain {
        MazeDomain::new(MazeWorld::default()).unwrap()
    }

    /// Crossing audit used by the trajectory tests: true when a segment
    /// strictly passes from one side of the wall line to the other within
    /// the wall's x-extent.
    fn crosses_wall(p: (f64, f64), q: (f64, f64), world: &MazeWorld) -> bool {
        let wall_y = world.wall_from.1;
        let (a, b) = (p.1 - wall_y, q.1 - wall_y);
        if a * b >= 0.0 {
            return false;
        }
        let t = a / (a - b);
        let x = p.0 + t * (q.0 - p.0);
        x >= world.wall_from.0 && x <= world.wall_to.0
    }

    #[test]
    fn idle_agent_scores_start_to_goal_distance() {
        let dom = domain();
        let e = dom.evaluate(&Genome::Real(vec![0.0; 40])).unwrap();
        assert!((e.fitness + 0.85).abs() < 1e-12, "fitness {}", e.fitness);
        assert_eq!(e.descriptor.values(), &[0.5, 0.1]);
    }

    #[test]
    fn pushing_up_stops_just_below_the_wall() {
        let dom = domain();
        let commands: Vec<f64> = (0..20).flat_map(|_| [0.0, 1.0]).collect();
        let e = dom.evaluate(&Genome::Real(commands.clone())).unwrap();
        assert!((e.fitness + 0.45).abs() < 1e-4, "fitness {}", e.fitness);
        let final_pos = dom.simulate(&commands).unwrap().pop().unwrap();
        assert!(final_pos.1 < 0.5, "agent leaked through the wall: {final_pos:?}");
        assert!(final_pos.1 > 0.5 - 1e-5);
    }

    #[test]
    fn detour_around_the_wall_reaches_the_goal() {
        // Eight diagonal steps to (0.15, 0.5), nine to (0.5, 0.95).
        let dom = domain();
        let mut commands = Vec::new();
        for _ in 0..8 {
            commands.extend([-0.875, 1.0]);
        }
        for _ in 0..9 {
            commands.extend([0.35 / 0.45, 1.0]);
        }
        for _ in 0..3 {
            commands.extend([0.0, 0.0]);
        }
        let e = dom.evaluate(&Genome::Real(commands)).unwrap();
        assert!(e.fitness > -0.05, "distance to goal {}", -e.fitness);
    }

    #[test]
    fn trajectories_never_cross_the_wall() {
        let dom = domain();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..2000 {
            let commands: Vec<f64> = (0..40).map(|_| rng.random_range(-1.0..1.0)).collect();
            let trajectory = dom.simulate(&commands).unwrap();
            for pair in trajectory.windows(2) {
                assert!(
                    !crosses_wall(pair[0], pair[1], dom.world()),
                    "segment {pair:?} crosses the wall"
                );
            }
            let e = dom.evaluate(&Genome::Real(commands)).unwrap();
            assert!(e.fitness <= 0.0 && e.fitness >= -std::f64::consts::SQRT_2);
            assert!(e.descriptor.values().iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }

    #[test]
    fn wrong_command_length_is_rejected() {
        let dom = domain();
        assert!(dom.evaluate(&Genome::Real(vec![0.0; 7])).is_err());
    }
}
