//! Compositional pattern networks rendered over image coordinates.
//!
//! A genome is a weighted acyclic graph of scalar functions fed by the four
//! coordinate inputs `(x, y, r, bias)`. Querying the graph for every pixel
//! of a grid turns the function's structure into spatial structure: an
//! even dependence on `x` yields a mirror-symmetric image, a periodic node
//! yields repetition.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::domain::{Domain, GenomeSpec};
use crate::error::{QdError, Result};
use crate::types::{Descriptor, Evaluation, Genome};
use crate::variation::VariationConfig;

/// Hidden/output node activations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Linear,
    Sine,
    Gaussian,
    Sigmoid,
    Absolute,
}

impl Activation {
    pub const ALL: [Activation; 5] = [
        Activation::Linear,
        Activation::Sine,
        Activation::Gaussian,
        Activation::Sigmoid,
        Activation::Absolute,
    ];

    pub fn apply(self, s: f64) -> f64 {
        match self {
            Activation::Linear => s,
            Activation::Sine => (PI * s).sin(),
            Activation::Gaussian => (-0.5 * s * s).exp(),
            Activation::Sigmoid => sigmoid(s),
            Activation::Absolute => s.abs(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Linear => "linear",
            Activation::Sine => "sine",
            Activation::Gaussian => "gaussian",
            Activation::Sigmoid => "sigmoid",
            Activation::Absolute => "absolute",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Activation::ALL.into_iter().find(|a| a.name() == name)
    }

    fn random(rng: &mut ChaCha8Rng) -> Self {
        Activation::ALL[rng.random_range(0..Activation::ALL.len())]
    }
}

pub fn sigmoid(s: f64) -> f64 {
    1.0 / (1.0 + (-s).exp())
}

/// Coordinate inputs, in the fixed order they are fed per pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CppnInput {
    X,
    Y,
    R,
    Bias,
}

impl CppnInput {
    pub const ALL: [CppnInput; 4] = [CppnInput::X, CppnInput::Y, CppnInput::R, CppnInput::Bias];

    pub fn name(self) -> &'static str {
        match self {
            CppnInput::X => "x",
            CppnInput::Y => "y",
            CppnInput::R => "r",
            CppnInput::Bias => "bias",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        CppnInput::ALL.into_iter().find(|i| i.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CppnNode {
    Input(CppnInput),
    Computed(Activation),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CppnEdge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

pub const WEIGHT_LIMIT: f64 = 3.0;

/// Weighted function-composition DAG with a single output node. Computed
/// nodes apply their activation to the weighted sum of incoming values.
#[derive(Debug, Clone, PartialEq)]
pub struct CppnGenome {
    pub nodes: Vec<CppnNode>,
    pub edges: Vec<CppnEdge>,
    pub output: usize,
}

impl CppnGenome {
    /// Four inputs wired straight to one output node with random weights
    /// and a random output activation.
    pub fn minimal(rng: &mut ChaCha8Rng) -> Self {
        let mut nodes: Vec<CppnNode> = CppnInput::ALL.iter().map(|&i| CppnNode::Input(i)).collect();
        nodes.push(CppnNode::Computed(Activation::random(rng)));
        let output = nodes.len() - 1;
        let edges = (0..4)
            .map(|src| CppnEdge { src, dst: output, weight: random_weight(rng) })
            .collect();
        CppnGenome { nodes, edges, output }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Structural validity: one computed output, edges between existing
    /// nodes ending on computed nodes, finite clamped weights, no duplicate
    /// connections, and an acyclic graph.
    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        if !matches!(self.nodes.get(self.output), Some(CppnNode::Computed(_))) {
            return Err(QdError::InvalidInput("output must be a computed node".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.edges {
            if e.src >= n || e.dst >= n {
                return Err(QdError::InvalidInput("edge endpoint out of range".into()));
            }
            if matches!(self.nodes[e.dst], CppnNode::Input(_)) {
                return Err(QdError::InvalidInput("edge ends on an input node".into()));
            }
            if !e.weight.is_finite() || e.weight.abs() > WEIGHT_LIMIT {
                return Err(QdError::InvalidInput(format!("weight {} out of range", e.weight)));
            }
            if !seen.insert((e.src, e.dst)) {
                return Err(QdError::InvalidInput(format!(
                    "duplicate connection {} -> {}",
                    e.src, e.dst
                )));
            }
        }
        self.topo_order()?;
        Ok(())
    }

    /// Topological order over all nodes, lowest id first among ready nodes.
    /// Errors when the graph contains a cycle.
    pub fn topo_order(&self) -> Result<Vec<usize>> {
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        for e in &self.edges {
            indegree[e.dst] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut done = vec![false; n];
        while order.len() < n {
            let Some(next) = (0..n).find(|&i| !done[i] && indegree[i] == 0) else {
                return Err(QdError::InvalidInput("cycle in graph".into()));
            };
            done[next] = true;
            order.push(next);
            for e in &self.edges {
                if e.src == next {
                    indegree[e.dst] -= 1;
                }
            }
        }
        Ok(order)
    }
}

fn random_weight(rng: &mut ChaCha8Rng) -> f64 {
    let w: f64 = StandardNormal.sample(rng);
    w.clamp(-WEIGHT_LIMIT, WEIGHT_LIMIT)
}

/// Row-major 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(QdError::DimensionMismatch {
                expected: width * height,
                actual: pixels.len(),
            });
        }
        Ok(GrayImage { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn mean_intensity(&self) -> f64 {
        self.pixels.iter().map(|&p| p as f64).sum::<f64>() / self.pixels.len() as f64
    }

    /// Mean absolute difference between the image and its horizontal
    /// mirror, normalized to `[0, 1]`.
    pub fn mirror_error(&self) -> f64 {
        let mut sum = 0.0;
        for y in 0..self.height {
            for x in 0..self.width {
                let d = self.get(x, y) as f64 - self.get(self.width - 1 - x, y) as f64;
                sum += d.abs();
            }
        }
        sum / (self.pixels.len() as f64 * 255.0)
    }
}

/// Pixel-center coordinates `-1 + 2i/(n-1)`, computed as one correctly
/// rounded division so that `axis[n-1-i] == -axis[i]` holds bitwise.
pub fn pixel_axis(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (2 * i as i64 - (n as i64 - 1)) as f64 / (n as f64 - 1.0))
        .collect()
}

/// Render the genome over a `width x height` pixel grid.
///
/// Per pixel the graph is fed `(x, y, r, 1)` and evaluated in topological
/// order; the output value goes through a sigmoid and is quantized
/// round-half-up to `[0, 255]`.
pub fn cppn_render(genome: &CppnGenome, width: usize, height: usize) -> Result<GrayImage> {
    if width < 2 || height < 2 {
        return Err(QdError::InvalidInput("image must be at least 2x2".into()));
    }
    let order = genome.topo_order()?;
    let n = genome.nodes.len();

    // Incoming edges grouped per node, in stable edge order.
    let mut incoming: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in &genome.edges {
        incoming[e.dst].push((e.src, e.weight));
    }

    let xs = pixel_axis(width);
    let ys = pixel_axis(height);
    let mut values = vec![0.0f64; n];
    let mut pixels = Vec::with_capacity(width * height);
    for &y in &ys {
        for &x in &xs {
            let r = (x * x + y * y).sqrt();
            for &id in &order {
                values[id] = match genome.nodes[id] {
                    CppnNode::Input(CppnInput::X) => x,
                    CppnNode::Input(CppnInput::Y) => y,
                    CppnNode::Input(CppnInput::R) => r,
                    CppnNode::Input(CppnInput::Bias) => 1.0,
                    CppnNode::Computed(act) => {
                        let sum: f64 =
                            incoming[id].iter().map(|&(src, w)| w * values[src]).sum();
                        act.apply(sum)
                    }
                };
            }
            pixels.push(quantize(values[genome.output]));
        }
    }
    GrayImage::new(width, height, pixels)
}

/// Sigmoid squash followed by round-half-up quantization to `[0, 255]`.
fn quantize(v: f64) -> u8 {
    (sigmoid(v) * 255.0 + 0.5).floor() as u8
}

/// Structural mutation rates.
#[derive(Debug, Clone, PartialEq)]
pub struct CppnMutationRates {
    /// Per-edge probability of a weight perturbation.
    pub p_weight: f64,
    /// Standard deviation of the weight perturbation.
    pub weight_sigma: f64,
    /// Probability of adding one connection between topologically ordered,
    /// non-adjacent nodes.
    pub p_add_connection: f64,
    /// Probability of splitting one edge with a new node.
    pub p_add_node: f64,
    /// Probability of re-drawing one computed node's activation.
    pub p_activation: f64,
}

impl Default for CppnMutationRates {
    fn default() -> Self {
        CppnMutationRates {
            p_weight: 0.8,
            weight_sigma: 0.3,
            p_add_connection: 0.1,
            p_add_node: 0.05,
            p_activation: 0.05,
        }
    }
}

/// Apply the structural mutation kinds independently; acyclicity is
/// preserved by construction (new connections only run forward in the
/// topological order, node insertion splits an existing edge).
pub fn cppn_mutate(
    genome: &CppnGenome,
    rates: &CppnMutationRates,
    rng: &mut ChaCha8Rng,
) -> CppnGenome {
    let mut child = genome.clone();

    for e in &mut child.edges {
        let gate: f64 = rng.random();
        if gate < rates.p_weight {
            let n: f64 = StandardNormal.sample(rng);
            e.weight = (e.weight + n * rates.weight_sigma).clamp(-WEIGHT_LIMIT, WEIGHT_LIMIT);
        }
    }

    let gate: f64 = rng.random();
    if gate < rates.p_add_connection {
        let order = child.topo_order().expect("mutation input must be acyclic");
        let mut candidates = Vec::new();
        for (ai, &a) in order.iter().enumerate() {
            for &b in &order[ai + 1..] {
                if matches!(child.nodes[b], CppnNode::Computed(_))
                    && !child.edges.iter().any(|e| e.src == a && e.dst == b)
                {
                    candidates.push((a, b));
                }
            }
        }
        if !candidates.is_empty() {
            let (src, dst) = candidates[rng.random_range(0..candidates.len())];
            child.edges.push(CppnEdge { src, dst, weight: random_weight(rng) });
        }
    }

    let gate: f64 = rng.random();
    if gate < rates.p_add_node && !child.edges.is_empty() {
        let idx = rng.random_range(0..child.edges.len());
        let old = child.edges.remove(idx);
        child.nodes.push(CppnNode::Computed(Activation::random(rng)));
        let mid = child.nodes.len() - 1;
        child.edges.push(CppnEdge { src: old.src, dst: mid, weight: 1.0 });
        child.edges.push(CppnEdge { src: mid, dst: old.dst, weight: old.weight });
    }

    let gate: f64 = rng.random();
    if gate < rates.p_activation {
        let computed: Vec<usize> = child
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n, CppnNode::Computed(_)))
            .map(|(i, _)| i)
            .collect();
        let id = computed[rng.random_range(0..computed.len())];
        child.nodes[id] = CppnNode::Computed(Activation::random(rng));
    }

    child
}

/// A random genome grown from the minimal topology by `steps` mutations.
/// Used to generate held-out target images.
pub fn random_cppn(seed: u64, steps: usize) -> CppnGenome {
    let mut rng = crate::rng::substream(seed, 0);
    let rates = CppnMutationRates {
        p_add_connection: 0.3,
        p_add_node: 0.25,
        p_activation: 0.2,
        ..Default::default()
    };
    let mut genome = CppnGenome::minimal(&mut rng);
    for _ in 0..steps {
        genome = cppn_mutate(&genome, &rates, &mut rng);
    }
    genome
}

/// A held-out random target genome with pronounced spatial structure:
/// stripes from a sine over a random direction, modulated by a radial
/// blob, with all weights drawn from the seeded stream. Phase-aligned
/// periodic targets are the hard case for direct pixel matching.
pub fn random_structured_cppn(seed: u64) -> CppnGenome {
    let mut rng = crate::rng::substream(seed, 1);
    let mut uniform = |lo: f64, hi: f64| rng.random_range(lo..hi);
    let mut nodes: Vec<CppnNode> = CppnInput::ALL.iter().map(|&i| CppnNode::Input(i)).collect();
    nodes.push(CppnNode::Computed(Activation::Sine)); // 4: stripes
    nodes.push(CppnNode::Computed(Activation::Gaussian)); // 5: radial blob
    nodes.push(CppnNode::Computed(Activation::Linear)); // 6: mix
    CppnGenome {
        nodes,
        edges: vec![
            CppnEdge { src: 0, dst: 4, weight: uniform(1.6, 2.6) },
            CppnEdge { src: 1, dst: 4, weight: uniform(0.2, 0.8) },
            CppnEdge { src: 2, dst: 5, weight: uniform(1.2, 2.0) },
            CppnEdge { src: 4, dst: 6, weight: uniform(1.8, 2.8) },
            CppnEdge { src: 5, dst: 6, weight: uniform(-2.2, -1.2) },
            CppnEdge { src: 3, dst: 6, weight: uniform(-0.5, 0.8) },
        ],
        output: 6,
    }
}

/// Fitness is the negated mean absolute pixel error against `target`,
/// normalized to `[-1, 0]`; the descriptor is (mean intensity, horizontal
/// symmetry), both in `[0, 1]`.
pub fn cppn_image_evaluate(genome: &CppnGenome, target: &GrayImage) -> Result<Evaluation> {
    let render = cppn_render(genome, target.width(), target.height())?;
    let n = target.pixels().len() as f64;
    let abs_err: f64 = render
        .pixels()
        .iter()
        .zip(target.pixels())
        .map(|(&a, &b)| (a as f64 - b as f64).abs())
        .sum();
    let fitness = -(abs_err / n) / 255.0;
    let descriptor = Descriptor::new(vec![
        render.mean_intensity() / 255.0,
        1.0 - render.mirror_error(),
    ]);
    Ok(Evaluation { fitness, descriptor })
}

/// Target-image matching domain over CPPN genomes.
#[derive(Debug, Clone)]
pub struct CppnImageDomain {
    target: GrayImage,
    rates: CppnMutationRates,
}

impl CppnImageDomain {
    pub fn new(target: GrayImage) -> Result<Self> {
        if target.width() < 2 || target.height() < 2 {
            return Err(QdError::InvalidInput("target must be at least 2x2".into()));
        }
        Ok(CppnImageDomain { target, rates: CppnMutationRates::default() })
    }

    pub fn target(&self) -> &GrayImage {
        &self.target
    }
}

impl Domain for CppnImageDomain {
    fn name(&self) -> &str {
        "cppn_image"
    }

    fn genome_spec(&self) -> GenomeSpec {
        GenomeSpec::Cppn
    }

    fn descriptor_dim(&self) -> usize {
        2
    }

    fn descriptor_bounds(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 1.0), (0.0, 1.0)]
    }

    fn fitness_bounds(&self) -> (f64, f64) {
        (-1.0, 0.0)
    }

    fn random_genome(&self, rng: &mut ChaCha8Rng) -> Genome {
        Genome::Cppn(CppnGenome::minimal(rng))
    }

    /// Graph genomes mutate a single parent; no crossover.
    fn vary(
        &self,
        a: &Genome,
        _b: &Genome,
        _cfg: &VariationConfig,
        rng: &mut ChaCha8Rng,
    ) -> Result<Genome> {
        let g = a
            .as_cppn()
            .ok_or_else(|| QdError::InvalidInput("cppn_image expects graph genomes".into()))?;
        Ok(Genome::Cppn(cppn_mutate(g, &self.rates, rng)))
    }

    fn evaluate(&self, genome: &Genome) -> Result<Evaluation> {
        let g = genome
            .as_cppn()
            .ok_or_else(|| QdError::InvalidInput("cppn_image expects graph genomes".into()))?;
        cppn_image_evaluate(g, &self.target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    fn inputs() -> Vec<CppnNode> {
        CppnInput::ALL.iter().map(|&i| CppnNode::Input(i)).collect()
    }

    #[test]
    fn bias_only_genome_renders_mid_gray() {
        let mut nodes = inputs();
        nodes.push(CppnNode::Computed(Activation::Linear));
        let genome = CppnGenome {
            nodes,
            edges: vec![CppnEdge { src: 3, dst: 4, weight: 0.0 }],
            output: 4,
        };
        let img = cppn_render(&genome, 8, 8).unwrap();
        assert!(img.pixels().iter().all(|&p| p == 128));
    }

    #[test]
    fn abs_wrapped_x_renders_mirror_symmetric() {
        // x feeds an absolute node; every other path is x-free, so
        // f(x, y) = f(-x, y) and the render must mirror bitwise.
        for w in [16usize, 17, 64] {
            let mut nodes = inputs();
            nodes.push(CppnNode::Computed(Activation::Absolute));
            nodes.push(CppnNode::Computed(Activation::Sine));
            let genome = CppnGenome {
                nodes,
                edges: vec![
                    CppnEdge { src: 0, dst: 4, weight: 1.7 },
                    CppnEdge { src: 4, dst: 5, weight: 0.9 },
                    CppnEdge { src: 1, dst: 5, weight: -0.6 },
                    CppnEdge { src: 3, dst: 5, weight: 0.2 },
                ],
                output: 5,
            };
            let img = cppn_render(&genome, w, 12).unwrap();
            for y in 0..12 {
                for x in 0..w {
                    assert_eq!(
                        img.get(x, y),
                        img.get(w - 1 - x, y),
                        "asymmetry at ({x}, {y}) for width {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn composed_graph_matches_direct_formula() {
        // sine(0.8*gaussian(1.3*x) - 0.5*|y| + 0.25*bias), squashed and
        // quantized, recomputed per pixel from the closed form.
        let mut nodes = inputs();
        nodes.push(CppnNode::Computed(Activation::Gaussian)); // 4
        nodes.push(CppnNode::Computed(Activation::Absolute)); // 5
        nodes.push(CppnNode::Computed(Activation::Sine)); // 6
        let genome = CppnGenome {
            nodes,
            edges: vec![
                CppnEdge { src: 0, dst: 4, weight: 1.3 },
                CppnEdge { src: 1, dst: 5, weight: 1.0 },
                CppnEdge { src: 4, dst: 6, weight: 0.8 },
                CppnEdge { src: 5, dst: 6, weight: -0.5 },
                CppnEdge { src: 3, dst: 6, weight: 0.25 },
            ],
            output: 6,
        };
        let (w, h) = (33, 21);
        let img = cppn_render(&genome, w, h).unwrap();
        let xs = pixel_axis(w);
        let ys = pixel_axis(h);
        for (j, &y) in ys.iter().enumerate() {
            for (i, &x) in xs.iter().enumerate() {
                let gauss = (-0.5 * (1.3 * x) * (1.3 * x)).exp();
                let v = (PI * (0.8 * gauss + -0.5 * y.abs() + 0.25)).sin();
                let want = (sigmoid(v) * 255.0 + 0.5).floor() as u8;
                assert_eq!(img.get(i, j), want, "pixel ({i}, {j})");
            }
        }
    }

    #[test]
    fn zero_rates_leave_the_genome_unchanged() {
        let genome = CppnGenome::minimal(&mut substream(1, 0));
        let rates = CppnMutationRates {
            p_weight: 0.0,
            p_add_connection: 0.0,
            p_add_node: 0.0,
            p_activation: 0.0,
            ..Default::default()
        };
        let child = cppn_mutate(&genome, &rates, &mut substream(1, 1));
        assert_eq!(child, genome);
    }

    #[test]
    fn forced_node_insertion_splits_an_edge() {
        let mut nodes = inputs();
        nodes.push(CppnNode::Computed(Activation::Linear));
        let genome = CppnGenome {
            nodes,
            edges: vec![CppnEdge { src: 3, dst: 4, weight: -1.25 }],
            output: 4,
        };
        let rates = CppnMutationRates {
            p_weight: 0.0,
            p_add_connection: 0.0,
            p_add_node: 1.0,
            p_activation: 0.0,
            ..Default::default()
        };
        let child = cppn_mutate(&genome, &rates, &mut substream(2, 0));
        assert_eq!(child.node_count(), genome.node_count() + 1);
        assert_eq!(child.edge_count(), genome.edge_count() + 1);
        // Incoming weight 1, outgoing weight inherited.
        let mid = child.nodes.len() - 1;
        let incoming = child.edges.iter().find(|e| e.dst == mid).unwrap();
        let outgoing = child.edges.iter().find(|e| e.src == mid).unwrap();
        assert_eq!(incoming.weight, 1.0);
        assert_eq!(outgoing.weight, -1.25);
        child.validate().unwrap();
    }

    #[test]
    fn chained_mutations_keep_genomes_valid() {
        let mut genome = CppnGenome::minimal(&mut substream(3, 0));
        let rates = CppnMutationRates::default();
        for i in 0..1000 {
            genome = cppn_mutate(&genome, &rates, &mut substream(3, i + 1));
            genome.validate().unwrap_or_else(|e| panic!("step {i}: {e}"));
        }
        assert!(genome.node_count() > 5, "structure never grew");
    }

    #[test]
    fn image_evaluation_fixed_points() {
        let target = cppn_render(&random_cppn(5, 20), 16, 16).unwrap();
        let domain = CppnImageDomain::new(target.clone()).unwrap();

        // A genome rendering exactly the target scores zero.
        let e = cppn_image_evaluate(&random_cppn(5, 20), &target).unwrap();
        assert_eq!(e.fitness, 0.0);

        // All-black render against an all-white target scores -1. Two
        // chained weight-limit edges push the output to sigmoid(-9), which
        // quantizes to 0.
        let mut nodes = inputs();
        nodes.push(CppnNode::Computed(Activation::Linear));
        nodes.push(CppnNode::Computed(Activation::Linear));
        let very_black = CppnGenome {
            nodes,
            edges: vec![
                CppnEdge { src: 3, dst: 4, weight: 3.0 },
                CppnEdge { src: 4, dst: 5, weight: -3.0 },
            ],
            output: 5,
        };
        let white = GrayImage::new(4, 4, vec![255; 16]).unwrap();
        assert!(cppn_render(&very_black, 4, 4).unwrap().pixels().iter().all(|&p| p == 0));
        let e = cppn_image_evaluate(&very_black, &white).unwrap();
        assert_eq!(e.fitness, -1.0);

        // Mirror-symmetric renders have symmetry descriptor exactly 1.
        let e = domain
            .evaluate(&Genome::Cppn(CppnGenome {
                nodes: {
                    let mut nodes = inputs();
                    nodes.push(CppnNode::Computed(Activation::Absolute));
                    nodes.push(CppnNode::Computed(Activation::Sigmoid));
                    nodes
                },
                edges: vec![
                    CppnEdge { src: 0, dst: 4, weight: 2.0 },
                    CppnEdge { src: 4, dst: 5, weight: 1.0 },
                ],
                output: 5,
            }))
            .unwrap();
        assert_eq!(e.descriptor.values()[1], 1.0);
    }

    #[test]
    fn tiny_renders_are_rejected() {
        let genome = CppnGenome::minimal(&mut substream(4, 0));
        assert!(cppn_render(&genome, 1, 8).is_err());
        assert!(cppn_render(&genome, 8, 1).is_err());
    }
}
