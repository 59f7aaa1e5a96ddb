//! Shared domain types: descriptors, evaluations, genomes and elites.

use crate::domains::cppn::CppnGenome;

/// A point in behavior space. Domains normalize their raw behavior into the
/// declared descriptor bounds before returning it.
#[derive(Debug, Clone, PartialEq)]
pub struct Descriptor(pub Vec<f64>);

impl Descriptor {
    pub fn new(values: Vec<f64>) -> Self {
        Descriptor(values)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn all_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Euclidean distance to another descriptor of the same dimension.
    pub fn euclidean(&self, other: &Descriptor) -> f64 {
        assert_eq!(self.dim(), other.dim(), "descriptor dimensions differ");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl From<Vec<f64>> for Descriptor {
    fn from(values: Vec<f64>) -> Self {
        Descriptor(values)
    }
}

/// The result of evaluating one genome: a scalar fitness (higher is better)
/// plus the behavioral descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub fitness: f64,
    pub descriptor: Descriptor,
}

/// Candidate solution representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Genome {
    /// Bounded real vector.
    Real(Vec<f64>),
    /// Function-composition graph evaluated over image coordinates.
    Cppn(CppnGenome),
}

impl Genome {
    pub fn as_real(&self) -> Option<&[f64]> {
        match self {
            Genome::Real(v) => Some(v),
            Genome::Cppn(_) => None,
        }
    }

    pub fn as_cppn(&self) -> Option<&CppnGenome> {
        match self {
            Genome::Real(_) => None,
            Genome::Cppn(g) => Some(g),
        }
    }
}

/// The best known solution for one niche.
#[derive(Debug, Clone, PartialEq)]
pub struct Elite {
    pub genome: Genome,
    pub evaluation: Evaluation,
}

impl Elite {
    pub fn new(genome: Genome, evaluation: Evaluation) -> Self {
        Elite { genome, evaluation }
    }

    pub fn fitness(&self) -> f64 {
        self.evaluation.fitness
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.evaluation.descriptor
    }
}
