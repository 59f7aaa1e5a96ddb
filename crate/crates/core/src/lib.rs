//! Quality-diversity optimization toolkit.
//!
//! The crate provides tessellated elite archives (uniform grids and
//! centroidal Voronoi tessellations), novelty archives, real-vector and
//! graph-based genomes with their variation operators, three search engines
//! (MAP-Elites, novelty search with optional local competition, and an
//! elitist objective GA), a set of benchmark domains, and a Gaussian-process
//! adaptation loop that recovers a working solution from a precomputed
//! archive after a damage event.
//!
//! Everything is deterministic: random draws come from per-candidate
//! substreams derived from a master seed and a global candidate counter, so
//! results do not depend on evaluation parallelism.

pub mod adapt;
pub mod archive;
pub mod cvt;
pub mod domain;
pub mod domains;
pub mod engines;
pub mod error;
pub mod novelty;
pub mod rng;
pub mod types;
pub mod variation;

pub use error::QdError;
pub use types::{Descriptor, Elite, Evaluation, Genome};
