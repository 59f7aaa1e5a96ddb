//! Benchmark problem definitions.

pub mod arm;
pub mod cppn;
pub mod maze;
pub mod sphere;

pub use arm::{ArmDomain, ArmParams};
pub use cppn::{CppnGenome, CppnImageDomain, CppnMutationRates, GrayImage};
pub use maze::{MazeDomain, MazeWorld};
pub use sphere::SphereDomain;
