//! Tessellated elite archives.
//!
//! An [`Archive`] maps niches of descriptor space to at most one [`Elite`]
//! each. Niche membership is decided by a [`NicheIndexer`]: a uniform grid
//! ([`GridIndexer`]) or the nearest centroid of a CVT ([`CvtIndexer`]).
//! Replacement is strict-improvement only, which makes per-niche fitness
//! monotone non-decreasing over any insertion sequence.

use std::collections::BTreeMap;

use crate::error::{QdError, Result};
use crate::types::{Descriptor, Elite};

/// Outcome of offering a candidate to an archive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    /// The niche was empty; the candidate was stored.
    NewCell,
    /// The candidate strictly beat the incumbent and replaced it.
    Improved,
    /// The archive is unchanged (ties keep the incumbent).
    Rejected,
}

/// Maps descriptors to niche indices in `[0, niche_count)`.
pub trait NicheIndexer {
    fn dim(&self) -> usize;
    fn niche_count(&self) -> usize;
    fn niche_of(&self, descriptor: &Descriptor) -> Result<usize>;
}

/// Flat niche index of `descriptor` on a uniform grid.
///
/// Per dimension, `i_j = floor((v_j - lo_j) / (hi_j - lo_j) * b_j)`, clamped
/// to `[0, b_j - 1]`; the top edge `v_j = hi_j` maps into the last bin.
/// Out-of-bounds values land in the edge bins. The flat index is row-major
/// over dimensions.
pub fn grid_index(descriptor: &Descriptor, bounds: &[(f64, f64)], bins: &[usize]) -> Result<usize> {
    if !descriptor.all_finite() {
        return Err(QdError::InvalidInput(
            "descriptor has a non-finite component".into(),
        ));
    }
    if descriptor.dim() != bounds.len() || bounds.len() != bins.len() {
        return Err(QdError::DimensionMismatch {
            expected: bounds.len(),
            actual: descriptor.dim(),
        });
    }
    let mut flat = 0usize;
    for ((&v, &(lo, hi)), &b) in descriptor.values().iter().zip(bounds).zip(bins) {
        if b == 0 {
            return Err(QdError::InvalidInput("bin count must be >= 1".into()));
        }
        let cell = if hi > lo {
            let t = (v - lo) / (hi - lo) * b as f64;
            (t.floor() as i64).clamp(0, b as i64 - 1) as usize
        } else {
            0
        };
        flat = flat * b + cell;
    }
    Ok(flat)
}

/// Index of the centroid nearest to `descriptor`; ties break toward the
/// lowest index.
pub fn nearest_centroid(descriptor: &Descriptor, centroids: &[Vec<f64>]) -> Result<usize> {
    if centroids.is_empty() {
        return Err(QdError::InvalidInput("no centroids".into()));
    }
    if !descriptor.all_finite() {
        return Err(QdError::InvalidInput(
            "descriptor has a non-finite component".into(),
        ));
    }
    let q = descriptor.values();
    let mut best = 0usize;
    let mut best_d2 = f64::INFINITY;
    for (i, c) in centroids.iter().enumerate() {
        if c.len() != q.len() {
            return Err(QdError::DimensionMismatch {
                expected: q.len(),
                actual: c.len(),
            });
        }
        let d2: f64 = q.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum();
        if d2 < best_d2 {
            best_d2 = d2;
            best = i;
        }
    }
    Ok(best)
}

/// Uniform grid over a bounded descriptor space.
#[derive(Debug, Clone, PartialEq)]
pub struct GridIndexer {
    bounds: Vec<(f64, f64)>,
    bins: Vec<usize>,
}

impl GridIndexer {
    pub fn new(bounds: Vec<(f64, f64)>, bins: Vec<usize>) -> Result<Self> {
        if bounds.len() != bins.len() || bounds.is_empty() {
            return Err(QdError::InvalidInput(
                "bounds and bins must be non-empty and of equal length".into(),
            ));
        }
        if bins.contains(&0) {
            return Err(QdError::InvalidInput("bin counts must be >= 1".into()));
        }
        if bounds.iter().any(|&(lo, hi)| !lo.is_finite() || !hi.is_finite() || lo >= hi) {
            return Err(QdError::InvalidInput(
                "each bound must satisfy lo < hi and be finite".into(),
            ));
        }
        Ok(GridIndexer { bounds, bins })
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn bins(&self) -> &[usize] {
        &self.bins
    }
}

impl NicheIndexer for GridIndexer {
    fn dim(&self) -> usize {
        self.bounds.len()
    }

    fn niche_count(&self) -> usize {
        self.bins.iter().product()
    }

    fn niche_of(&self, descriptor: &Descriptor) -> Result<usize> {
        grid_index(descriptor, &self.bounds, &self.bins)
    }
}

/// Niche partition defined by the nearest of `k` centroids.
#[derive(Debug, Clone, PartialEq)]
pub struct CvtIndexer {
    centroids: Vec<Vec<f64>>,
}

impl CvtIndexer {
    pub fn new(centroids: Vec<Vec<f64>>) -> Result<Self> {
        if centroids.is_empty() {
            return Err(QdError::InvalidInput("no centroids".into()));
        }
        let d = centroids[0].len();
        if d == 0 {
            return Err(QdError::InvalidInput("centroids must be non-empty points".into()));
        }
        for c in &centroids {
            if c.len() != d {
                return Err(QdError::DimensionMismatch { expected: d, actual: c.len() });
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(QdError::InvalidInput("non-finite centroid component".into()));
            }
        }
        Ok(CvtIndexer { centroids })
    }

    pub fn centroids(&self) -> &[Vec<f64>] {
        &self.centroids
    }
}

impl NicheIndexer for CvtIndexer {
    fn dim(&self) -> usize {
        self.centroids[0].len()
    }

    fn niche_count(&self) -> usize {
        self.centroids.len()
    }

    fn niche_of(&self, descriptor: &Descriptor) -> Result<usize> {
        nearest_centroid(descriptor, &self.centroids)
    }
}

/// Coverage and QD-score of an archive under declared fitness bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchiveMetrics {
    /// Filled niches / total niches, in `[0, 1]`.
    pub coverage: f64,
    /// Sum over filled niches of `(fitness - f_min) / (f_max - f_min)`.
    pub qd_score: f64,
}

/// Elite archive over the niches of `I`.
///
/// Reads are pure; `try_insert` is the single mutating entry point and must
/// be serialized by the caller.
#[derive(Debug, Clone, PartialEq)]
pub struct Archive<I> {
    indexer: I,
    cells: BTreeMap<usize, Elite>,
}

pub type GridArchive = Archive<GridIndexer>;
pub type CvtArchive = Archive<CvtIndexer>;

impl<I: NicheIndexer> Archive<I> {
    pub fn new(indexer: I) -> Self {
        Archive { indexer, cells: BTreeMap::new() }
    }

    /// Rebuild an archive from stored cells, re-checking that every elite
    /// still indexes to its own niche.
    pub fn from_cells(indexer: I, cells: impl IntoIterator<Item = (usize, Elite)>) -> Result<Self> {
        let mut archive = Archive::new(indexer);
        for (niche, elite) in cells {
            let derived = archive.indexer.niche_of(elite.descriptor())?;
            if derived != niche {
                return Err(QdError::InvalidInput(format!(
                    "stored elite for niche {niche} indexes to niche {derived}"
                )));
            }
            archive.cells.insert(niche, elite);
        }
        Ok(archive)
    }

    pub fn indexer(&self) -> &I {
        &self.indexer
    }

    pub fn niche_count(&self) -> usize {
        self.indexer.niche_count()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, niche: usize) -> Option<&Elite> {
        self.cells.get(&niche)
    }

    /// Filled cells in ascending niche order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, &Elite)> {
        self.cells.iter().map(|(&k, v)| (k, v))
    }

    /// Filled niche indices in ascending order.
    pub fn filled_niches(&self) -> Vec<usize> {
        self.cells.keys().copied().collect()
    }

    /// Highest-fitness elite; ties break toward the lowest niche index.
    pub fn best(&self) -> Option<(usize, &Elite)> {
        let mut best: Option<(usize, &Elite)> = None;
        for (&niche, elite) in &self.cells {
            match best {
                Some((_, b)) if elite.fitness() <= b.fitness() => {}
                _ => best = Some((niche, elite)),
            }
        }
        best
    }

    /// Offer `candidate` to its niche. The niche keeps the incumbent unless
    /// the candidate's fitness is strictly higher.
    pub fn try_insert(&mut self, candidate: Elite) -> Result<InsertOutcome> {
        let niche = self.indexer.niche_of(candidate.descriptor())?;
        match self.cells.get_mut(&niche) {
            None => {
                self.cells.insert(niche, candidate);
                Ok(InsertOutcome::NewCell)
            }
            Some(incumbent) => {
                if candidate.fitness() > incumbent.fitness() {
                    *incumbent = candidate;
                    Ok(InsertOutcome::Improved)
                } else {
                    Ok(InsertOutcome::Rejected)
                }
            }
        }
    }

    /// Coverage and QD-score under `(f_min, f_max)` fitness bounds.
    pub fn metrics(&self, fitness_bounds: (f64, f64)) -> ArchiveMetrics {
        let (f_min, f_max) = fitness_bounds;
        debug_assert!(f_max > f_min, "fitness bounds must satisfy f_max > f_min");
        let range = f_max - f_min;
        let qd_score = self
            .cells
            .values()
            .map(|e| ((e.fitness() - f_min) / range).clamp(0.0, 1.0))
            .sum();
        ArchiveMetrics {
            coverage: self.cells.len() as f64 / self.niche_count() as f64,
            qd_score,
        }
    }
}
