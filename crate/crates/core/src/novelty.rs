//! Novelty scoring and the unstructured behavior archive.

use crate::error::{QdError, Result};
use crate::types::{Descriptor, Elite};

/// Mean Euclidean distance from `query` to its `k` nearest references.
///
/// With fewer than `k` references the mean runs over all of them; with no
/// references at all the query is maximally novel and the score is
/// `+infinity`.
pub fn novelty_score<'a, R>(query: &Descriptor, refs: R, k: usize) -> Result<f64>
where
    R: IntoIterator<Item = &'a Descriptor>,
{
    if k == 0 {
        return Err(QdError::InvalidInput("k must be >= 1".into()));
    }
    let mut dists: Vec<f64> = refs.into_iter().map(|r| query.euclidean(r)).collect();
    if dists.is_empty() {
        return Ok(f64::INFINITY);
    }
    let take = k.min(dists.len());
    if dists.len() > take {
        dists.select_nth_unstable_by(take - 1, f64::total_cmp);
        dists.truncate(take);
    }
    // Sum in ascending order so the result is bit-identical to a
    // sort-all-distances computation.
    dists.sort_unstable_by(f64::total_cmp);
    Ok(dists.iter().sum::<f64>() / take as f64)
}

/// One admitted behavior, optionally with the solution that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct NoveltyEntry {
    pub descriptor: Descriptor,
    pub elite: Option<Elite>,
}

/// Unstructured archive of past behaviors with threshold admission.
///
/// Entries appear in admission order and are never removed.
#[derive(Debug, Clone, PartialEq)]
pub struct NoveltyArchive {
    entries: Vec<NoveltyEntry>,
    rho: f64,
    k: usize,
}

impl NoveltyArchive {
    pub fn new(rho: f64, k: usize) -> Result<Self> {
        if !rho.is_finite() || rho <= 0.0 {
            return Err(QdError::InvalidInput("rho must be > 0".into()));
        }
        if k == 0 {
            return Err(QdError::InvalidInput("k must be >= 1".into()));
        }
        Ok(NoveltyArchive { entries: Vec::new(), rho, k })
    }

    /// Rebuild an archive from previously admitted entries.
    pub fn from_parts(rho: f64, k: usize, entries: Vec<NoveltyEntry>) -> Result<Self> {
        let mut archive = NoveltyArchive::new(rho, k)?;
        archive.entries = entries;
        Ok(archive)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[NoveltyEntry] {
        &self.entries
    }

    pub fn descriptors(&self) -> impl Iterator<Item = &Descriptor> {
        self.entries.iter().map(|e| &e.descriptor)
    }

    /// Novelty of `query` against the archive alone.
    pub fn score(&self, query: &Descriptor) -> Result<f64> {
        novelty_score(query, self.descriptors(), self.k)
    }

    /// Append the behavior iff `score` clears the admission threshold.
    /// `score` must have been computed by [`novelty_score`] against this
    /// archive plus the current population.
    pub fn try_admit(&mut self, descriptor: Descriptor, score: f64, elite: Option<Elite>) -> bool {
        if score > self.rho {
            self.entries.push(NoveltyEntry { descriptor, elite });
            true
        } else {
            false
        }
    }
}
