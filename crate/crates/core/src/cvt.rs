//! Centroidal Voronoi tessellation construction.
//!
//! Lloyd's k-means over uniform samples of the bounded descriptor space,
//! seeded by a greedy farthest-point traversal (first seed drawn from the
//! seeded sample stream). The result is deterministic given all inputs and
//! the seed, and is built once per run so the tessellation can be
//! serialized next to the archive.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{QdError, Result};

/// Build `k` CVT centroids inside `bounds` from `n_samples` uniform samples.
///
/// Iterates Lloyd's algorithm until `max_iters` or until no assignment
/// changes; empty clusters are re-seeded to the sample farthest from its
/// current centroid.
pub fn build_cvt(
    k: usize,
    bounds: &[(f64, f64)],
    n_samples: usize,
    max_iters: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let d = bounds.len();
    if k == 0 {
        return Err(QdError::InvalidInput("k must be >= 1".into()));
    }
    if k > n_samples {
        return Err(QdError::InvalidInput(format!(
            "k = {k} exceeds n_samples = {n_samples}"
        )));
    }
    if d == 0 || bounds.iter().any(|&(lo, hi)| !lo.is_finite() || !hi.is_finite() || lo >= hi) {
        return Err(QdError::InvalidInput("bounds must satisfy lo < hi".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = vec![0.0f64; n_samples * d];
    for row in samples.chunks_exact_mut(d) {
        for (v, &(lo, hi)) in row.iter_mut().zip(bounds) {
            *v = rng.random_range(lo..hi);
        }
    }

    let mut centroids = seed_farthest_point(&samples, n_samples, d, k, &mut rng);

    let mut assign = vec![usize::MAX; n_samples];
    for _ in 0..max_iters {
        let (mut new_assign, mut dist2) = assign_nearest(&samples, &centroids, n_samples, d);

        fix_empty_clusters(&mut new_assign, &mut dist2, k);

        let changed = new_assign != assign;
        assign = new_assign;

        // Sequential mean accumulation keeps the result independent of the
        // thread count.
        let mut sums = vec![0.0f64; k * d];
        let mut counts = vec![0usize; k];
        for (s, &a) in samples.chunks_exact(d).zip(&assign) {
            counts[a] += 1;
            for (acc, &v) in sums[a * d..(a + 1) * d].iter_mut().zip(s) {
                *acc += v;
            }
        }
        for (c, (sum, &count)) in centroids
            .iter_mut()
            .zip(sums.chunks_exact(d).zip(&counts))
        {
            debug_assert!(count > 0, "empty cluster survived re-seeding");
            for (ci, &si) in c.iter_mut().zip(sum) {
                *ci = si / count as f64;
            }
        }

        if !changed {
            break;
        }
    }

    Ok(centroids)
}

/// Greedy maximin seeding: start from a random sample, then repeatedly take
/// the sample farthest from the chosen set (ties toward the lowest index).
fn seed_farthest_point(
    samples: &[f64],
    n: usize,
    d: usize,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<f64>> {
    let sample = |i: usize| &samples[i * d..(i + 1) * d];
    let first = rng.random_range(0..n);
    let mut centroids: Vec<Vec<f64>> = vec![sample(first).to_vec()];
    let mut min_d2: Vec<f64> = (0..n).map(|i| dist2(sample(i), sample(first))).collect();
    while centroids.len() < k {
        let mut far = 0;
        for i in 1..n {
            if min_d2[i] > min_d2[far] {
                far = i;
            }
        }
        let chosen = sample(far).to_vec();
        for (i, slot) in min_d2.iter_mut().enumerate() {
            let d2 = dist2(sample(i), &chosen);
            if d2 < *slot {
                *slot = d2;
            }
        }
        centroids.push(chosen);
    }
    centroids
}

/// Per-sample nearest centroid (ties toward the lowest index) plus the
/// squared distance to it. Parallel over samples; output order is fixed.
fn assign_nearest(
    samples: &[f64],
    centroids: &[Vec<f64>],
    n: usize,
    d: usize,
) -> (Vec<usize>, Vec<f64>) {
    let pairs: Vec<(usize, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let s = &samples[i * d..(i + 1) * d];
            let mut best = 0usize;
            let mut best_d2 = f64::INFINITY;
            for (j, c) in centroids.iter().enumerate() {
                let d2 = dist2(s, c);
                if d2 < best_d2 {
                    best_d2 = d2;
                    best = j;
                }
            }
            (best, best_d2)
        })
        .collect();
    pairs.into_iter().unzip()
}

/// Re-seed each empty cluster with the sample farthest from its assigned
/// centroid (the subsequent mean step then moves the centroid onto that
/// sample). Samples that are alone in their cluster stay put.
fn fix_empty_clusters(assign: &mut [usize], dist2s: &mut [f64], k: usize) {
    let n = assign.len();
    let mut counts = vec![0usize; k];
    for &a in assign.iter() {
        counts[a] += 1;
    }
    for cluster in 0..k {
        if counts[cluster] > 0 {
            continue;
        }
        let mut far: Option<usize> = None;
        for i in 0..n {
            if counts[assign[i]] < 2 {
                continue;
            }
            match far {
                Some(f) if dist2s[i] <= dist2s[f] => {}
                _ => far = Some(i),
            }
        }
        let Some(i) = far else { break };
        counts[assign[i]] -= 1;
        counts[cluster] += 1;
        assign[i] = cluster;
        dist2s[i] = 0.0;
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
