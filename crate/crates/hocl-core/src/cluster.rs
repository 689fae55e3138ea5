//! Complete-linkage agglomerative clustering under circular phase distance.
//!
//! Distance between two phases is the arc length
//! `d(θ_i, θ_j) = min(|Δ|, 2π − |Δ|)`. Clusters merge while the smallest
//! complete linkage (max cross-pair distance) stays below the cut; among
//! equal linkages the pair whose smallest member indices come first merges
//! first, which makes the partition deterministic.

use crate::error::{Error, Result};
use crate::oscillator::wrap_phase;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Circular distance between two angles, in [0, π].
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (wrap_phase(a) - wrap_phase(b)).abs();
    d.min(TWO_PI - d)
}

/// Partitions unit indices by phase proximity. Returns clusters sorted by
/// their smallest member, members sorted ascending. `cut` must lie in (0, π].
pub fn detect_clusters(phases: &[f64], cut: f64) -> Result<Vec<Vec<usize>>> {
    if phases.is_empty() {
        return Err(Error::InvalidArgument("clustering an empty ensemble".into()));
    }
    if !(cut > 0.0 && cut <= std::f64::consts::PI) {
        return Err(Error::InvalidArgument("cut must lie in (0, pi]".into()));
    }

    let mut clusters: Vec<Vec<usize>> = (0..phases.len()).map(|i| vec![i]).collect();

    let linkage = |a: &[usize], b: &[usize]| -> f64 {
        let mut max = 0.0_f64;
        for &i in a {
            for &j in b {
                max = max.max(circular_distance(phases[i], phases[j]));
            }
        }
        max
    };

    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in (a + 1)..clusters.len() {
                let d = linkage(&clusters[a], &clusters[b]);
                // strict < keeps the earliest (lowest-index) pair on ties
                let better = match best {
                    None => true,
                    Some((bd, _, _)) => d < bd,
                };
                if better {
                    best = Some((d, a, b));
                }
            }
        }
        match best {
            Some((d, a, b)) if d < cut => {
                let merged = clusters.remove(b);
                clusters[a].extend(merged);
                clusters[a].sort_unstable();
            }
            _ => break,
        }
    }

    clusters.sort_by_key(|c| c[0]);
    Ok(clusters)
}

/// Flat cluster label per unit, labels numbered by cluster order.
pub fn cluster_labels(partition: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut labels = vec![0usize; n];
    for (k, members) in partition.iter().enumerate() {
        for &i in members {
            labels[i] = k;
        }
    }
    labels
}
