//! Sparse graphs from hyperbolic distances.
//!
//! The neighborhood of unit `i` is `N_i = {j : d(z_i, z_j) < δ}`, so `i ∈ N_i`
//! always (`d = 0 < δ`). With a `k_cap` only the `k` nearest survive, ties
//! broken toward the lower index; capping can make the relation directionally
//! asymmetric. Neighbor search is deliberately naive O(N²) pairwise distance:
//! correct at any scale this crate targets, with per-row work parallelized.

use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::PoincarePoint;
use serde::{Deserialize, Serialize};

/// Per-unit sorted neighbor lists plus the construction parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseGraph {
    neighborhoods: Vec<Vec<usize>>,
    delta: f64,
    k_cap: Option<usize>,
}

impl SparseGraph {
    pub fn len(&self) -> usize {
        self.neighborhoods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighborhoods.is_empty()
    }

    /// Sorted neighbor indices of unit `i` (always contains `i` itself
    /// unless a cap of 0 were possible, which construction rejects).
    pub fn neighborhood(&self, i: usize) -> &[usize] {
        &self.neighborhoods[i]
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn k_cap(&self) -> Option<usize> {
        self.k_cap
    }

    /// Membership test `j ∈ N_i` (binary search over the sorted list).
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.neighborhoods[i].binary_search(&j).is_ok()
    }

    /// Total directed neighborhood entries Σ|N_i|.
    pub fn total_entries(&self) -> usize {
        self.neighborhoods.iter().map(|n| n.len()).sum()
    }

    pub fn max_degree(&self) -> usize {
        self.neighborhoods.iter().map(|n| n.len()).max().unwrap_or(0)
    }
}

/// Builds the threshold graph over the embeddings, optionally capped at the
/// `k_cap` nearest per unit.
pub fn build_graph(
    embeddings: &[PoincarePoint],
    delta: f64,
    k_cap: Option<usize>,
) -> Result<SparseGraph> {
    if embeddings.is_empty() {
        return Err(Error::InvalidArgument("graph over zero embeddings".into()));
    }
    crate::error::ensure_positive("delta", delta)?;
    if let Some(k) = k_cap {
        if k == 0 {
            return Err(Error::InvalidArgument("k_cap must be >= 1".into()));
        }
    }
    let dim = embeddings[0].dim();
    for (i, z) in embeddings.iter().enumerate() {
        if z.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "embedding {i} has dim {} vs {dim}",
                z.dim()
            )));
        }
    }

    let n = embeddings.len();
    // one pass of 1 − ‖z‖² per point; the per-pair distance below is then
    // bit-identical to hyperbolic_distance but avoids recomputing norms
    let denom: Vec<f64> = embeddings
        .iter()
        .map(|z| 1.0 - z.coords().iter().map(|c| c * c).sum::<f64>())
        .collect();
    let neighborhoods = exec::map_units(n, |i| {
        let zi = embeddings[i].coords();
        let mut within: Vec<(f64, usize)> = Vec::new();
        for (j, z) in embeddings.iter().enumerate() {
            let diff_sq: f64 =
                zi.iter().zip(z.coords()).map(|(a, b)| (a - b) * (a - b)).sum();
            let t = 2.0 * diff_sq / (denom[i] * denom[j]);
            let d = (t + (t * (t + 2.0)).sqrt()).ln_1p();
            if d < delta {
                within.push((d, j));
            }
        }
        if let Some(k) = k_cap {
            if within.len() > k {
                // nearest first, ties toward the lower index
                within.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
                within.truncate(k);
            }
        }
        let mut idx: Vec<usize> = within.into_iter().map(|(_, j)| j).collect();
        idx.sort_unstable();
        idx
    });

    Ok(SparseGraph { neighborhoods, delta, k_cap })
}

/// Edge density Σ|N_i| / N² in (0, 1].
pub fn density(graph: &SparseGraph) -> f64 {
    let n = graph.len();
    graph.total_entries() as f64 / (n * n) as f64
}
