//! Dense weighted graphs, clusterings, and the average-linkage clustering graph.
//!
//! Every graph here is complete: a missing edge is an edge of weight zero.
//! Clustering graphs may carry *phantom* vertices, padding copies of a real
//! vertex that share its weight row. Phantom ids start at `n` (the real vertex
//! count) and never leak into a [`Clustering`].

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::Matching;

/// Square symmetric matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Builds a symmetric matrix from `f(i, j)` evaluated for `i < j`.
    /// The diagonal is zero.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds from rows; the caller guarantees the rows form an `n x n` table.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::pre(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(DenseMatrix { n, data })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, w: f64) {
        self.data[i * self.n + j] = w;
        self.data[j * self.n + i] = w;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Largest finite off-diagonal entry, or 0 for graphs with fewer than two vertices.
    pub fn max_offdiag(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let w = self.get(i, j);
                if w.is_finite() && w > best {
                    best = w;
                }
            }
        }
        best
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        DenseMatrix::from_fn(self.n, |i, j| f(self.get(i, j)))
    }
}

/// Whether a weight measures how alike (similarity) or how far apart
/// (dissimilarity) two points are.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Similarity,
    Dissimilarity,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Similarity => "similarity",
            Orientation::Dissimilarity => "dissimilarity",
        })
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "similarity" => Ok(Orientation::Similarity),
            "dissimilarity" => Ok(Orientation::Dissimilarity),
            other => Err(Error::pre(format!("unknown orientation `{other}`"))),
        }
    }
}

/// Complete graph with non-negative symmetric weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    weights: DenseMatrix,
    orientation: Orientation,
    max_weight: f64,
}

impl WeightedGraph {
    pub fn new(weights: DenseMatrix, orientation: Orientation) -> Result<Self> {
        let n = weights.n();
        if n == 0 {
            return Err(Error::pre("graph must have at least one vertex"));
        }
        for i in 0..n {
            if weights.get(i, i) != 0.0 {
                return Err(Error::pre(format!("diagonal entry ({i}, {i}) is non-zero")));
            }
            for j in (i + 1)..n {
                let w = weights.get(i, j);
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::pre(format!(
                        "edge ({i}, {j}) has weight {w}; weights must be finite and non-negative"
                    )));
                }
                if weights.get(j, i) != w {
                    return Err(Error::pre(format!("weights are not symmetric at ({i}, {j})")));
                }
            }
        }
        let max_weight = weights.max_offdiag();
        Ok(WeightedGraph {
            weights,
            orientation,
            max_weight,
        })
    }

    pub fn from_fn(
        n: usize,
        orientation: Orientation,
        f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        WeightedGraph::new(DenseMatrix::from_fn(n, f), orientation)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.weights.n()
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights.get(i, j)
    }

    pub fn weights(&self) -> &DenseMatrix {
        &self.weights
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Cached maximum edge weight `W`.
    pub fn max_weight(&self) -> f64 {
        self.max_weight
    }

    /// Sum of weights over unordered pairs.
    pub fn total_weight(&self) -> f64 {
        let n = self.n();
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += self.weight(i, j);
            }
        }
        s
    }

    /// First edge whose weight is not an integer, if any.
    pub fn first_non_integer(&self) -> Option<(usize, usize, f64)> {
        let n = self.n();
        for i in 0..n {
            for j in (i + 1)..n {
                let w = self.weight(i, j);
                if w.fract() != 0.0 {
                    return Some((i, j, w));
                }
            }
        }
        None
    }

    pub fn is_integral(&self) -> bool {
        self.first_non_integer().is_none()
    }

    /// Every weight multiplied by `factor` (which must be non-negative).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        WeightedGraph::new(self.weights.map(|w| w * factor), self.orientation)
    }

    /// Rounds `w * scale` to the nearest integer, for callers that need
    /// integer weights from real-valued similarities.
    pub fn quantized(&self, scale: f64) -> Result<Self> {
        WeightedGraph::new(self.weights.map(|w| (w * scale).round()), self.orientation)
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }
}

pub(crate) fn check_disjoint_nonempty(n: usize, a: &[usize], b: &[usize]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::pre("cluster arguments must be non-empty"));
    }
    let mut seen = HashSet::with_capacity(a.len());
    for &v in a {
        if v >= n {
            return Err(Error::pre(format!("vertex {v} out of range for {n} vertices")));
        }
        seen.insert(v);
    }
    for &v in b {
        if v >= n {
            return Err(Error::pre(format!("vertex {v} out of range for {n} vertices")));
        }
        if seen.contains(&v) {
            return Err(Error::pre(format!("vertex {v} appears in both clusters")));
        }
    }
    Ok(())
}

pub(crate) fn cross_sum(g: &WeightedGraph, a: &[usize], b: &[usize]) -> f64 {
    let mut s = 0.0;
    for &u in a {
        let row = g.weights.row(u);
        for &v in b {
            s += row[v];
        }
    }
    s
}

/// Mean weight between two disjoint non-empty vertex sets.
pub fn average_linkage(g: &WeightedGraph, a: &[usize], b: &[usize]) -> Result<f64> {
    check_disjoint_nonempty(g.n(), a, b)?;
    Ok(cross_sum(g, a, b) / (a.len() as f64 * b.len() as f64))
}

/// A partition of `{0..n-1}` into non-empty clusters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clustering {
    clusters: Vec<Vec<usize>>,
    level_index: usize,
}

impl Clustering {
    /// Validates the partition. Members are sorted inside each cluster;
    /// cluster order is kept.
    pub fn new(n: usize, mut clusters: Vec<Vec<usize>>, level_index: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut count = 0usize;
        for (ci, c) in clusters.iter_mut().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidPartition(format!("cluster {ci} is empty")));
            }
            c.sort_unstable();
            for &v in c.iter() {
                if v >= n {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} out of range for {n} vertices"
                    )));
                }
                if seen[v] {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} appears in more than one cluster"
                    )));
                }
                seen[v] = true;
                count += 1;
            }
        }
        if count != n {
            let missing = seen.iter().position(|s| !s).unwrap_or(0);
            return Err(Error::InvalidPartition(format!(
                "vertex {missing} is not covered"
            )));
        }
        Ok(Clustering {
            clusters,
            level_index,
        })
    }

    /// Skips validation; used to hold untrusted level data for diagnostics.
    pub(crate) fn unchecked(clusters: Vec<Vec<usize>>, level_index: usize) -> Self {
        Clustering {
            clusters,
            level_index,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Clustering {
            clusters: (0..n).map(|v| vec![v]).collect(),
            level_index: 0,
        }
    }

    /// Groups points by label; clusters are ordered by first appearance.
    pub fn from_labels<L: Eq + std::hash::Hash + Clone>(labels: &[L]) -> Self {
        let mut index = std::collections::HashMap::new();
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for (v, l) in labels.iter().enumerate() {
            let ci = *index.entry(l.clone()).or_insert_with(|| {
                clusters.push(Vec::new());
                clusters.len() - 1
            });
            clusters[ci].push(v);
        }
        Clustering {
            clusters,
            level_index: 0,
        }
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn n(&self) -> usize {
        self.clusters.iter().map(Vec::len).sum()
    }

    pub fn level_index(&self) -> usize {
        self.level_index
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(Vec::len).collect()
    }

    /// Cluster index of every vertex.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n()];
        for (ci, c) in self.clusters.iter().enumerate() {
            for &v in c {
                labels[v] = ci;
            }
        }
        labels
    }

    /// True when every cluster of `self` is a union of clusters of `finer`.
    pub fn is_coarsening_of(&self, finer: &Clustering) -> bool {
        if self.n() != finer.n() {
            return false;
        }
        let labels = self.labels();
        finer
            .clusters
            .iter()
            .all(|c| c.iter().all(|&v| labels[v] == labels[c[0]]))
    }
}

/// Complete graph over clusters weighted by average linkage.
///
/// Members are *padded* vertex ids: ids `>= n_real` are phantoms that alias
/// `phantom_origin[id - n_real]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusteringGraph {
    n_real: usize,
    members: Vec<Vec<usize>>,
    phantom_origin: Vec<usize>,
    real_sizes: Vec<usize>,
    padded_sizes: Vec<usize>,
    weights: DenseMatrix,
}

/// Builds the clustering graph of a real (phantom-free) clustering.
pub fn build_clustering_graph(g: &WeightedGraph, c: &Clustering) -> Result<ClusteringGraph> {
    if c.n() != g.n() {
        return Err(Error::InvalidPartition(format!(
            "clustering covers {} vertices but the graph has {}",
            c.n(),
            g.n()
        )));
    }
    // Clustering::new already validated disjointness and coverage.
    build_padded_clustering_graph(g, c.clusters().to_vec(), Vec::new())
}

/// Builds a clustering graph whose clusters may contain phantom ids.
/// Every real vertex and every phantom must appear in exactly one cluster.
pub fn build_padded_clustering_graph(
    g: &WeightedGraph,
    members: Vec<Vec<usize>>,
    phantom_origin: Vec<usize>,
) -> Result<ClusteringGraph> {
    let n = g.n();
    let total = n + phantom_origin.len();
    if let Some(&o) = phantom_origin.iter().find(|&&o| o >= n) {
        return Err(Error::pre(format!("phantom origin {o} out of range")));
    }
    let mut seen = vec![false; total];
    for (ci, c) in members.iter().enumerate() {
        if c.is_empty() {
            return Err(Error::InvalidPartition(format!("cluster {ci} is empty")));
        }
        for &v in c {
            if v >= total {
                return Err(Error::InvalidPartition(format!("vertex {v} out of range")));
            }
            if seen[v] {
                return Err(Error::InvalidPartition(format!(
                    "vertex {v} appears in more than one cluster"
                )));
            }
            seen[v] = true;
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidPartition(format!("vertex {v} is not covered")));
    }

    let resolve = |v: usize| if v < n { v } else { phantom_origin[v - n] };
    let resolved: Vec<Vec<usize>> = members
        .iter()
        .map(|c| c.iter().map(|&v| resolve(v)).collect())
        .collect();
    let k = members.len();
    let weights = DenseMatrix::from_fn(k, |a, b| {
        cross_sum(g, &resolved[a], &resolved[b]) / (resolved[a].len() * resolved[b].len()) as f64
    });
    let real_sizes = members
        .iter()
        .map(|c| c.iter().filter(|&&v| v < n).count())
        .collect();
    let padded_sizes = members.iter().map(Vec::len).collect();
    Ok(ClusteringGraph {
        n_real: n,
        members,
        phantom_origin,
        real_sizes,
        padded_sizes,
        weights,
    })
}

impl ClusteringGraph {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn weights(&self) -> &DenseMatrix {
        &self.weights
    }

    pub fn weight(&self, a: usize, b: usize) -> f64 {
        self.weights.get(a, b)
    }

    /// Padded member ids of cluster `i`.
    pub fn members(&self, i: usize) -> &[usize] {
        &self.members[i]
    }

    pub fn real_members(&self, i: usize) -> Vec<usize> {
        self.members[i]
            .iter()
            .copied()
            .filter(|&v| v < self.n_real)
            .collect()
    }

    pub fn phantom_origin(&self) -> &[usize] {
        &self.phantom_origin
    }

    pub fn n_real(&self) -> usize {
        self.n_real
    }

    pub fn real_sizes(&self) -> &[usize] {
        &self.real_sizes
    }

    pub fn padded_sizes(&self) -> &[usize] {
        &self.padded_sizes
    }

    /// Real clustering at this level (phantoms dropped).
    pub fn to_clustering(&self, level_index: usize) -> Result<Clustering> {
        let clusters = (0..self.len()).map(|i| self.real_members(i)).collect();
        Clustering::new(self.n_real, clusters, level_index)
    }
}

/// Merges matched cluster pairs. The new weight between merged clusters
/// `A∪B` and `C∪D` is a quarter of the four cross weights, which equals the
/// average linkage exactly when all padded sizes agree.
///
/// New clusters follow the order of `pairing.pairs()`.
pub fn coarsen(cg: &ClusteringGraph, pairing: &Matching) -> Result<ClusteringGraph> {
    let k = cg.len();
    if !k.is_multiple_of(2) || pairing.len() * 2 != k {
        return Err(Error::pre(format!(
            "pairing with {} pairs is not perfect on {k} clusters",
            pairing.len()
        )));
    }
    let mut covered = vec![false; k];
    for &(a, b) in pairing.pairs() {
        if a >= k || b >= k || a == b || covered[a] || covered[b] {
            return Err(Error::pre(format!("pair ({a}, {b}) is not a valid pairing edge")));
        }
        covered[a] = true;
        covered[b] = true;
    }
    if let Some(&s) = cg.padded_sizes.first() {
        if cg.padded_sizes.iter().any(|&p| p != s) {
            return Err(Error::pre("coarsening needs equal padded cluster sizes"));
        }
    }

    let pairs = pairing.pairs();
    let m = pairs.len();
    let weights = DenseMatrix::from_fn(m, |p, q| {
        let (a1, b1) = pairs[p];
        let (a2, b2) = pairs[q];
        0.25 * (cg.weight(a1, a2) + cg.weight(a1, b2) + cg.weight(b1, a2) + cg.weight(b1, b2))
    });
    let mut members = Vec::with_capacity(m);
    let mut real_sizes = Vec::with_capacity(m);
    let mut padded_sizes = Vec::with_capacity(m);
    for &(a, b) in pairs {
        let mut merged = cg.members[a].clone();
        merged.extend_from_slice(&cg.members[b]);
        members.push(merged);
        real_sizes.push(cg.real_sizes[a] + cg.real_sizes[b]);
        padded_sizes.push(cg.padded_sizes[a] + cg.padded_sizes[b]);
    }
    Ok(ClusteringGraph {
        n_real: cg.n_real,
        members,
        phantom_origin: cg.phantom_origin.clone(),
        real_sizes,
        padded_sizes,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_vertex() -> WeightedGraph {
        // a=0, b=1, c=2
        WeightedGraph::from_fn(3, Orientation::Similarity, |i, j| match (i, j) {
            (0, 2) => 2.0,
            (1, 2) => 4.0,
            _ => 0.0,
        })
        .unwrap()
    }

    #[test]
    fn average_linkage_examples() {
        let g = three_vertex();
        assert_eq!(average_linkage(&g, &[0, 1], &[2]).unwrap(), 3.0);

        let g2 = WeightedGraph::from_fn(2, Orientation::Similarity, |_, _| 1.0).unwrap();
        assert_eq!(average_linkage(&g2, &[0], &[1]).unwrap(), 1.0);

        let zero = WeightedGraph::from_fn(4, Orientation::Similarity, |_, _| 0.0).unwrap();
        assert_eq!(average_linkage(&zero, &[0, 1], &[2, 3]).unwrap(), 0.0);
    }

    #[test]
    fn average_linkage_rejects_bad_sets() {
        let g = three_vertex();
        assert!(matches!(
            average_linkage(&g, &[0, 1], &[1]),
            Err(Error::Precondition(_))
        ));
        assert!(average_linkage(&g, &[], &[1]).is_err());
        assert!(average_linkage(&g, &[0], &[7]).is_err());
    }

    #[test]
    fn graph_validation() {
        let mut m = DenseMatrix::zeros(2);
        m.set(0, 1, -1.0);
        assert!(WeightedGraph::new(m, Orientation::Similarity).is_err());
        let mut m = DenseMatrix::zeros(2);
        m.data[1] = 1.0; // asymmetric
        assert!(WeightedGraph::new(m, Orientation::Similarity).is_err());
        assert!(WeightedGraph::new(DenseMatrix::zeros(0), Orientation::Similarity).is_err());
        let g = three_vertex();
        assert_eq!(g.max_weight(), 4.0);
        assert_eq!(g.total_weight(), 6.0);
    }

    #[test]
    fn clustering_graph_examples() {
        let g = three_vertex();
        let id = build_clustering_graph(&g, &Clustering::singletons(3)).unwrap();
        assert_eq!(id.weights(), g.weights());

        let c = Clustering::new(3, vec![vec![0, 1], vec![2]], 1).unwrap();
        let cg = build_clustering_graph(&g, &c).unwrap();
        assert_eq!(cg.weight(0, 1), 3.0);
        assert_eq!(cg.real_sizes(), &[2, 1]);

        let whole = Clustering::new(3, vec![vec![0, 1, 2]], 2).unwrap();
        let cg = build_clustering_graph(&g, &whole).unwrap();
        assert_eq!(cg.len(), 1);
        assert_eq!(cg.weights().n(), 1);
    }

    #[test]
    fn clustering_rejects_invalid_partitions() {
        assert!(Clustering::new(3, vec![vec![0, 1], vec![1, 2]], 0).is_err());
        assert!(Clustering::new(3, vec![vec![0, 1]], 0).is_err());
        assert!(Clustering::new(3, vec![vec![0, 1, 2], vec![]], 0).is_err());
        let g = three_vertex();
        let c = Clustering::new(2, vec![vec![0, 1]], 0).unwrap();
        assert!(build_clustering_graph(&g, &c).is_err());
    }

    #[test]
    fn coarsen_quarter_rule() {
        // Four singleton clusters with cross weights 1, 2, 3, 2 between {0,1} and {2,3}.
        let g = WeightedGraph::from_fn(4, Orientation::Similarity, |i, j| match (i, j) {
            (0, 2) => 1.0,
            (0, 3) => 2.0,
            (1, 2) => 3.0,
            (1, 3) => 2.0,
            _ => 0.5,
        })
        .unwrap();
        let cg = build_clustering_graph(&g, &Clustering::singletons(4)).unwrap();
        let pairing = Matching::from_pairs(vec![(0, 1), (2, 3)], cg.weights());
        let next = coarsen(&cg, &pairing).unwrap();
        assert_eq!(next.len(), 2);
        assert_eq!(next.weight(0, 1), 2.0);
        assert_eq!(next.padded_sizes(), &[2, 2]);
        assert_eq!(next.real_sizes(), &[2, 2]);

        let pairing = Matching::from_pairs(vec![(0, 1)], next.weights());
        let root = coarsen(&next, &pairing).unwrap();
        assert_eq!(root.len(), 1);
    }

    #[test]
    fn coarsen_constant_weights() {
        let g = WeightedGraph::from_fn(8, Orientation::Similarity, |_, _| 2.5).unwrap();
        let cg = build_clustering_graph(&g, &Clustering::singletons(8)).unwrap();
        let pairing = Matching::from_pairs(vec![(0, 5), (1, 4), (2, 7), (3, 6)], cg.weights());
        let next = coarsen(&cg, &pairing).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    assert_eq!(next.weight(a, b), 2.5);
                }
            }
        }
    }

    #[test]
    fn coarsen_rejects_bad_pairings() {
        let g = WeightedGraph::from_fn(4, Orientation::Similarity, |_, _| 1.0).unwrap();
        let cg = build_clustering_graph(&g, &Clustering::singletons(4)).unwrap();
        let partial = Matching::from_pairs(vec![(0, 1)], cg.weights());
        assert!(coarsen(&cg, &partial).is_err());

        let c = Clustering::new(4, vec![vec![0, 1], vec![2], vec![3]], 1).unwrap();
        // Pad to an even count of unequal sizes.
        let uneven = build_padded_clustering_graph(
            &g,
            vec![c.clusters()[0].clone(), vec![2], vec![3], vec![4]],
            vec![3],
        )
        .unwrap();
        let pairing = Matching::from_pairs(vec![(0, 1), (2, 3)], uneven.weights());
        assert!(coarsen(&uneven, &pairing).is_err());
    }

    #[test]
    fn phantoms_alias_origin_weights() {
        let g = three_vertex();
        // Clusters {0,1}, {2, phantom-of-2}.
        let cg = build_padded_clustering_graph(&g, vec![vec![0, 1], vec![2, 3]], vec![2]).unwrap();
        assert_eq!(cg.weight(0, 1), 3.0);
        assert_eq!(cg.real_sizes(), &[2, 1]);
        assert_eq!(cg.padded_sizes(), &[2, 2]);
        let c = cg.to_clustering(1).unwrap();
        assert_eq!(c.clusters(), &[vec![0, 1], vec![2]]);
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::matching::greedy_matching;
    use crate::testgen::int_graph;

    proptest! {
        #[test]
        fn singleton_clustering_graph_is_identity(g in int_graph(1..=12, Orientation::Similarity)) {
            let cg = build_clustering_graph(&g, &Clustering::singletons(g.n())).unwrap();
            prop_assert_eq!(cg.weights(), g.weights());
        }

        #[test]
        fn average_linkage_is_symmetric_and_scales(
            g in int_graph(2..=12, Orientation::Similarity),
            cut in 1usize..12,
            lambda in 0.0f64..10.0,
        ) {
            let cut = cut.min(g.n() - 1);
            let a: Vec<usize> = (0..cut).collect();
            let b: Vec<usize> = (cut..g.n()).collect();
            let ab = average_linkage(&g, &a, &b).unwrap();
            prop_assert_eq!(ab, average_linkage(&g, &b, &a).unwrap());
            let scaled = average_linkage(&g.scaled(lambda).unwrap(), &a, &b).unwrap();
            prop_assert!((scaled - lambda * ab).abs() <= 1e-9 * (1.0 + scaled.abs()));
        }

        #[test]
        fn coarsening_matches_recomputation(g in int_graph(1..=4, Orientation::Similarity)) {
            // Lift to 16 vertices so every round pairs equal-size clusters.
            let g = WeightedGraph::from_fn(16, Orientation::Similarity, |i, j| {
                g.weight(i % g.n(), j % g.n()) + ((i * j) % 5) as f64
            }).unwrap();
            let mut cg = build_clustering_graph(&g, &Clustering::singletons(16)).unwrap();
            while cg.len() > 1 {
                cg = coarsen(&cg, &greedy_matching(cg.weights())).unwrap();
                let sorted: Vec<Vec<usize>> = (0..cg.len()).map(|i| {
                    let mut m = cg.members(i).to_vec();
                    m.sort_unstable();
                    m
                }).collect();
                for a in 0..cg.len() {
                    for b in 0..cg.len() {
                        let want = if a == b { 0.0 } else { average_linkage(&g, &sorted[a], &sorted[b]).unwrap() };
                        prop_assert!((cg.weight(a, b) - want).abs() <= 1e-9);
                    }
                }
            }
        }
    }
}
