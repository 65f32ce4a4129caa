use super::Mode;
use crate::error::Result;
use crate::graph::WeightedGraph;
use crate::hierarchy::{Dendrogram, DendrogramBuilder};

/// Agglomerative average linkage: repeatedly merges the pair of clusters
/// with the best average weight. Ties go to the lexicographically smallest
/// pair of node ids. Each merge is its own level.
pub fn average_linkage_clusterer(g: &WeightedGraph, mode: Mode) -> Result<Dendrogram> {
    let n = g.n();
    let mut b = DendrogramBuilder::new(n)?;
    // Active clusters keyed by node id; `link` holds average linkage between slots.
    let mut node: Vec<usize> = (0..n).collect();
    let mut size: Vec<usize> = vec![1; n];
    let mut active: Vec<bool> = vec![true; n];
    let mut link: Vec<f64> = (0..n).flat_map(|i| g.weights().row(i).to_vec()).collect();

    for step in 1..n {
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for i in 0..n {
            if !active[i] {
                continue;
            }
            for j in (i + 1)..n {
                if !active[j] {
                    continue;
                }
                let x = link[i * n + j];
                let ids = (node[i].min(node[j]), node[i].max(node[j]));
                let take = match best {
                    None => true,
                    Some((bw, bids, _, _)) => mode.better(x, bw) || (x == bw && ids < bids),
                };
                if take {
                    best = Some((x, ids, i, j));
                }
            }
        }
        let (_, _, i, j) = best.expect("at least two active clusters");
        let (si, sj) = (size[i] as f64, size[j] as f64);
        for k in 0..n {
            if active[k] && k != i && k != j {
                let merged = (si * link[i * n + k] + sj * link[j * n + k]) / (si + sj);
                link[i * n + k] = merged;
                link[k * n + i] = merged;
            }
        }
        let (lo, hi) = (node[i].min(node[j]), node[i].max(node[j]));
        node[i] = b.merge(vec![lo, hi], step)?;
        size[i] += size[j];
        active[j] = false;
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Orientation;

    #[test]
    fn two_vertices() {
        let g = WeightedGraph::from_fn(2, Orientation::Similarity, |_, _| 1.0).unwrap();
        let d = average_linkage_clusterer(&g, Mode::Max).unwrap();
        assert_eq!(d.level_sizes(), vec![2, 1]);
    }

    #[test]
    fn merges_heaviest_pair_first() {
        let g = WeightedGraph::from_fn(3, Orientation::Similarity, |i, j| {
            if (i, j) == (0, 1) { 3.0 } else { 1.0 }
        })
        .unwrap();
        let d = average_linkage_clusterer(&g, Mode::Max).unwrap();
        assert_eq!(d.node(3).children(), &[0, 1]);
        assert_eq!(d.levels()[1].clusters(), &[vec![2], vec![0, 1]]);
    }

    #[test]
    fn min_mode_merges_closest_pair() {
        let g = WeightedGraph::from_fn(4, Orientation::Dissimilarity, |i, j| (j - i) as f64 * if i == 2 { 0.1 } else { 1.0 }).unwrap();
        let d = average_linkage_clusterer(&g, Mode::Min).unwrap();
        assert_eq!(d.node(4).children(), &[2, 3]);
        assert!(d.is_binary());
        assert_eq!(d.levels().len(), 4);
    }
}
