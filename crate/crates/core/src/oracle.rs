//! Slow, obviously-correct reference computations for small inputs.
//! They share no code with the production paths they check.

use crate::graph::WeightedGraph;
use crate::hierarchy::Dendrogram;

/// Best total weight of a matching with at most `limit` pairs (any size when `None`),
/// by trying every matching.
pub fn brute_max_matching(g: &WeightedGraph, limit: Option<usize>) -> f64 {
    fn go(g: &WeightedGraph, used: &mut [bool], from: usize, left: usize) -> f64 {
        let n = used.len();
        let Some(i) = (from..n).find(|&i| !used[i]) else {
            return 0.0;
        };
        // `i` stays single.
        let mut best = go(g, used, i + 1, left);
        if left > 0 {
            used[i] = true;
            for j in (i + 1)..n {
                if !used[j] {
                    used[j] = true;
                    best = best.max(g.weight(i, j) + go(g, used, i + 1, left - 1));
                    used[j] = false;
                }
            }
            used[i] = false;
        }
        best
    }
    let n = g.n();
    go(g, &mut vec![false; n], 0, limit.unwrap_or(n / 2))
}

/// Best and worst weight over perfect matchings (`n` even).
pub fn brute_perfect_matching_range(g: &WeightedGraph) -> (f64, f64) {
    fn go(g: &WeightedGraph, used: &mut [bool], acc: f64, out: &mut (f64, f64)) {
        let Some(i) = used.iter().position(|&u| !u) else {
            out.0 = out.0.max(acc);
            out.1 = out.1.min(acc);
            return;
        };
        used[i] = true;
        for j in (i + 1)..used.len() {
            if !used[j] {
                used[j] = true;
                go(g, used, acc + g.weight(i, j), out);
                used[j] = false;
            }
        }
        used[i] = false;
    }
    let mut out = (f64::NEG_INFINITY, f64::INFINITY);
    go(g, &mut vec![false; g.n()], 0.0, &mut out);
    out
}

/// Full binary tree over leaves `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tree {
    Leaf(usize),
    Join(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn leaves(&self) -> Vec<usize> {
        match self {
            Tree::Leaf(v) => vec![*v],
            Tree::Join(a, b) => {
                let mut l = a.leaves();
                l.extend(b.leaves());
                l
            }
        }
    }

    /// Size of the smallest subtree holding both ends, for each pair `i < j`,
    /// in row-major order of the pairs.
    pub fn pair_lca_sizes(&self, n: usize) -> Vec<usize> {
        fn go(t: &Tree, n: usize, out: &mut [usize]) -> Vec<usize> {
            match t {
                Tree::Leaf(v) => vec![*v],
                Tree::Join(a, b) => {
                    let la = go(a, n, out);
                    let lb = go(b, n, out);
                    let size = la.len() + lb.len();
                    for &x in &la {
                        for &y in &lb {
                            out[pair_index(n, x.min(y), x.max(y))] = size;
                        }
                    }
                    [la, lb].concat()
                }
            }
        }
        let mut out = vec![0; n * (n - 1) / 2];
        go(self, n, &mut out);
        out
    }

    fn insertions(&self, x: usize) -> Vec<Tree> {
        let mut out = vec![Tree::Join(Box::new(self.clone()), Box::new(Tree::Leaf(x)))];
        if let Tree::Join(a, b) = self {
            for a2 in a.insertions(x) {
                out.push(Tree::Join(Box::new(a2), b.clone()));
            }
            for b2 in b.insertions(x) {
                out.push(Tree::Join(a.clone(), Box::new(b2)));
            }
        }
        out
    }

    /// Converts to a dendrogram whose levels are subtree heights.
    pub fn to_dendrogram(&self, n: usize) -> Dendrogram {
        fn go(t: &Tree, merges: &mut Vec<(usize, Vec<usize>)>) -> (Vec<usize>, usize) {
            match t {
                Tree::Leaf(v) => (vec![*v], 0),
                Tree::Join(a, b) => {
                    let (la, ha) = go(a, merges);
                    let (lb, hb) = go(b, merges);
                    let h = ha.max(hb) + 1;
                    let mut m = [la, lb].concat();
                    m.sort_unstable();
                    merges.push((h, m.clone()));
                    (m, h)
                }
            }
        }
        let mut merges = Vec::new();
        let (_, height) = go(self, &mut merges);
        // Largest first, so the first set covering a vertex is its maximal one.
        merges.sort_by_key(|m| std::cmp::Reverse(m.1.len()));
        let levels = (0..=height)
            .map(|h| {
                let mut covered = vec![false; n];
                let mut clusters = Vec::new();
                for (_, m) in merges.iter().filter(|m| m.0 <= h) {
                    if !covered[m[0]] {
                        m.iter().for_each(|&v| covered[v] = true);
                        clusters.push(m.clone());
                    }
                }
                clusters.extend((0..n).filter(|&v| !covered[v]).map(|v| vec![v]));
                clusters.sort_by_key(|c| c[0]);
                clusters
            })
            .collect();
        Dendrogram::from_levels(n, levels).expect("subtree heights give nested levels")
    }
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Calls `f` on every full binary tree over `n >= 1` labeled leaves,
/// `(2n-3)!!` of them, built by inserting leaves one at a time.
pub fn for_each_binary_tree(n: usize, mut f: impl FnMut(&Tree)) {
    fn go(t: Tree, next: usize, n: usize, f: &mut dyn FnMut(&Tree)) {
        if next == n {
            f(&t);
            return;
        }
        for t2 in t.insertions(next) {
            go(t2, next + 1, n, f);
        }
    }
    go(Tree::Leaf(0), 1, n, &mut f);
}

/// Highest revenue over every binary tree, for each graph (all of size `n`).
pub fn brute_max_revenue(graphs: &[WeightedGraph]) -> Vec<f64> {
    let Some(n) = graphs.first().map(WeightedGraph::n) else {
        return Vec::new();
    };
    let flat: Vec<Vec<f64>> = graphs
        .iter()
        .map(|g| {
            let mut w = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..n {
                for j in (i + 1)..n {
                    w.push(g.weight(i, j));
                }
            }
            w
        })
        .collect();
    let mut best = vec![f64::NEG_INFINITY; graphs.len()];
    for_each_binary_tree(n, |t| {
        let sizes = t.pair_lca_sizes(n);
        for (b, w) in best.iter_mut().zip(&flat) {
            let r: f64 = w.iter().zip(&sizes).map(|(w, &s)| w * (n - s) as f64).sum();
            *b = b.max(r);
        }
    });
    best
}

/// Sum over pairs of `w(i, j)` times the leaf count under their lowest common
/// ancestor, found by walking parent links.
pub fn pairwise_cost(g: &WeightedGraph, d: &Dendrogram) -> f64 {
    let n = g.n();
    let mut total = 0.0;
    for i in 0..n {
        let mut up = vec![false; d.nodes().len()];
        let mut x = Some(i);
        while let Some(v) = x {
            up[v] = true;
            x = d.parent(v);
        }
        for j in (i + 1)..n {
            let mut y = j;
            while !up[y] {
                y = d.parent(y).expect("root is an ancestor of every leaf");
            }
            total += g.weight(i, j) * d.node(y).size() as f64;
        }
    }
    total
}

/// Rand index by direct pair enumeration over label vectors.
pub fn pairwise_rand_index(x: &[usize], y: &[usize]) -> f64 {
    let n = x.len();
    let mut agree = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            if (x[i] == x[j]) == (y[i] == y[j]) {
                agree += 1;
            }
        }
    }
    agree as f64 / (n * (n - 1) / 2) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Orientation;

    #[test]
    fn tree_counts_are_double_factorials() {
        for (n, want) in [(1, 1), (2, 1), (3, 3), (4, 15), (5, 105), (6, 945)] {
            let mut c = 0;
            for_each_binary_tree(n, |_| c += 1);
            assert_eq!(c, want, "n={n}");
        }
    }

    #[test]
    fn trees_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for_each_binary_tree(5, |t| {
            assert!(seen.insert(t.pair_lca_sizes(5)), "{t:?}");
        });
    }

    #[test]
    fn matching_by_hand() {
        let g = WeightedGraph::from_fn(4, Orientation::Similarity, |i, j| match (i, j) {
            (0, 1) => 5.0,
            (2, 3) => 1.0,
            (0, 2) | (1, 3) => 4.0,
            _ => 0.0,
        })
        .unwrap();
        assert_eq!(brute_max_matching(&g, None), 8.0);
        assert_eq!(brute_max_matching(&g, Some(1)), 5.0);
        assert_eq!(brute_perfect_matching_range(&g), (8.0, 0.0));
    }

    #[test]
    fn dendrogram_conversion_keeps_lca_sizes() {
        let n = 5;
        for_each_binary_tree(n, |t| {
            let d = t.to_dendrogram(n);
            assert!(d.is_binary());
            let g = WeightedGraph::from_fn(n, Orientation::Similarity, |i, j| (1 + i * n + j) as f64).unwrap();
            let sizes = t.pair_lca_sizes(n);
            let mut want = 0.0;
            let mut k = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    want += g.weight(i, j) * sizes[k] as f64;
                    k += 1;
                }
            }
            assert_eq!(pairwise_cost(&g, &d), want);
        });
    }
}
