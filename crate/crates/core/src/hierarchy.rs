//! Merge trees with per-level clusterings.
//!
//! Node ids `0..n` are the leaves; internal nodes follow in creation order
//! and may have any number (two or more) of children. Every node carries the
//! level at which it first appears. Level `i` is the clustering formed by the
//! maximal nodes whose level is at most `i`.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Clustering;

/// Largest leaf count accepted from a serialized dendrogram.
pub const MAX_PARSED_LEAVES: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    children: Vec<usize>,
    size: usize,
    level: usize,
}

impl Node {
    pub fn children(&self) -> &[usize] {
        &self.children
    }

    /// Number of leaves below this node.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Incrementally records merges; [`finish`](DendrogramBuilder::finish)
/// checks that they form a single tree.
#[derive(Clone, Debug)]
pub struct DendrogramBuilder {
    leaves: usize,
    nodes: Vec<Node>,
    has_parent: Vec<bool>,
}

impl DendrogramBuilder {
    pub fn new(leaves: usize) -> Result<Self> {
        if leaves == 0 {
            return Err(Error::pre("a dendrogram needs at least one leaf"));
        }
        let nodes = (0..leaves)
            .map(|_| Node {
                children: Vec::new(),
                size: 1,
                level: 0,
            })
            .collect();
        Ok(DendrogramBuilder {
            leaves,
            nodes,
            has_parent: vec![false; leaves],
        })
    }

    /// Adds a node over `children` at `level`; returns its id.
    pub fn merge(&mut self, children: Vec<usize>, level: usize) -> Result<usize> {
        if children.len() < 2 {
            return Err(Error::pre("a merge needs at least two children"));
        }
        let mut size = 0;
        for (i, &c) in children.iter().enumerate() {
            if c >= self.nodes.len() {
                return Err(Error::pre(format!("child {c} does not exist yet")));
            }
            if self.has_parent[c] || children[..i].contains(&c) {
                return Err(Error::pre(format!("node {c} is merged twice")));
            }
            if self.nodes[c].level >= level {
                return Err(Error::pre(format!(
                    "merge at level {level} uses node {c} from level {}",
                    self.nodes[c].level
                )));
            }
            size += self.nodes[c].size;
        }
        for &c in &children {
            self.has_parent[c] = true;
        }
        self.nodes.push(Node {
            children,
            size,
            level,
        });
        self.has_parent.push(false);
        Ok(self.nodes.len() - 1)
    }

    /// Ids of nodes without a parent so far.
    pub fn roots(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| !self.has_parent[i]).collect()
    }

    pub fn finish(mut self) -> Result<Dendrogram> {
        let roots = self.roots();
        if roots.len() != 1 {
            return Err(Error::pre(format!(
                "merges leave {} top-level clusters, expected 1",
                roots.len()
            )));
        }
        // Compress levels to 0..L so every level introduces at least one node.
        let mut distinct: Vec<usize> = self.nodes.iter().map(|n| n.level).collect();
        distinct.sort_unstable();
        distinct.dedup();
        let rank: HashMap<usize, usize> = distinct.iter().enumerate().map(|(r, &l)| (l, r)).collect();
        for node in &mut self.nodes {
            node.level = rank[&node.level];
        }
        Ok(Dendrogram::from_nodes(self.leaves, self.nodes))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    leaves: usize,
    nodes: Vec<Node>,
    parent: Vec<Option<usize>>,
    members: Vec<Vec<usize>>,
    levels: Vec<Clustering>,
}

impl Dendrogram {
    fn from_nodes(leaves: usize, nodes: Vec<Node>) -> Self {
        let mut parent = vec![None; nodes.len()];
        let mut members: Vec<Vec<usize>> = Vec::with_capacity(nodes.len());
        for (id, node) in nodes.iter().enumerate() {
            if node.is_leaf() {
                members.push(vec![id]);
                continue;
            }
            let mut m = Vec::with_capacity(node.size);
            for &c in &node.children {
                parent[c] = Some(id);
                m.extend_from_slice(&members[c]);
            }
            m.sort_unstable();
            members.push(m);
        }
        let top = nodes.iter().map(|n| n.level).max().unwrap_or(0);
        let levels = (0..=top)
            .map(|i| {
                let clusters = (0..nodes.len())
                    .filter(|&id| {
                        nodes[id].level <= i && parent[id].is_none_or(|p| nodes[p].level > i)
                    })
                    .map(|id| members[id].clone())
                    .collect();
                Clustering::unchecked(clusters, i)
            })
            .collect();
        Dendrogram {
            leaves,
            nodes,
            parent,
            members,
            levels,
        }
    }

    /// A one-leaf dendrogram.
    pub fn single_leaf() -> Self {
        DendrogramBuilder::new(1)
            .and_then(DendrogramBuilder::finish)
            .expect("one leaf is always a tree")
    }

    /// Builds the tree implied by a checked level sequence. Levels that
    /// repeat the previous clustering are dropped.
    pub fn from_levels(n: usize, levels: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let raw = Dendrogram::from_levels_unchecked(n, levels);
        let problems = raw.validate();
        if !problems.is_empty() {
            return Err(Error::pre(problems.join("; ")));
        }
        Ok(raw)
    }

    /// Keeps the given levels as they are so [`validate`](Self::validate)
    /// can report what is wrong with them. The tree is filled in only when
    /// the levels describe one.
    pub fn from_levels_unchecked(n: usize, levels: Vec<Vec<Vec<usize>>>) -> Self {
        let levels: Vec<Clustering> = levels
            .into_iter()
            .enumerate()
            .map(|(i, mut c)| {
                for cluster in &mut c {
                    cluster.sort_unstable();
                }
                Clustering::unchecked(c, i)
            })
            .collect();
        match tree_from_levels(n, &levels) {
            Some(d) => d,
            None => Dendrogram {
                leaves: n,
                nodes: Vec::new(),
                parent: Vec::new(),
                members: Vec::new(),
                levels,
            },
        }
    }

    /// Number of leaves `n`.
    pub fn leaves(&self) -> usize {
        self.leaves
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.parent[id]
    }

    /// Sorted leaves below `id`.
    pub fn members(&self, id: usize) -> &[usize] {
        &self.members[id]
    }

    /// Internal node ids in creation order.
    pub fn internal_nodes(&self) -> std::ops::Range<usize> {
        self.leaves.min(self.nodes.len())..self.nodes.len()
    }

    /// Finest (singletons) to coarsest (one cluster).
    pub fn levels(&self) -> &[Clustering] {
        &self.levels
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Clustering::len).collect()
    }

    pub fn is_binary(&self) -> bool {
        self.nodes.iter().all(|n| n.children.is_empty() || n.children.len() == 2)
    }

    pub fn max_arity(&self) -> usize {
        self.nodes.iter().map(|n| n.children.len()).max().unwrap_or(0)
    }

    /// Lists violated structural invariants; empty for a valid dendrogram.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.leaves;
        if n == 0 {
            out.push("dendrogram has no leaves".to_string());
            return out;
        }
        if self.levels.is_empty() {
            out.push("no levels".to_string());
            return out;
        }
        let mut labels_prev: Option<Vec<usize>> = None;
        for (i, level) in self.levels.iter().enumerate() {
            let mut label = vec![usize::MAX; n];
            let mut ok = true;
            for (ci, c) in level.clusters().iter().enumerate() {
                if c.is_empty() {
                    out.push(format!("level {i}: cluster {ci} is empty"));
                    ok = false;
                }
                for &v in c {
                    if v >= n {
                        out.push(format!("level {i}: vertex {v} out of range"));
                        ok = false;
                    } else if label[v] != usize::MAX {
                        out.push(format!("level {i}: vertex {v} is in two clusters"));
                        ok = false;
                    } else {
                        label[v] = ci;
                    }
                }
            }
            if let Some(v) = label.iter().position(|&l| l == usize::MAX) {
                out.push(format!("level {i}: vertex {v} is not covered"));
                ok = false;
            }
            if i == 0 && level.clusters().iter().any(|c| c.len() != 1) {
                out.push("level 0 is not the singleton clustering".to_string());
            }
            if ok {
                if let Some(prev) = &labels_prev {
                    // Every finer cluster must sit inside one coarser cluster.
                    let mut target: HashMap<usize, usize> = HashMap::new();
                    for v in 0..n {
                        let t = *target.entry(prev[v]).or_insert(label[v]);
                        if t != label[v] {
                            out.push(format!(
                                "level {i} does not refine into level {}: vertex {v} splits its cluster",
                                i - 1
                            ));
                            break;
                        }
                    }
                }
                labels_prev = Some(label);
            } else {
                labels_prev = None;
            }
        }
        if self.levels.last().is_none_or(|l| l.len() != 1) {
            out.push("coarsest level is not a single cluster".to_string());
        }
        if self.nodes.is_empty() {
            out.push("levels do not describe a merge tree".to_string());
        } else {
            for id in self.internal_nodes() {
                let node = &self.nodes[id];
                let total: usize = node.children.iter().map(|&c| self.nodes[c].size).sum();
                if total != node.size || self.members[id].len() != node.size {
                    out.push(format!("node {id}: size does not match its children"));
                }
            }
        }
        out
    }

    /// Exactly `k` clusters: start at the coarsest level with at most `k`
    /// clusters and split the largest cluster (ties: smallest member) until
    /// there are `k`. A node with more than two children is opened one child
    /// at a time, leaving the remaining children together.
    pub fn extract_k_clustering(&self, k: usize) -> Result<Clustering> {
        let n = self.leaves;
        if k == 0 || k > n {
            return Err(Error::pre(format!("k = {k} is not in 1..={n}")));
        }
        if self.nodes.is_empty() {
            return Err(Error::pre("dendrogram has no merge tree"));
        }
        let start = self
            .levels
            .iter()
            .position(|l| l.len() <= k)
            .expect("coarsest level has one cluster");
        if self.levels[start].len() == k {
            return Ok(self.levels[start].clone());
        }

        // (node, first child kept); offset 0 means the whole node.
        let roots: Vec<usize> = (0..self.nodes.len())
            .filter(|&id| {
                self.nodes[id].level <= start
                    && self.parent[id].is_none_or(|p| self.nodes[p].level > start)
            })
            .collect();
        let mut items: Vec<(usize, usize)> = roots.into_iter().map(|id| (id, 0)).collect();
        let item_size = |&(id, off): &(usize, usize)| -> usize {
            if off == 0 {
                self.nodes[id].size
            } else {
                self.nodes[id].children[off..].iter().map(|&c| self.nodes[c].size).sum()
            }
        };
        let item_min = |&(id, off): &(usize, usize)| -> usize {
            if off == 0 {
                self.members[id][0]
            } else {
                self.nodes[id].children[off..]
                    .iter()
                    .map(|&c| self.members[c][0])
                    .min()
                    .unwrap_or(usize::MAX)
            }
        };
        while items.len() < k {
            let (pos, _) = items
                .iter()
                .enumerate()
                .max_by(|(_, a), (_, b)| {
                    item_size(a)
                        .cmp(&item_size(b))
                        .then(item_min(b).cmp(&item_min(a)))
                })
                .expect("items are non-empty");
            let (id, off) = items.swap_remove(pos);
            let children = &self.nodes[id].children;
            let rest = children.len() - off;
            items.push((children[off], 0));
            if rest == 2 {
                items.push((children[off + 1], 0));
            } else {
                items.push((id, off + 1));
            }
        }
        let mut clusters: Vec<Vec<usize>> = items
            .iter()
            .map(|&(id, off)| {
                if off == 0 {
                    self.members[id].clone()
                } else {
                    let mut m: Vec<usize> = self.nodes[id].children[off..]
                        .iter()
                        .flat_map(|&c| self.members[c].iter().copied())
                        .collect();
                    m.sort_unstable();
                    m
                }
            })
            .collect();
        clusters.sort_by_key(|c| c[0]);
        Clustering::new(n, clusters, start)
    }

    /// Text form: `# leaves=n`, then `level,child,child[,...]` per internal node.
    pub fn to_text(&self) -> String {
        let mut s = format!("# leaves={}\n", self.leaves);
        for id in self.internal_nodes() {
            let node = &self.nodes[id];
            let _ = write!(s, "{}", node.level);
            for c in &node.children {
                let _ = write!(s, ",{c}");
            }
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut builder: Option<DendrogramBuilder> = None;
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(v) = rest.strip_prefix("leaves=") {
                    if builder.is_some() {
                        return Err(Error::parse(line_no, "duplicate leaves header"));
                    }
                    let n: usize = v
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad leaf count `{v}`")))?;
                    if n > MAX_PARSED_LEAVES {
                        return Err(Error::parse(line_no, format!("leaf count {n} is too large")));
                    }
                    builder = Some(
                        DendrogramBuilder::new(n).map_err(|e| Error::parse(line_no, e.to_string()))?,
                    );
                }
                continue;
            }
            let b = builder
                .as_mut()
                .ok_or_else(|| Error::parse(line_no, "merge line before `# leaves=` header"))?;
            let fields: Vec<usize> = line
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::parse(line_no, format!("`{}` is not a node id", f.trim())))
                })
                .collect::<Result<_>>()?;
            if fields.len() < 3 {
                return Err(Error::parse(line_no, "expected `level,child,child[,...]`"));
            }
            b.merge(fields[1..].to_vec(), fields[0])
                .map_err(|e| Error::parse(line_no, e.to_string()))?;
        }
        let b = builder.ok_or_else(|| Error::parse(last_line.max(1), "missing `# leaves=` header"))?;
        b.finish().map_err(|e| Error::parse(last_line.max(1), e.to_string()))
    }

    pub fn summary(&self) -> DendrogramSummary {
        DendrogramSummary {
            leaves: self.leaves,
            internal_nodes: self.internal_nodes().len(),
            max_arity: self.max_arity(),
            levels: self
                .levels
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    let sizes = l.sizes();
                    let min = sizes.iter().copied().min().unwrap_or(0);
                    let max = sizes.iter().copied().max().unwrap_or(0);
                    LevelSummary {
                        level: i,
                        clusters: l.len(),
                        min_size: min,
                        max_size: max,
                        balance: if max == 0 { 0.0 } else { min as f64 / max as f64 },
                    }
                })
                .collect(),
        }
    }
}

fn tree_from_levels(n: usize, levels: &[Clustering]) -> Option<Dendrogram> {
    let first = levels.first()?;
    if n == 0 || first.len() != n || first.clusters().iter().any(|c| c.len() != 1) {
        return None;
    }
    let mut b = DendrogramBuilder::new(n).ok()?;
    // node id currently representing each vertex's cluster
    let mut owner: Vec<usize> = (0..n).collect();
    for (i, level) in levels.iter().enumerate().skip(1) {
        let mut seen = vec![false; n];
        let mut next_owner = owner.clone();
        for c in level.clusters() {
            let mut children: Vec<usize> = Vec::new();
            for &v in c {
                if v >= n || seen[v] {
                    return None;
                }
                seen[v] = true;
                if !children.contains(&owner[v]) {
                    children.push(owner[v]);
                }
            }
            if children.is_empty() {
                return None;
            }
            let id = if children.len() == 1 {
                children[0]
            } else {
                b.merge(children, i).ok()?
            };
            for &v in c {
                next_owner[v] = id;
            }
        }
        if seen.iter().any(|s| !s) {
            return None;
        }
        // A finer cluster split across coarser clusters shows up as a node
        // claimed twice, which merge() rejects; also check sizes.
        owner = next_owner;
    }
    let d = b.finish().ok()?;
    for id in d.internal_nodes() {
        if d.members[id].len() != d.nodes[id].size {
            return None;
        }
    }
    Some(d)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub level: usize,
    pub clusters: usize,
    pub min_size: usize,
    pub max_size: usize,
    pub balance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DendrogramSummary {
    pub leaves: usize,
    pub internal_nodes: usize,
    pub max_arity: usize,
    pub levels: Vec<LevelSummary>,
}

/// Balanced binary tree over `order`, merging adjacent pairs level by level.
/// An odd cluster out is carried to the next level unchanged.
pub fn balanced_binary(n: usize, order: &[usize]) -> Result<Dendrogram> {
    let mut b = DendrogramBuilder::new(n)?;
    let mut current: Vec<usize> = order.to_vec();
    let mut level = 1;
    while current.len() > 1 {
        let mut next = Vec::with_capacity(current.len().div_ceil(2));
        for pair in current.chunks(2) {
            if pair.len() == 2 {
                next.push(b.merge(pair.to_vec(), level)?);
            } else {
                next.push(pair[0]);
            }
        }
        current = next;
        level += 1;
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_leaf_levels() {
        let d = balanced_binary(4, &[0, 1, 2, 3]).unwrap();
        assert_eq!(d.level_sizes(), vec![4, 2, 1]);
        assert!(d.validate().is_empty());
        assert!(d.is_binary());
        assert_eq!(d.levels()[1].clusters(), &[vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn single_leaf() {
        let d = Dendrogram::single_leaf();
        assert_eq!(d.level_sizes(), vec![1]);
        assert!(d.validate().is_empty());
        assert_eq!(d.extract_k_clustering(1).unwrap().len(), 1);
    }

    #[test]
    fn extract_examples() {
        let d = balanced_binary(8, &(0..8).collect::<Vec<_>>()).unwrap();
        let three = d.extract_k_clustering(3).unwrap();
        let mut sizes = three.sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2, 4]);
        assert_eq!(three.clusters()[0], vec![0, 1]);

        assert_eq!(d.extract_k_clustering(2).unwrap(), d.levels()[2]);
        assert_eq!(d.extract_k_clustering(8).unwrap().len(), 8);
        assert!(d.extract_k_clustering(0).is_err());
        assert!(d.extract_k_clustering(9).is_err());
    }

    #[test]
    fn extract_opens_wide_nodes_one_child_at_a_time() {
        let mut b = DendrogramBuilder::new(5).unwrap();
        b.merge(vec![0, 1, 2, 3, 4], 1).unwrap();
        let d = b.finish().unwrap();
        for k in 1..=5 {
            let c = d.extract_k_clustering(k).unwrap();
            assert_eq!(c.len(), k);
        }
        let two = d.extract_k_clustering(2).unwrap();
        assert_eq!(two.clusters(), &[vec![0], vec![1, 2, 3, 4]]);
    }

    #[test]
    fn validate_flags_overlap_and_skipped_refinement() {
        let overlap = Dendrogram::from_levels_unchecked(
            3,
            vec![
                vec![vec![0], vec![1], vec![2]],
                vec![vec![0, 1], vec![1, 2]],
                vec![vec![0, 1, 2]],
            ],
        );
        assert!(!overlap.validate().is_empty());

        let crossing = Dendrogram::from_levels_unchecked(
            4,
            vec![
                vec![vec![0], vec![1], vec![2], vec![3]],
                vec![vec![0, 1], vec![2, 3]],
                vec![vec![0, 2], vec![1, 3]],
                vec![vec![0, 1, 2, 3]],
            ],
        );
        assert!(!crossing.validate().is_empty());

        let good = Dendrogram::from_levels(
            4,
            vec![
                vec![vec![0], vec![1], vec![2], vec![3]],
                vec![vec![0, 1], vec![2], vec![3]],
                vec![vec![0, 1, 2, 3]],
            ],
        )
        .unwrap();
        assert!(good.validate().is_empty());
        assert_eq!(good.max_arity(), 3);
    }

    #[test]
    fn builder_rejects_bad_merges() {
        let mut b = DendrogramBuilder::new(3).unwrap();
        assert!(b.merge(vec![0], 1).is_err());
        assert!(b.merge(vec![0, 5], 1).is_err());
        let x = b.merge(vec![0, 1], 1).unwrap();
        assert!(b.merge(vec![0, 2], 2).is_err());
        assert!(b.merge(vec![x, 2], 1).is_err());
        let partial = DendrogramBuilder::new(3).unwrap();
        assert!(partial.finish().is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut b = DendrogramBuilder::new(5).unwrap();
        let a = b.merge(vec![0, 3], 1).unwrap();
        let c = b.merge(vec![1, 2, 4], 1).unwrap();
        b.merge(vec![a, c], 2).unwrap();
        let d = b.finish().unwrap();
        let text = d.to_text();
        assert_eq!(text, "# leaves=5\n1,0,3\n1,1,2,4\n2,5,6\n");
        assert_eq!(Dendrogram::parse_text(&text).unwrap(), d);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Dendrogram::parse_text("# leaves=3\n1,0,1\n1,x,2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(Dendrogram::parse_text("1,0,1\n").is_err());
        assert!(Dendrogram::parse_text("# leaves=3\n1,0,1\n").is_err());
    }

    #[test]
    fn summary_reports_balance() {
        let d = balanced_binary(6, &(0..6).collect::<Vec<_>>()).unwrap();
        let s = d.summary();
        assert_eq!(s.levels.len(), d.levels().len());
        assert_eq!(s.levels[1].clusters, 3);
        assert_eq!(s.levels[1].balance, 1.0);
        assert_eq!(s.levels[2].balance, 0.5);
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use crate::checks::random_binary_dendrogram;
    use crate::clusterers::{matching_affinity, Mode};
    use crate::graph::Orientation;
    use crate::matching::EngineChoice;
    use crate::testgen::int_graph;
    use rand::SeedableRng;

    use super::*;

    proptest! {
        #[test]
        fn extraction_yields_k_dendrogram_nodes(g in int_graph(1..=20, Orientation::Similarity), seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let binary = random_binary_dendrogram(&mut rng, g.n());
            let (ma, _) = matching_affinity(&g, Mode::Max, &EngineChoice::greedy(), 0.05).unwrap();
            for d in [&binary, &ma] {
                prop_assert!(d.validate().is_empty());
                for k in 1..=g.n() {
                    let c = d.extract_k_clustering(k).unwrap();
                    prop_assert_eq!(c.len(), k);
                    for cl in c.clusters() {
                        prop_assert!((0..d.nodes().len()).any(|id| d.members(id) == cl.as_slice()));
                    }
                }
            }
        }

        #[test]
        fn text_form_round_trips(n in 1usize..40, seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let d = random_binary_dendrogram(&mut rng, n);
            prop_assert_eq!(Dendrogram::parse_text(&d.to_text()).unwrap(), d);
        }

        #[test]
        fn parser_never_panics(text in "(# leaves=[0-9]{1,3}\n)?([0-9]{1,2}(,[0-9]{1,2}){0,3}\n){0,6}") {
            let _ = Dendrogram::parse_text(&text);
        }
    }
}
