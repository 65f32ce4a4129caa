//! Exact hierarchy objectives.
//!
//! Every pair `(i, j)` is charged at the node where `i` and `j` first meet.
//! For an internal node the pairs meeting there are exactly the cross pairs
//! between distinct children, so each objective is one pass over nodes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{check_disjoint_nonempty, cross_sum, Clustering, Orientation, WeightedGraph};
use crate::hierarchy::Dendrogram;

fn check_sizes(g: &WeightedGraph, d: &Dendrogram) -> Result<()> {
    if g.n() != d.leaves() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            found: d.leaves(),
        });
    }
    if d.nodes().is_empty() {
        return Err(Error::pre("dendrogram has no merge tree"));
    }
    Ok(())
}

fn require(g: &WeightedGraph, want: Orientation, what: &str) -> Result<()> {
    if g.orientation() != want {
        return Err(Error::Orientation(format!(
            "{what} is defined on {want} graphs, got a {} graph",
            g.orientation()
        )));
    }
    Ok(())
}

/// `(leaf count, weight of pairs meeting here)` per internal node, in id order.
fn meeting_weights(g: &WeightedGraph, d: &Dendrogram) -> Vec<(usize, f64)> {
    d.internal_nodes()
        .map(|id| {
            let node = d.node(id);
            let ch = node.children();
            let mut w = 0.0;
            for a in 0..ch.len() {
                for b in (a + 1)..ch.len() {
                    w += cross_sum(g, d.members(ch[a]), d.members(ch[b]));
                }
            }
            (node.size(), w)
        })
        .collect()
}

fn leaf_weighted(g: &WeightedGraph, d: &Dendrogram) -> f64 {
    meeting_weights(g, d)
        .into_iter()
        .map(|(s, w)| s as f64 * w)
        .sum()
}

/// Sum over pairs of `w(i, j)` times the leaf count under their meeting node.
pub fn dasgupta_cost(g: &WeightedGraph, d: &Dendrogram) -> Result<f64> {
    check_sizes(g, d)?;
    require(g, Orientation::Similarity, "cost")?;
    Ok(leaf_weighted(g, d))
}

/// Sum over pairs of `w(i, j)` times the number of vertices *not* under
/// their meeting node.
pub fn revenue(g: &WeightedGraph, d: &Dendrogram) -> Result<f64> {
    check_sizes(g, d)?;
    require(g, Orientation::Similarity, "revenue")?;
    let n = g.n();
    Ok(meeting_weights(g, d)
        .into_iter()
        .map(|(s, w)| (n - s) as f64 * w)
        .sum())
}

/// The cost formula evaluated on a dissimilarity graph.
pub fn value(g: &WeightedGraph, d: &Dendrogram) -> Result<f64> {
    check_sizes(g, d)?;
    require(g, Orientation::Dissimilarity, "value")?;
    Ok(leaf_weighted(g, d))
}

fn outside(n: usize, a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; n];
    for &v in a.iter().chain(b) {
        inside[v] = true;
    }
    (0..n).filter(|&v| !inside[v]).collect()
}

/// `|B| w(A, rest) + |A| w(B, rest)` where `rest` is everything outside `A ∪ B`.
pub fn merge_cost(g: &WeightedGraph, a: &[usize], b: &[usize]) -> Result<f64> {
    check_disjoint_nonempty(g.n(), a, b)?;
    let rest = outside(g.n(), a, b);
    Ok(b.len() as f64 * cross_sum(g, a, &rest) + a.len() as f64 * cross_sum(g, b, &rest))
}

/// `(n - |A| - |B|) w(A, B)`.
pub fn merge_revenue(g: &WeightedGraph, a: &[usize], b: &[usize]) -> Result<f64> {
    check_disjoint_nonempty(g.n(), a, b)?;
    Ok((g.n() - a.len() - b.len()) as f64 * cross_sum(g, a, b))
}

/// Sum of per-merge terms for going from `fine` to `coarse`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MergeSum {
    pub total: f64,
    /// Some coarse cluster joined three or more fine clusters; those were
    /// folded left to right, which is one choice among several.
    pub multiway: bool,
}

fn merge_sum(
    g: &WeightedGraph,
    fine: &Clustering,
    coarse: &Clustering,
    term: impl Fn(&WeightedGraph, &[usize], &[usize]) -> Result<f64>,
) -> Result<MergeSum> {
    let n = g.n();
    if fine.n() != n || coarse.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: if fine.n() != n { fine.n() } else { coarse.n() },
        });
    }
    if !coarse.is_coarsening_of(fine) {
        return Err(Error::InvalidPartition(
            "target clustering is not a coarsening of the source".into(),
        ));
    }
    let labels = coarse.labels();
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); coarse.len()];
    for (fi, c) in fine.clusters().iter().enumerate() {
        groups[labels[c[0]]].push(fi);
    }
    let mut total = 0.0;
    let mut multiway = false;
    for group in groups {
        if group.len() > 2 {
            multiway = true;
        }
        let mut acc: Vec<usize> = fine.clusters()[group[0]].clone();
        for &fi in &group[1..] {
            let next = &fine.clusters()[fi];
            total += term(g, &acc, next)?;
            acc.extend_from_slice(next);
        }
    }
    Ok(MergeSum { total, multiway })
}

pub fn clustering_cost(g: &WeightedGraph, fine: &Clustering, coarse: &Clustering) -> Result<MergeSum> {
    merge_sum(g, fine, coarse, merge_cost)
}

pub fn clustering_revenue(
    g: &WeightedGraph,
    fine: &Clustering,
    coarse: &Clustering,
) -> Result<MergeSum> {
    merge_sum(g, fine, coarse, merge_revenue)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelTransition {
    pub from_level: usize,
    pub to_level: usize,
    pub clustering_cost: f64,
    pub clustering_revenue: f64,
    pub multiway: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveReport {
    pub orientation: Orientation,
    pub n: usize,
    pub total_weight: f64,
    pub cost: Option<f64>,
    pub revenue: Option<f64>,
    pub value: Option<f64>,
    pub per_level: Vec<LevelTransition>,
}

impl ObjectiveReport {
    /// Cost and revenue for similarity graphs, value for dissimilarity graphs.
    pub fn evaluate(g: &WeightedGraph, d: &Dendrogram) -> Result<Self> {
        check_sizes(g, d)?;
        let (cost, rev, val) = match g.orientation() {
            Orientation::Similarity => (Some(dasgupta_cost(g, d)?), Some(revenue(g, d)?), None),
            Orientation::Dissimilarity => (None, None, Some(value(g, d)?)),
        };
        let levels = d.levels();
        let mut per_level = Vec::with_capacity(levels.len().saturating_sub(1));
        for i in 1..levels.len() {
            let c = clustering_cost(g, &levels[i - 1], &levels[i])?;
            let r = clustering_revenue(g, &levels[i - 1], &levels[i])?;
            per_level.push(LevelTransition {
                from_level: i - 1,
                to_level: i,
                clustering_cost: c.total,
                clustering_revenue: r.total,
                multiway: c.multiway,
            });
        }
        Ok(ObjectiveReport {
            orientation: g.orientation(),
            n: g.n(),
            total_weight: g.total_weight(),
            cost,
            revenue: rev,
            value: val,
            per_level,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One CSV row per level transition.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.per_level.is_empty() {
            w.write_record(["from_level", "to_level", "clustering_cost", "clustering_revenue", "multiway"])
                .map_err(|e| Error::pre(e.to_string()))?;
        }
        for t in &self.per_level {
            w.serialize(t).map_err(|e| Error::pre(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::pre(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
