use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Mode, RoundLedger, TieBreakPolicy};
use crate::error::Result;
use crate::graph::WeightedGraph;
use crate::hierarchy::{Dendrogram, DendrogramBuilder};

struct Ties {
    policy: TieBreakPolicy,
    n: usize,
    priority: Vec<u64>,
    is_hub: Vec<bool>,
    owner: Vec<Option<usize>>,
}

impl Ties {
    fn new(policy: &TieBreakPolicy, n: usize) -> Self {
        let mut priority = Vec::new();
        let mut is_hub = vec![false; n];
        let mut owner = vec![None; n];
        match policy {
            TieBreakPolicy::SeededRandom(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                priority = (0..n * n).map(|_| rng.gen()).collect();
            }
            TieBreakPolicy::AdversarialHub(hubs) => {
                for &h in hubs {
                    is_hub[h] = true;
                }
                let mut current = None;
                for (v, slot) in owner.iter_mut().enumerate() {
                    if is_hub[v] {
                        current = Some(v);
                    }
                    *slot = current;
                }
            }
            TieBreakPolicy::LowestIndex => {}
        }
        Ties {
            policy: policy.clone(),
            n,
            priority,
            is_hub,
            owner,
        }
    }

    /// Sort key for candidate edge `u -> v` (`u` inside, `v` outside); smaller wins.
    fn key(&self, u: usize, v: usize) -> (u64, usize, usize) {
        match &self.policy {
            TieBreakPolicy::LowestIndex => (0, v, u),
            TieBreakPolicy::SeededRandom(_) => {
                let (a, b) = if u < v { (u, v) } else { (v, u) };
                (self.priority[a * self.n + b], v, u)
            }
            TieBreakPolicy::AdversarialHub(_) => {
                let hub_u = self.is_hub[u];
                let hub_v = self.is_hub[v];
                let rank = if !hub_u && self.owner[u] == Some(v) {
                    0
                } else if !hub_v && self.owner[u].is_some() && self.owner[u] == self.owner[v] {
                    1
                } else if hub_v && !hub_u {
                    2
                } else if !hub_v {
                    3
                } else {
                    4
                };
                (rank, v, u)
            }
        }
    }
}

/// Affinity clustering: each round every cluster picks its best outgoing
/// edge (heaviest in `Max` mode, lightest in `Min` mode) and every connected
/// component of picked edges becomes one cluster.
pub fn affinity_boruvka(
    g: &WeightedGraph,
    mode: Mode,
    policy: &TieBreakPolicy,
) -> Result<(Dendrogram, RoundLedger)> {
    let n = g.n();
    policy.check(n)?;
    let ties = Ties::new(policy, n);
    let mut b = DendrogramBuilder::new(n)?;
    let mut label: Vec<usize> = (0..n).collect();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut nodes: Vec<usize> = (0..n).collect();
    let mut ledger = RoundLedger {
        space_high_water: n,
        ..RoundLedger::default()
    };
    let mut round = 0;

    while clusters.len() > 1 {
        round += 1;
        let k = clusters.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for (ci, c) in clusters.iter().enumerate() {
            let mut best: Option<(f64, (u64, usize, usize), usize)> = None;
            for &u in c {
                for v in 0..n {
                    if label[v] == ci {
                        continue;
                    }
                    let x = g.weight(u, v);
                    let key = ties.key(u, v);
                    let take = match best {
                        None => true,
                        Some((bw, bk, _)) => mode.better(x, bw) || (x == bw && key < bk),
                    };
                    if take {
                        best = Some((x, key, v));
                    }
                }
            }
            if let Some((_, _, v)) = best {
                let (ra, rb) = (find(&mut parent, ci), find(&mut parent, label[v]));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }

        // Components in order of their smallest cluster index.
        let mut comp_index = vec![usize::MAX; k];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for ci in 0..k {
            let r = find(&mut parent, ci);
            if comp_index[r] == usize::MAX {
                comp_index[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[comp_index[r]].push(ci);
        }
        let mut next_clusters = Vec::with_capacity(groups.len());
        let mut next_nodes = Vec::with_capacity(groups.len());
        for group in &groups {
            let node = if group.len() == 1 {
                nodes[group[0]]
            } else {
                b.merge(group.iter().map(|&ci| nodes[ci]).collect(), round)?
            };
            let mut members: Vec<usize> =
                group.iter().flat_map(|&ci| clusters[ci].iter().copied()).collect();
            members.sort_unstable();
            next_clusters.push(members);
            next_nodes.push(node);
        }
        for (ci, c) in next_clusters.iter().enumerate() {
            for &v in c {
                label[v] = ci;
            }
        }
        clusters = next_clusters;
        nodes = next_nodes;
    }
    ledger.levels = round;
    Ok((b.finish()?, ledger))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Orientation;
    use crate::objectives::revenue;

    #[test]
    fn star_merges_in_one_round() {
        let g = WeightedGraph::from_fn(6, Orientation::Similarity, |i, _| if i == 0 { 1.0 } else { 0.0 }).unwrap();
        let (d, ledger) = affinity_boruvka(&g, Mode::Max, &TieBreakPolicy::LowestIndex).unwrap();
        assert_eq!(ledger.levels, 1);
        assert_eq!(d.internal_nodes().len(), 1);
        assert_eq!(revenue(&g, &d).unwrap(), 0.0);
    }

    #[test]
    fn two_vertices() {
        let g = WeightedGraph::from_fn(2, Orientation::Similarity, |_, _| 3.0).unwrap();
        let (d, _) = affinity_boruvka(&g, Mode::Max, &TieBreakPolicy::LowestIndex).unwrap();
        assert_eq!(d.level_sizes(), vec![2, 1]);
    }

    #[test]
    fn hub_policy_builds_two_stars_on_bipartite_graph() {
        let h = 4;
        let g = WeightedGraph::from_fn(2 * h, Orientation::Similarity, |i, j| {
            if (i < h) != (j < h) { 1.0 } else { 0.0 }
        })
        .unwrap();
        let policy = TieBreakPolicy::AdversarialHub(vec![0, h]);
        let (d, ledger) = affinity_boruvka(&g, Mode::Max, &policy).unwrap();
        assert_eq!(ledger.levels, 2);
        assert_eq!(d.level_sizes(), vec![8, 2, 1]);
        assert_eq!(d.levels()[1].clusters(), &[vec![0, 5, 6, 7], vec![1, 2, 3, 4]]);
        assert_eq!(revenue(&g, &d).unwrap(), (2 * h * (h - 1)) as f64);
    }

    #[test]
    fn seeded_policy_is_deterministic() {
        let g = WeightedGraph::from_fn(9, Orientation::Similarity, |_, _| 1.0).unwrap();
        let p = TieBreakPolicy::SeededRandom(7);
        let a = affinity_boruvka(&g, Mode::Max, &p).unwrap();
        let b = affinity_boruvka(&g, Mode::Max, &p).unwrap();
        assert_eq!(a, b);
        assert!(a.0.validate().is_empty());
    }
}
