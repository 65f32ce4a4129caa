use super::{Mode, RoundLedger};
use crate::error::Result;
use crate::graph::{build_padded_clustering_graph, coarsen, DenseMatrix, WeightedGraph};
use crate::hierarchy::{Dendrogram, DendrogramBuilder};
use crate::matching::{
    k_sized_max_matching, max_perfect_matching, min_k_sized_matching, min_perfect_matching,
    EngineChoice, Matching,
};

/// Smallest `N` with `n <= 2^N`.
pub fn levels_for(n: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}

/// Adds heaviest (or lightest) pairs among unmatched vertices until `k` pairs.
fn pad_to(w: &DenseMatrix, m: Matching, k: usize, mode: Mode) -> (Matching, usize) {
    let n = w.n();
    let mut used = vec![false; n];
    for &(a, b) in m.pairs() {
        used[a] = true;
        used[b] = true;
    }
    let mut pairs = m.pairs().to_vec();
    let mut added = 0;
    while pairs.len() < k {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            if used[i] {
                continue;
            }
            for j in (i + 1)..n {
                if used[j] {
                    continue;
                }
                let x = w.get(i, j);
                if best.is_none_or(|(bw, _, _)| mode.better(x, bw)) {
                    best = Some((x, i, j));
                }
            }
        }
        let Some((_, i, j)) = best else { break };
        used[i] = true;
        used[j] = true;
        pairs.push((i, j));
        added += 1;
    }
    (Matching::from_pairs(pairs, w), added)
}

/// Matching Affinity Clustering.
///
/// With `2^(N-1) < n <= 2^N`, the first round merges `n - 2^(N-1)` matched
/// pairs and pairs every unmatched vertex with a phantom copy of itself,
/// leaving `2^(N-1)` clusters of padded size two. Each later round merges
/// along a perfect matching of the average-linkage clustering graph.
pub fn matching_affinity(
    g: &WeightedGraph,
    mode: Mode,
    engine: &EngineChoice,
    epsilon: f64,
) -> Result<(Dendrogram, RoundLedger)> {
    mode.check(g)?;
    let n = g.n();
    let levels = levels_for(n);
    let mut ledger = RoundLedger {
        levels,
        ..RoundLedger::default()
    };
    if n == 1 {
        ledger.space_high_water = 1;
        return Ok((Dendrogram::single_leaf(), ledger));
    }

    let full = 1usize << levels;
    let k_edges = n - full / 2;
    let w = g.weights();
    let first = if 2 * k_edges == n {
        ledger.matching_rounds.push(1);
        match mode {
            Mode::Max => max_perfect_matching(w, engine)?,
            Mode::Min => min_perfect_matching(w, engine)?,
        }
    } else {
        match mode {
            Mode::Max => {
                let out = k_sized_max_matching(w, k_edges, epsilon, engine)?;
                ledger.matching_rounds.push(out.probes);
                let (m, added) = pad_to(w, out.matching, k_edges, mode);
                ledger.padded_pairs = added;
                m
            }
            Mode::Min => {
                let out = min_k_sized_matching(w, k_edges, engine)?;
                ledger.matching_rounds.push(1);
                ledger.heuristic_stand_in = out.heuristic_stand_in;
                out.matching
            }
        }
    };
    ledger.space_high_water = full;

    // Level-0 padded graph: reals 0..n, then one phantom per unmatched vertex.
    let mut matched = vec![false; n];
    for &(a, b) in first.pairs() {
        matched[a] = true;
        matched[b] = true;
    }
    let unmatched: Vec<usize> = (0..n).filter(|&v| !matched[v]).collect();
    let members: Vec<Vec<usize>> = (0..n + unmatched.len()).map(|v| vec![v]).collect();
    let cg0 = build_padded_clustering_graph(g, members, unmatched.clone())?;
    let mut pairs = first.pairs().to_vec();
    pairs.extend(unmatched.iter().enumerate().map(|(t, &v)| (v, n + t)));
    let pairing = Matching::from_pairs(pairs, cg0.weights());

    let mut b = DendrogramBuilder::new(n)?;
    let mut node_of: Vec<usize> = Vec::with_capacity(pairing.len());
    for &(a, c) in pairing.pairs() {
        node_of.push(if c >= n { a } else { b.merge(vec![a, c], 1)? });
    }
    let mut cg = coarsen(&cg0, &pairing)?;

    let mut round = 2;
    while cg.len() > 1 {
        let m = match mode {
            Mode::Max => max_perfect_matching(cg.weights(), engine)?,
            Mode::Min => min_perfect_matching(cg.weights(), engine)?,
        };
        ledger.matching_rounds.push(1);
        ledger.space_high_water = ledger.space_high_water.max(cg.len());
        let mut next = Vec::with_capacity(m.len());
        for &(a, c) in m.pairs() {
            next.push(b.merge(vec![node_of[a], node_of[c]], round)?);
        }
        node_of = next;
        cg = coarsen(&cg, &m)?;
        round += 1;
    }
    Ok((b.finish()?, ledger))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::graph::Orientation;
    use crate::objectives::revenue;

    fn seven() -> WeightedGraph {
        WeightedGraph::from_fn(7, Orientation::Similarity, |i, j| ((i * 3 + j * 5) % 7) as f64).unwrap()
    }

    #[test]
    fn levels_for_examples() {
        assert_eq!(levels_for(1), 0);
        assert_eq!(levels_for(2), 1);
        assert_eq!(levels_for(7), 3);
        assert_eq!(levels_for(8), 3);
        assert_eq!(levels_for(9), 4);
    }

    #[test]
    fn seven_vertices() {
        let (d, ledger) = matching_affinity(&seven(), Mode::Max, &EngineChoice::exact(), 0.05).unwrap();
        assert_eq!(d.level_sizes(), vec![7, 4, 2, 1]);
        assert_eq!(ledger.levels, 3);
        assert_eq!(ledger.space_high_water, 8);
        assert!(d.validate().is_empty());
        let one = d.levels()[1].sizes();
        assert_eq!(one.iter().filter(|&&s| s == 2).count(), 3);
    }

    #[test]
    fn power_of_two_is_perfectly_balanced() {
        let g = WeightedGraph::from_fn(8, Orientation::Similarity, |i, j| ((i + j) % 3) as f64).unwrap();
        let (d, ledger) = matching_affinity(&g, Mode::Max, &EngineChoice::exact(), 0.05).unwrap();
        assert_eq!(d.level_sizes(), vec![8, 4, 2, 1]);
        assert_eq!(ledger.matching_rounds, vec![1, 1, 1]);
        for level in d.levels() {
            let s = level.sizes();
            assert_eq!(s.iter().min(), s.iter().max());
        }
    }

    #[test]
    fn k22_revenue() {
        let g = WeightedGraph::from_fn(4, Orientation::Similarity, |i, j| {
            if (i < 2) != (j < 2) { 1.0 } else { 0.0 }
        })
        .unwrap();
        let (d, _) = matching_affinity(&g, Mode::Max, &EngineChoice::exact(), 0.05).unwrap();
        assert_eq!(revenue(&g, &d).unwrap(), 4.0);
    }

    #[test]
    fn min_mode_and_orientation_checks() {
        let g = WeightedGraph::from_fn(6, Orientation::Dissimilarity, |i, j| (i + j) as f64).unwrap();
        let (d, ledger) = matching_affinity(&g, Mode::Min, &EngineChoice::exact(), 0.05).unwrap();
        assert_eq!(d.level_sizes(), vec![6, 4, 2, 1]);
        assert!(!ledger.heuristic_stand_in);
        assert!(matches!(
            matching_affinity(&g, Mode::Max, &EngineChoice::exact(), 0.05),
            Err(Error::Orientation(_))
        ));
        let (_, greedy) = matching_affinity(&g, Mode::Min, &EngineChoice::greedy(), 0.05).unwrap();
        assert!(greedy.heuristic_stand_in);
    }

    #[test]
    fn non_integer_weights_rejected_when_reduction_is_needed() {
        let g = WeightedGraph::from_fn(5, Orientation::Similarity, |_, _| 0.5).unwrap();
        assert!(matches!(
            matching_affinity(&g, Mode::Max, &EngineChoice::exact(), 0.05),
            Err(Error::NonIntegerWeight { .. })
        ));
        let g4 = WeightedGraph::from_fn(4, Orientation::Similarity, |_, _| 0.5).unwrap();
        assert!(matching_affinity(&g4, Mode::Max, &EngineChoice::exact(), 0.05).is_ok());
    }

    #[test]
    fn tiny_inputs() {
        let g1 = WeightedGraph::from_fn(1, Orientation::Similarity, |_, _| 0.0).unwrap();
        let (d, ledger) = matching_affinity(&g1, Mode::Max, &EngineChoice::exact(), 0.05).unwrap();
        assert_eq!(d.level_sizes(), vec![1]);
        assert_eq!(ledger.levels, 0);
        let g3 = WeightedGraph::from_fn(3, Orientation::Similarity, |_, _| 1.0).unwrap();
        let (d, _) = matching_affinity(&g3, Mode::Max, &EngineChoice::exact(), 0.05).unwrap();
        assert_eq!(d.level_sizes(), vec![3, 2, 1]);
    }
}
