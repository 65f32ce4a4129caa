//! Weighted matching engines.
//!
//! All engines read a dense weight table. An entry of `f64::NEG_INFINITY`
//! marks a pair that may not be matched (used by the k-sized reduction for
//! dummy-dummy pairs); every finite entry, including zero, is matchable.

mod exact;
mod greedy;
mod ksized;
mod local_search;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DenseMatrix;

pub use exact::exact_max_matching;
pub use greedy::greedy_matching;
pub use ksized::{k_sized_max_matching, probe_bound, reduction_delta, KMatchOutcome};
pub use local_search::{improve, local_search_matching};

/// Vertex-count cap for the exact engine unless overridden.
pub const DEFAULT_SIZE_CAP: usize = 22;
/// Environment variable that overrides [`DEFAULT_SIZE_CAP`].
pub const SIZE_CAP_ENV: &str = "MATCHCLUST_SIZE_CAP";
/// Hard ceiling for the bitmask table regardless of configuration.
pub(crate) const MAX_EXACT_VERTICES: usize = 28;

/// Disjoint vertex pairs and their total weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
    total_weight: f64,
}

impl Matching {
    pub fn empty() -> Self {
        Matching {
            pairs: Vec::new(),
            total_weight: 0.0,
        }
    }

    /// Normalizes each pair to `(low, high)`, sorts the pairs, and sums
    /// their weights from `w`.
    pub fn from_pairs(pairs: Vec<(usize, usize)>, w: &DenseMatrix) -> Self {
        let mut pairs: Vec<_> = pairs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort_unstable();
        let total_weight = pairs.iter().map(|&(a, b)| w.get(a, b)).sum();
        Matching {
            pairs,
            total_weight,
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn is_perfect_on(&self, n: usize) -> bool {
        self.pairs.len() * 2 == n
    }

    /// `mate[v]` for every vertex below `n`.
    pub fn mates(&self, n: usize) -> Vec<Option<usize>> {
        let mut mate = vec![None; n];
        for &(a, b) in &self.pairs {
            mate[a] = Some(b);
            mate[b] = Some(a);
        }
        mate
    }

    /// Checks disjointness, ranges, and that the stored weight matches `w`.
    pub fn validate(&self, w: &DenseMatrix) -> Result<()> {
        let n = w.n();
        let mut used = vec![false; n];
        for &(a, b) in &self.pairs {
            if a >= n || b >= n || a == b {
                return Err(Error::pre(format!("pair ({a}, {b}) is not an edge")));
            }
            if used[a] || used[b] {
                return Err(Error::pre(format!("pair ({a}, {b}) reuses a vertex")));
            }
            if !w.get(a, b).is_finite() {
                return Err(Error::pre(format!("pair ({a}, {b}) is a forbidden edge")));
            }
            used[a] = true;
            used[b] = true;
        }
        let recomputed: f64 = self.pairs.iter().map(|&(a, b)| w.get(a, b)).sum();
        if (recomputed - self.total_weight).abs() > 1e-9 * (1.0 + recomputed.abs()) {
            return Err(Error::pre(format!(
                "stored weight {} differs from recomputed {recomputed}",
                self.total_weight
            )));
        }
        Ok(())
    }

    /// Keeps the `k` heaviest pairs (ties by pair order).
    pub(crate) fn truncated(&self, k: usize, w: &DenseMatrix) -> Matching {
        if self.pairs.len() <= k {
            return self.clone();
        }
        let mut ranked = self.pairs.clone();
        ranked.sort_by(|&(a, b), &(c, d)| w.get(c, d).total_cmp(&w.get(a, b)));
        ranked.truncate(k);
        Matching::from_pairs(ranked, w)
    }
}

/// Which matching routine backs a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineKind {
    ExactBruteforce,
    Greedy,
    LocalSearch,
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::ExactBruteforce => "exact",
            EngineKind::Greedy => "greedy",
            EngineKind::LocalSearch => "local_search",
        })
    }
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact_bruteforce" | "exact-bruteforce" => Ok(EngineKind::ExactBruteforce),
            "greedy" => Ok(EngineKind::Greedy),
            "local_search" | "local-search" | "local" => Ok(EngineKind::LocalSearch),
            other => Err(Error::pre(format!("unknown engine `{other}`"))),
        }
    }
}

/// Engine plus its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineChoice {
    pub kind: EngineKind,
    /// Relative-gain threshold for local search; ignored by the other engines.
    pub epsilon: f64,
    /// Largest instance the exact engine accepts.
    pub size_cap: usize,
}

impl EngineChoice {
    pub fn exact() -> Self {
        EngineChoice {
            kind: EngineKind::ExactBruteforce,
            epsilon: 0.05,
            size_cap: DEFAULT_SIZE_CAP,
        }
    }

    pub fn greedy() -> Self {
        EngineChoice {
            kind: EngineKind::Greedy,
            ..EngineChoice::exact()
        }
    }

    pub fn local_search(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(EngineChoice {
            kind: EngineKind::LocalSearch,
            epsilon,
            size_cap: DEFAULT_SIZE_CAP,
        })
    }

    pub fn new(kind: EngineKind, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(EngineChoice {
            kind,
            epsilon,
            size_cap: DEFAULT_SIZE_CAP,
        })
    }

    pub fn with_size_cap(mut self, cap: usize) -> Self {
        self.size_cap = cap;
        self
    }

    /// Applies `MATCHCLUST_SIZE_CAP` when it is set to a valid integer.
    pub fn with_env_size_cap(self) -> Result<Self> {
        match std::env::var(SIZE_CAP_ENV) {
            Ok(v) => {
                let cap = v.trim().parse::<usize>().map_err(|_| {
                    Error::pre(format!("{SIZE_CAP_ENV}=`{v}` is not a non-negative integer"))
                })?;
                Ok(self.with_size_cap(cap))
            }
            Err(_) => Ok(self),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.kind == EngineKind::ExactBruteforce
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::pre(format!("epsilon must lie in (0, 1), got {epsilon}")))
    }
}

/// Size constraint on a requested matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cardinality {
    Any,
    AtMost(usize),
    Exactly(usize),
}

impl Cardinality {
    pub(crate) fn limit(self, n: usize) -> usize {
        match self {
            Cardinality::Any => n / 2,
            Cardinality::AtMost(k) | Cardinality::Exactly(k) => k.min(n / 2),
        }
    }

    pub(crate) fn check(self, n: usize) -> Result<()> {
        match self {
            Cardinality::Exactly(k) if 2 * k > n => Err(Error::Infeasible(format!(
                "{k} pairs requested on {n} vertices"
            ))),
            _ => Ok(()),
        }
    }
}

/// Maximum-weight matching under a cardinality constraint, via `engine`.
pub fn max_weight_matching(
    w: &DenseMatrix,
    card: Cardinality,
    engine: &EngineChoice,
) -> Result<Matching> {
    card.check(w.n())?;
    match engine.kind {
        EngineKind::ExactBruteforce => exact::exact_with(w, card, engine.size_cap),
        EngineKind::Greedy => greedy::greedy_with(w, card),
        EngineKind::LocalSearch => local_search::local_search_with(w, card, engine.epsilon),
    }
}

/// `W - w` on every finite entry, `W` being the largest finite weight.
pub(crate) fn complement(w: &DenseMatrix) -> DenseMatrix {
    let top = w.max_offdiag();
    w.map(|x| if x.is_finite() { top - x } else { x })
}

/// Maximum-weight perfect matching (even vertex count).
pub fn max_perfect_matching(w: &DenseMatrix, engine: &EngineChoice) -> Result<Matching> {
    let n = w.n();
    if !n.is_multiple_of(2) {
        return Err(Error::Infeasible(format!(
            "no perfect matching on {n} vertices"
        )));
    }
    max_weight_matching(w, Cardinality::Exactly(n / 2), engine)
}

/// Minimum-weight perfect matching, found by maximizing complemented weights.
pub fn min_perfect_matching(w: &DenseMatrix, engine: &EngineChoice) -> Result<Matching> {
    let n = w.n();
    if !n.is_multiple_of(2) {
        return Err(Error::Infeasible(format!(
            "no perfect matching on {n} vertices"
        )));
    }
    let m = max_weight_matching(&complement(w), Cardinality::Exactly(n / 2), engine)?;
    Ok(Matching::from_pairs(m.pairs, w))
}

/// Result of [`min_k_sized_matching`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinKOutcome {
    pub matching: Matching,
    /// Set when a heuristic engine produced the matching: the result is a
    /// best-effort stand-in for an approximate minimum k-sized matching,
    /// not a certified one.
    pub heuristic_stand_in: bool,
}

/// Minimum-weight matching with exactly `k_edges` pairs.
pub fn min_k_sized_matching(
    w: &DenseMatrix,
    k_edges: usize,
    engine: &EngineChoice,
) -> Result<MinKOutcome> {
    let n = w.n();
    if k_edges == 0 || 2 * k_edges > n {
        return Err(Error::Infeasible(format!(
            "k_edges = {k_edges} is not in 1..={} for {n} vertices",
            n / 2
        )));
    }
    let m = max_weight_matching(&complement(w), Cardinality::Exactly(k_edges), engine)?;
    Ok(MinKOutcome {
        matching: Matching::from_pairs(m.pairs, w),
        heuristic_stand_in: !engine.is_exact(),
    })
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::graph::Orientation;
    use crate::oracle::brute_max_matching;
    use crate::testgen::int_graph;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn engines_are_valid_and_ordered(g in int_graph(2..=10, Orientation::Similarity)) {
            let w = g.weights();
            let exact = max_weight_matching(w, Cardinality::Any, &EngineChoice::exact()).unwrap();
            let greedy = greedy_matching(w);
            let local = local_search_matching(w, 0.05).unwrap();
            for m in [&exact, &greedy, &local] {
                prop_assert!(m.validate(w).is_ok());
            }
            prop_assert!((exact.total_weight() - brute_max_matching(&g, None)).abs() < 1e-9);
            prop_assert!(greedy.total_weight() >= 0.5 * exact.total_weight() - 1e-9);
            prop_assert!(local.total_weight() >= greedy.total_weight() - 1e-9);
            prop_assert_eq!(greedy_matching(w), greedy);
            prop_assert_eq!(local_search_matching(w, 0.05).unwrap(), local);
        }

        #[test]
        fn k_sized_is_near_optimal(g in int_graph(2..=10, Orientation::Similarity), pick in 0usize..5) {
            let n = g.n();
            let k = 1 + pick % (n / 2);
            let out = k_sized_max_matching(g.weights(), k, 0.05, &EngineChoice::exact()).unwrap();
            let opt = brute_max_matching(&g, Some(k));
            prop_assert!(out.matching.len() <= k);
            prop_assert!(out.matching.total_weight() >= 0.95 * opt - 1e-9);
            prop_assert!(out.probes <= probe_bound(n, g.max_weight() as u64));
        }

        #[test]
        fn perfect_matchings_hit_both_extremes(g in int_graph(1..=4, Orientation::Similarity)) {
            let g = crate::graph::WeightedGraph::from_fn(2 * g.n(), Orientation::Similarity, |i, j| {
                g.weight(i % g.n(), j % g.n()) + (i + j) as f64
            }).unwrap();
            let (hi, lo) = crate::oracle::brute_perfect_matching_range(&g);
            let e = EngineChoice::exact();
            prop_assert!((max_perfect_matching(g.weights(), &e).unwrap().total_weight() - hi).abs() < 1e-9);
            prop_assert!((min_perfect_matching(g.weights(), &e).unwrap().total_weight() - lo).abs() < 1e-9);
        }
    }
}
