//! Hierarchical clustering algorithms.

mod affinity;
mod average_linkage;
mod matching_affinity;
mod random_divisive;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Orientation, WeightedGraph};
use crate::hierarchy::Dendrogram;
use crate::matching::EngineChoice;

pub use affinity::affinity_boruvka;
pub use average_linkage::average_linkage_clusterer;
pub use matching_affinity::{levels_for, matching_affinity};
pub use random_divisive::random_divisive;

/// Whether clusters are built from heavy (similarity) or light
/// (dissimilarity) edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Max,
    Min,
}

impl Mode {
    pub fn orientation(self) -> Orientation {
        match self {
            Mode::Max => Orientation::Similarity,
            Mode::Min => Orientation::Dissimilarity,
        }
    }

    pub fn for_orientation(o: Orientation) -> Self {
        match o {
            Orientation::Similarity => Mode::Max,
            Orientation::Dissimilarity => Mode::Min,
        }
    }

    /// True when `a` is strictly preferred to `b`.
    #[inline]
    pub(crate) fn better(self, a: f64, b: f64) -> bool {
        match self {
            Mode::Max => a > b,
            Mode::Min => a < b,
        }
    }

    pub(crate) fn check(self, g: &WeightedGraph) -> Result<()> {
        if g.orientation() != self.orientation() {
            return Err(Error::Orientation(format!(
                "mode {self} needs a {} graph, got a {} graph",
                self.orientation(),
                g.orientation()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Max => "max",
            Mode::Min => "min",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Mode::Max),
            "min" => Ok(Mode::Min),
            other => Err(Error::pre(format!("unknown mode `{other}` (expected max or min)"))),
        }
    }
}

/// Logical round and space accounting for one run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundLedger {
    /// Merge rounds.
    pub levels: usize,
    /// Engine invocations charged to each matching call, in round order.
    pub matching_rounds: Vec<usize>,
    /// Largest weight row held by one simulated machine (one machine per
    /// vertex of the matching instance, dummies included).
    pub space_high_water: usize,
    /// Pairs added after the first-round matching to reach the required size.
    pub padded_pairs: usize,
    /// A heuristic engine stood in for an exact minimum k-sized matching.
    pub heuristic_stand_in: bool,
}

impl RoundLedger {
    pub fn first_round_probes(&self) -> Option<usize> {
        self.matching_rounds.first().copied()
    }
}

/// How Affinity resolves equal-weight candidate edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "arg")]
pub enum TieBreakPolicy {
    /// Smallest outside endpoint, then smallest inside endpoint.
    LowestIndex,
    /// A fixed random priority per vertex pair, drawn from the seed.
    SeededRandom(u64),
    /// Every vertex belongs to the group of the largest hub not above it.
    /// Ties prefer, in order: a non-hub's own hub, a non-hub of the same
    /// group, any hub (from a non-hub), any non-hub; then smallest ids.
    AdversarialHub(Vec<usize>),
}

impl TieBreakPolicy {
    pub(crate) fn check(&self, n: usize) -> Result<()> {
        if let TieBreakPolicy::AdversarialHub(hubs) = self {
            if hubs.is_empty() {
                return Err(Error::pre("adversarial policy needs at least one hub"));
            }
            if let Some(&h) = hubs.iter().find(|&&h| h >= n) {
                return Err(Error::pre(format!("hub {h} is not a vertex of a {n}-vertex graph")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for TieBreakPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieBreakPolicy::LowestIndex => f.write_str("lowest_index"),
            TieBreakPolicy::SeededRandom(s) => write!(f, "seeded_random:{s}"),
            TieBreakPolicy::AdversarialHub(h) => {
                let ids: Vec<String> = h.iter().map(ToString::to_string).collect();
                write!(f, "adversarial_hub:{}", ids.join("+"))
            }
        }
    }
}

/// Accepts `lowest_index`, `seeded_random:SEED`, and `adversarial_hub:H+H+...`
/// (dashes work in place of underscores).
impl FromStr for TieBreakPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().replace('-', "_");
        let (kind, arg) = match norm.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (norm.as_str(), None),
        };
        let bad = || Error::pre(format!("bad tie-break policy `{s}`"));
        match (kind, arg) {
            ("lowest_index", None) => Ok(TieBreakPolicy::LowestIndex),
            ("seeded_random", Some(a)) => a.parse().map(TieBreakPolicy::SeededRandom).map_err(|_| bad()),
            ("adversarial_hub", Some(a)) => a
                .split('+')
                .map(|h| h.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
                .map(TieBreakPolicy::AdversarialHub),
            _ => Err(bad()),
        }
    }
}

/// Which clusterer a run uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    MatchingAffinity,
    Affinity,
    AverageLinkage,
    RandomDivisive,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::MatchingAffinity,
        Algorithm::Affinity,
        Algorithm::AverageLinkage,
        Algorithm::RandomDivisive,
    ];

    /// True when the output depends on the run seed.
    pub fn is_seeded(self) -> bool {
        self == Algorithm::RandomDivisive
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::MatchingAffinity => "matching_affinity",
            Algorithm::Affinity => "affinity",
            Algorithm::AverageLinkage => "average_linkage",
            Algorithm::RandomDivisive => "random_divisive",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "matching_affinity" | "ma" => Ok(Algorithm::MatchingAffinity),
            "affinity" => Ok(Algorithm::Affinity),
            "average_linkage" | "avg" => Ok(Algorithm::AverageLinkage),
            "random_divisive" | "random" => Ok(Algorithm::RandomDivisive),
            _ => Err(Error::pre(format!("unknown algorithm `{s}`"))),
        }
    }
}

/// Everything needed to run one clusterer on one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub mode: Mode,
    pub engine: EngineChoice,
    pub epsilon: f64,
    pub seed: u64,
    pub policy: TieBreakPolicy,
}

impl RunSpec {
    pub fn new(algorithm: Algorithm, mode: Mode, engine: EngineChoice) -> Self {
        RunSpec {
            algorithm,
            mode,
            engine,
            epsilon: 0.05,
            seed: 0,
            policy: TieBreakPolicy::LowestIndex,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunOutput {
    pub dendrogram: Dendrogram,
    /// Present for the round-based clusterers.
    pub ledger: Option<RoundLedger>,
}

pub fn run(g: &WeightedGraph, spec: &RunSpec) -> Result<RunOutput> {
    let (dendrogram, ledger) = match spec.algorithm {
        Algorithm::MatchingAffinity => {
            let (d, l) = matching_affinity(g, spec.mode, &spec.engine, spec.epsilon)?;
            (d, Some(l))
        }
        Algorithm::Affinity => {
            let (d, l) = affinity_boruvka(g, spec.mode, &spec.policy)?;
            (d, Some(l))
        }
        Algorithm::AverageLinkage => (average_linkage_clusterer(g, spec.mode)?, None),
        Algorithm::RandomDivisive => (random_divisive(g, spec.seed)?, None),
    };
    Ok(RunOutput { dendrogram, ledger })
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::evaluation::balance_ratio;
    use crate::testgen::int_graph;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matching_affinity_levels_are_balanced(g in int_graph(1..=16, Orientation::Similarity)) {
            let n = g.n();
            let (d, ledger) = matching_affinity(&g, Mode::Max, &EngineChoice::exact(), 0.05).unwrap();
            let big_n = levels_for(n);
            prop_assert_eq!(ledger.levels, big_n);
            prop_assert!(n == 1 || (1usize << (big_n - 1)) < n);
            prop_assert!(n <= 1 << big_n);
            prop_assert_eq!(d.levels().len(), big_n + 1);
            for (i, level) in d.levels().iter().enumerate().skip(1) {
                prop_assert_eq!(level.len(), 1 << (big_n - i));
                let need = if n.is_power_of_two() { 1.0 } else { 0.5 };
                prop_assert!(balance_ratio(level) >= need);
            }
        }

        #[test]
        fn runs_are_deterministic(g in int_graph(1..=12, Orientation::Dissimilarity), seed in any::<u64>()) {
            for algorithm in Algorithm::ALL {
                let mut spec = RunSpec::new(algorithm, Mode::Min, EngineChoice::exact());
                spec.seed = seed;
                spec.policy = TieBreakPolicy::SeededRandom(seed);
                prop_assert_eq!(run(&g, &spec).unwrap(), run(&g, &spec).unwrap());
            }
        }
    }
}
