//! Clustering quality metrics, graph construction from feature vectors,
//! and the balanced power-of-two subsampling protocol.

mod dataset;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use rayon::prelude::*;

use crate::clusterers::{run, Algorithm, Mode, RunSpec};
use crate::error::{Error, Result};
use crate::graph::{Clustering, Orientation, WeightedGraph};
use crate::matching::EngineChoice;

pub use dataset::{load_dataset, parse_dataset, LabeledDataset};

/// Scale applied to cosine weights before rounding, when integer weights are needed.
pub const COSINE_SCALE: f64 = 10_000.0;

/// Fraction of point pairs on which two partitions agree.
pub fn rand_index(x: &Clustering, y: &Clustering) -> Result<f64> {
    let n = x.n();
    if y.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: y.n(),
        });
    }
    if n < 2 {
        return Err(Error::pre("rand index needs at least two points"));
    }
    let lx = x.labels();
    let ly = y.labels();
    let mut table = vec![0u64; x.len() * y.len()];
    for v in 0..n {
        table[lx[v] * y.len() + ly[v]] += 1;
    }
    let pairs = |c: u64| c * c.saturating_sub(1) / 2;
    let both: u64 = table.iter().map(|&c| pairs(c)).sum();
    let same_x: u64 = x.sizes().iter().map(|&s| pairs(s as u64)).sum();
    let same_y: u64 = y.sizes().iter().map(|&s| pairs(s as u64)).sum();
    let total = pairs(n as u64);
    let neither = total + both - same_x - same_y;
    Ok((both + neither) as f64 / total as f64)
}

/// Smallest cluster size over largest; 0 for an empty clustering.
pub fn balance_ratio(x: &Clustering) -> f64 {
    let sizes = x.sizes();
    match (sizes.iter().min(), sizes.iter().max()) {
        (Some(&lo), Some(&hi)) if hi > 0 => lo as f64 / hi as f64,
        _ => 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    /// `(1 + cos) / 2`, a similarity in `[0, 1]`.
    CosineSimilarity,
    /// Euclidean distance.
    L2Distance,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphKind::CosineSimilarity => "cosine_similarity",
            GraphKind::L2Distance => "l2_distance",
        })
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosine" | "cosine_similarity" => Ok(GraphKind::CosineSimilarity),
            "l2" | "l2_distance" => Ok(GraphKind::L2Distance),
            other => Err(Error::pre(format!("unknown graph kind `{other}`"))),
        }
    }
}

/// Complete graph over the dataset's points.
pub fn graph_from_vectors(ds: &LabeledDataset, kind: GraphKind) -> Result<WeightedGraph> {
    let v = &ds.vectors;
    match kind {
        GraphKind::CosineSimilarity => {
            let norms: Vec<f64> = v.iter().map(|x| x.iter().map(|a| a * a).sum::<f64>().sqrt()).collect();
            if let Some(i) = norms.iter().position(|&z| z == 0.0) {
                return Err(Error::pre(format!("point {i} is the zero vector; cosine is undefined")));
            }
            WeightedGraph::from_fn(ds.len(), Orientation::Similarity, |i, j| {
                let dot: f64 = v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum();
                let cos = dot / (norms[i] * norms[j]);
                ((1.0 + cos) / 2.0).clamp(0.0, 1.0)
            })
        }
        GraphKind::L2Distance => WeightedGraph::from_fn(ds.len(), Orientation::Dissimilarity, |i, j| {
            v[i].iter()
                .zip(&v[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        }),
    }
}

/// Per-class quotas for the largest `2^N` sample that keeps classes within
/// one point of each other. Counts are in class order; extra points go to
/// the earliest classes.
pub fn balanced_quotas(counts: &[usize]) -> Result<Vec<usize>> {
    let c = counts.len();
    let m0 = counts.iter().copied().min().unwrap_or(0);
    if c == 0 || m0 == 0 {
        return Err(Error::pre("no balanced power-of-two subset exists"));
    }
    let mut size = 1usize;
    while (2 * size).div_ceil(c) <= m0 {
        size *= 2;
    }
    let (base, extra) = (size / c, size % c);
    Ok((0..c).map(|i| base + usize::from(i < extra)).collect())
}

/// Random class-balanced subsample of power-of-two size; row order kept.
pub fn filter_balanced_pow2(ds: &LabeledDataset, seed: u64) -> Result<LabeledDataset> {
    let classes = ds.class_counts();
    let counts: Vec<usize> = classes.iter().map(|(_, c)| *c).collect();
    let quotas = balanced_quotas(&counts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = Vec::new();
    for ((label, _), &q) in classes.iter().zip(&quotas) {
        let rows: Vec<usize> = (0..ds.len()).filter(|&i| &ds.labels[i] == label).collect();
        let picked = rand::seq::index::sample(&mut rng, rows.len(), q);
        keep.extend(picked.iter().map(|i| rows[i]));
    }
    keep.sort_unstable();
    Ok(ds.subset(&keep))
}

/// Graph used for a mode: cosine similarity scaled to integers by
/// [`COSINE_SCALE`] for `Max`, Euclidean distance for `Min`.
pub fn graph_for_mode(ds: &LabeledDataset, mode: Mode) -> Result<WeightedGraph> {
    match mode {
        Mode::Max => graph_from_vectors(ds, GraphKind::CosineSimilarity)?.quantized(COSINE_SCALE),
        Mode::Min => graph_from_vectors(ds, GraphKind::L2Distance),
    }
}

/// One line of the results CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub dataset: String,
    pub algorithm: String,
    pub mode: String,
    pub engine: String,
    pub k: usize,
    pub rand_index: f64,
    pub balance_ratio: f64,
    pub seed: u64,
}

/// Clusters `ds` once and scores the extracted `k`-clusterings against its labels.
pub fn evaluate_cell(ds: &LabeledDataset, spec: &RunSpec, ks: &[usize]) -> Result<Vec<EvalRow>> {
    let g = graph_for_mode(ds, spec.mode)?;
    let out = run(&g, spec)?;
    let truth = ds.ground_truth();
    ks.iter()
        .map(|&k| {
            let c = out.dendrogram.extract_k_clustering(k)?;
            Ok(EvalRow {
                dataset: ds.name.clone(),
                algorithm: spec.algorithm.to_string(),
                mode: spec.mode.to_string(),
                engine: spec.engine.kind.to_string(),
                k,
                rand_index: rand_index(&c, &truth)?,
                balance_ratio: balance_ratio(&c),
                seed: spec.seed,
            })
        })
        .collect()
}

/// A (dataset × algorithm × mode × seed) grid with shared settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalGrid {
    pub algorithms: Vec<Algorithm>,
    pub modes: Vec<Mode>,
    pub engine: EngineChoice,
    pub epsilon: f64,
    pub ks: Vec<usize>,
    /// Repetitions; repetition `r` uses seed `base_seed + r`.
    pub reps: usize,
    pub base_seed: u64,
    /// Subsample each repetition with [`filter_balanced_pow2`].
    pub filtered: bool,
}

/// Runs every cell of the grid in parallel (on the current rayon pool) and
/// returns rows in a fixed order: dataset, algorithm, mode, seed, then k.
/// Without filtering, deterministic algorithms run once.
pub fn eval_grid(datasets: &[LabeledDataset], grid: &EvalGrid) -> Result<Vec<EvalRow>> {
    if grid.reps == 0 {
        return Err(Error::pre("repetitions must be at least 1"));
    }
    let mut cells = Vec::new();
    for (di, ds) in datasets.iter().enumerate() {
        for &algorithm in &grid.algorithms {
            for &mode in &grid.modes {
                let reps = if grid.filtered || algorithm.is_seeded() { grid.reps } else { 1 };
                for r in 0..reps {
                    let mut spec = RunSpec::new(algorithm, mode, grid.engine);
                    spec.epsilon = grid.epsilon;
                    spec.seed = grid.base_seed.wrapping_add(r as u64);
                    cells.push((di, ds, spec));
                }
            }
        }
    }
    let per_cell: Vec<Result<Vec<EvalRow>>> = cells
        .par_iter()
        .map(|(_, ds, spec)| {
            if grid.filtered {
                evaluate_cell(&filter_balanced_pow2(ds, spec.seed)?, spec, &grid.ks)
            } else {
                evaluate_cell(ds, spec, &grid.ks)
            }
        })
        .collect();
    let mut rows = Vec::new();
    for part in per_cell {
        rows.extend(part?);
    }
    Ok(rows)
}

/// Results CSV with the fixed header
/// `dataset,algorithm,mode,engine,k,rand_index,balance_ratio,seed`.
pub fn write_eval_csv(rows: &[EvalRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["dataset", "algorithm", "mode", "engine", "k", "rand_index", "balance_ratio", "seed"])
            .map_err(csv_err)?;
    }
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::pre(format!("csv writer: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::pre(format!("csv output: {e}")))
}

fn csv_err(e: csv::Error) -> Error {
    Error::pre(format!("csv writer: {e}"))
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::oracle::pairwise_rand_index;
    use crate::testgen::labels;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn rand_index_matches_pair_count(
            (x, y) in (2usize..=30).prop_flat_map(|n| (labels(n, 5), labels(n, 5)))
        ) {
            let (cx, cy) = (Clustering::from_labels(&x), Clustering::from_labels(&y));
            let r = rand_index(&cx, &cy).unwrap();
            prop_assert_eq!(r, rand_index(&cy, &cx).unwrap());
            prop_assert!((r - pairwise_rand_index(&x, &y)).abs() < 1e-12);
            prop_assert_eq!(rand_index(&cx, &cx).unwrap(), 1.0);
        }

        #[test]
        fn filter_is_balanced_power_of_two(counts in prop::collection::vec(1usize..40, 1..5), seed in any::<u64>()) {
            let mut vectors = Vec::new();
            let mut names = Vec::new();
            for (c, &m) in counts.iter().enumerate() {
                for i in 0..m {
                    vectors.push(vec![i as f64 + 1.0, c as f64]);
                    names.push(format!("c{c}"));
                }
            }
            let ds = LabeledDataset::new("p", vectors, names).unwrap();
            let f = filter_balanced_pow2(&ds, seed).unwrap();
            prop_assert!(f.len().is_power_of_two());
            let sizes: Vec<usize> = f.class_counts().iter().map(|c| c.1).collect();
            prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
            prop_assert_eq!(filter_balanced_pow2(&ds, seed).unwrap(), f);
        }
    }
}
