//! Graph families on which Affinity or Matching Affinity does poorly, with
//! the comparison hierarchies that expose the gap.
//!
//! Layouts:
//! - `bipartite_unit(h)`: sides `0..h` and `h..2h`, unit cross edges.
//! - `disjoint_matching(s)`: block `t` is `4t..4t+4` = `(H, a, b, c)` with
//!   unit edges `H-b` and `a-c`; dissimilarity weights.
//! - `rows_columns(n)`: `2^n` columns of `2^(2n)` vertices, vertex
//!   `col * 2^(2n) + row`; weight 1 inside a column, `1 + eps` inside a row.
//! - `bipartite_minus_pm(m)`: `a_i = 2i`, `b_i = 2i + 1`, unit weight for
//!   `a_i b_j` with `i != j`; dissimilarity weights.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clusterers::{affinity_boruvka, matching_affinity, Mode, TieBreakPolicy};
use crate::error::{Error, Result};
use crate::graph::{Orientation, WeightedGraph};
use crate::hierarchy::{Dendrogram, DendrogramBuilder};
use crate::matching::{EngineChoice, DEFAULT_SIZE_CAP};
use crate::objectives::{revenue, value};

/// Largest `rows_columns` exponent accepted (`2^12` vertices).
pub const MAX_ROWS_COLUMNS_EXP: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    BipartiteUnit,
    DisjointMatching,
    RowsColumns,
    BipartiteMinusPm,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::BipartiteUnit => "bipartite_unit",
            Family::DisjointMatching => "disjoint_matching",
            Family::RowsColumns => "rows_columns",
            Family::BipartiteMinusPm => "bipartite_minus_pm",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "bipartite_unit" => Ok(Family::BipartiteUnit),
            "disjoint_matching" => Ok(Family::DisjointMatching),
            "rows_columns" => Ok(Family::RowsColumns),
            "bipartite_minus_pm" => Ok(Family::BipartiteMinusPm),
            _ => Err(Error::pre(format!("unknown family `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    /// `half`, `n_sets`, `n`, or `n_half` depending on the family.
    pub size: usize,
    /// Extra row weight for `rows_columns`.
    pub row_bonus: f64,
}

impl FamilySpec {
    pub const DEFAULT_ROW_BONUS: f64 = 0.1;

    pub fn bipartite_unit(half: usize) -> Self {
        FamilySpec::new(Family::BipartiteUnit, half)
    }

    pub fn disjoint_matching(n_sets: usize) -> Self {
        FamilySpec::new(Family::DisjointMatching, n_sets)
    }

    pub fn rows_columns(n: usize) -> Self {
        FamilySpec::new(Family::RowsColumns, n)
    }

    pub fn bipartite_minus_pm(n_half: usize) -> Self {
        FamilySpec::new(Family::BipartiteMinusPm, n_half)
    }

    pub fn new(family: Family, size: usize) -> Self {
        FamilySpec {
            family,
            size,
            row_bonus: FamilySpec::DEFAULT_ROW_BONUS,
        }
    }

    pub fn with_row_bonus(mut self, eps: f64) -> Self {
        self.row_bonus = eps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.size;
        match self.family {
            Family::BipartiteUnit if s == 0 || !s.is_power_of_two() => Err(Error::pre(format!(
                "bipartite_unit needs a power-of-two half size, got {s}"
            ))),
            Family::DisjointMatching if s == 0 => Err(Error::pre("disjoint_matching needs n_sets >= 1")),
            Family::RowsColumns if s == 0 || s > MAX_ROWS_COLUMNS_EXP => Err(Error::pre(format!(
                "rows_columns needs 1 <= n <= {MAX_ROWS_COLUMNS_EXP}, got {s}"
            ))),
            Family::RowsColumns if !(self.row_bonus > 0.0 && self.row_bonus.is_finite()) => Err(
                Error::pre(format!("row bonus must be positive, got {}", self.row_bonus)),
            ),
            Family::BipartiteMinusPm if s < 2 => Err(Error::pre(format!(
                "bipartite_minus_pm needs n_half >= 2, got {s}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self.family {
            Family::BipartiteUnit | Family::BipartiteMinusPm => 2 * self.size,
            Family::DisjointMatching => 4 * self.size,
            Family::RowsColumns => 1 << (3 * self.size),
        }
    }

    pub fn orientation(&self) -> Orientation {
        match self.family {
            Family::BipartiteUnit | Family::RowsColumns => Orientation::Similarity,
            Family::DisjointMatching | Family::BipartiteMinusPm => Orientation::Dissimilarity,
        }
    }

    /// `revenue` on similarity families, `value` on dissimilarity families.
    pub fn objective_name(&self) -> &'static str {
        match self.orientation() {
            Orientation::Similarity => "revenue",
            Orientation::Dissimilarity => "value",
        }
    }

    /// Tie-break that reproduces the bad Affinity run for this family.
    pub fn adversarial_policy(&self) -> TieBreakPolicy {
        match self.family {
            Family::BipartiteUnit => TieBreakPolicy::AdversarialHub(vec![0, self.size]),
            Family::DisjointMatching => {
                TieBreakPolicy::AdversarialHub((0..self.size).map(|t| 4 * t).collect())
            }
            Family::RowsColumns | Family::BipartiteMinusPm => TieBreakPolicy::LowestIndex,
        }
    }

    fn column_len(&self) -> usize {
        1 << (2 * self.size)
    }
}

/// The family's weighted graph.
pub fn generate(spec: &FamilySpec) -> Result<WeightedGraph> {
    spec.validate()?;
    let n = spec.vertex_count();
    let s = spec.size;
    match spec.family {
        Family::BipartiteUnit => WeightedGraph::from_fn(n, spec.orientation(), |i, j| {
            if (i < s) != (j < s) { 1.0 } else { 0.0 }
        }),
        Family::DisjointMatching => WeightedGraph::from_fn(n, spec.orientation(), |i, j| {
            let same = i / 4 == j / 4;
            let (x, y) = (i % 4, j % 4);
            if same && ((x, y) == (0, 2) || (x, y) == (1, 3)) { 1.0 } else { 0.0 }
        }),
        Family::RowsColumns => {
            let len = spec.column_len();
            let bonus = 1.0 + spec.row_bonus;
            WeightedGraph::from_fn(n, spec.orientation(), |i, j| {
                if i / len == j / len {
                    1.0
                } else if i % len == j % len {
                    bonus
                } else {
                    0.0
                }
            })
        }
        Family::BipartiteMinusPm => WeightedGraph::from_fn(n, spec.orientation(), |i, j| {
            if i % 2 != j % 2 && i / 2 != j / 2 { 1.0 } else { 0.0 }
        }),
    }
}

/// Merges adjacent items pairwise until one remains; returns `(node, height)`.
fn balanced(b: &mut DendrogramBuilder, mut items: Vec<(usize, usize)>) -> Result<(usize, usize)> {
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        for chunk in items.chunks(2) {
            if let [(a, ha), (c, hc)] = *chunk {
                let h = ha.max(hc) + 1;
                next.push((b.merge(vec![a, c], h)?, h));
            } else {
                next.push(chunk[0]);
            }
        }
        items = next;
    }
    Ok(items[0])
}

/// Balanced binary tree inside each group, then over the group roots.
fn grouped(n: usize, groups: Vec<Vec<usize>>) -> Result<Dendrogram> {
    let mut b = DendrogramBuilder::new(n)?;
    let mut roots = Vec::with_capacity(groups.len());
    for g in groups {
        roots.push(balanced(&mut b, g.into_iter().map(|v| (v, 0)).collect())?);
    }
    balanced(&mut b, roots)?;
    b.finish()
}

/// The comparison hierarchy for the family.
pub fn reference_hierarchy(spec: &FamilySpec) -> Result<Dendrogram> {
    spec.validate()?;
    let n = spec.vertex_count();
    let s = spec.size;
    let groups: Vec<Vec<usize>> = match spec.family {
        Family::BipartiteUnit => (0..s).map(|i| vec![i, s + i]).collect(),
        Family::DisjointMatching => vec![
            (0..n).filter(|v| v % 4 < 2).collect(),
            (0..n).filter(|v| v % 4 >= 2).collect(),
        ],
        Family::RowsColumns => {
            let len = spec.column_len();
            (0..n / len).map(|c| (c * len..(c + 1) * len).collect()).collect()
        }
        Family::BipartiteMinusPm => vec![
            (0..n).filter(|v| v % 2 == 0).collect(),
            (0..n).filter(|v| v % 2 == 1).collect(),
        ],
    };
    grouped(n, groups)
}

/// Objective appropriate to the graph's orientation.
pub fn objective(g: &WeightedGraph, d: &Dendrogram) -> Result<f64> {
    match g.orientation() {
        Orientation::Similarity => revenue(g, d),
        Orientation::Dissimilarity => value(g, d),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub family: Family,
    pub size: usize,
    pub vertices: usize,
    pub objective: String,
    pub affinity: f64,
    pub reference: f64,
    /// `affinity / reference`.
    pub ratio: f64,
    pub affinity_rounds: usize,
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 { 1.0 } else { f64::INFINITY }
    } else {
        a / b
    }
}

/// Affinity with the family's adversarial tie-break, scored against the reference.
pub fn adversarial_affinity_run(spec: &FamilySpec) -> Result<(Dendrogram, RatioReport)> {
    let g = generate(spec)?;
    let mode = Mode::for_orientation(g.orientation());
    let (d, ledger) = affinity_boruvka(&g, mode, &spec.adversarial_policy())?;
    let aff = objective(&g, &d)?;
    let reference = objective(&g, &reference_hierarchy(spec)?)?;
    let report = RatioReport {
        family: spec.family,
        size: spec.size,
        vertices: g.n(),
        objective: spec.objective_name().to_string(),
        affinity: aff,
        reference,
        ratio: ratio(aff, reference),
        affinity_rounds: ledger.levels,
    };
    Ok((d, report))
}

/// Exact engine when the instance fits under the default cap, greedy otherwise.
pub fn engine_for(n: usize) -> EngineChoice {
    if n <= DEFAULT_SIZE_CAP {
        EngineChoice::exact()
    } else {
        EngineChoice::greedy()
    }
}

/// All three hierarchies on one family instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: Family,
    pub size: usize,
    pub vertices: usize,
    pub objective: String,
    pub engine: String,
    pub affinity: f64,
    pub matching_affinity: f64,
    pub reference: f64,
    pub affinity_over_reference: f64,
    pub matching_affinity_over_reference: f64,
    pub matching_affinity_over_affinity: f64,
    pub affinity_rounds: usize,
    pub matching_affinity_levels: usize,
}

pub fn family_report(spec: &FamilySpec, engine: &EngineChoice, epsilon: f64) -> Result<FamilyReport> {
    let g = generate(spec)?;
    let (_, aff) = adversarial_affinity_run(spec)?;
    let mode = Mode::for_orientation(g.orientation());
    let (ma_tree, ledger) = matching_affinity(&g, mode, engine, epsilon)?;
    let ma = objective(&g, &ma_tree)?;
    Ok(FamilyReport {
        family: spec.family,
        size: spec.size,
        vertices: g.n(),
        objective: aff.objective.clone(),
        engine: engine.kind.to_string(),
        affinity: aff.affinity,
        matching_affinity: ma,
        reference: aff.reference,
        affinity_over_reference: aff.ratio,
        matching_affinity_over_reference: ratio(ma, aff.reference),
        matching_affinity_over_affinity: ratio(ma, aff.affinity),
        affinity_rounds: aff.affinity_rounds,
        matching_affinity_levels: ledger.levels,
    })
}
