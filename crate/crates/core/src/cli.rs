//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::adversarial::{engine_for, family_report, Family, FamilyReport, FamilySpec};
use crate::checks::{self, bound_corpus, Budget};
use crate::clusterers::{run, Algorithm, Mode, RoundLedger, RunSpec, TieBreakPolicy};
use crate::error::{Error, Result};
use crate::evaluation::{eval_grid, graph_for_mode, load_dataset, write_eval_csv, EvalGrid};
use crate::graph::Orientation;
use crate::graph_io::load_graph;
use crate::hierarchy::DendrogramSummary;
use crate::matching::{EngineChoice, EngineKind};
use crate::objectives::{revenue, value, ObjectiveReport};

#[derive(Debug, Parser)]
#[command(name = "matchclust", version, about = "Matching-based hierarchical clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads for parallel grids (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster one graph (or labeled dataset) and report objectives and rounds.
    Cluster(ClusterArgs),
    /// Rand index and balance over a dataset × algorithm × k × seed grid.
    Eval(EvalArgs),
    /// Compare Affinity, Matching Affinity and the reference hierarchy on a hard family.
    Adversarial(AdversarialArgs),
    /// Check the revenue and value lower bounds on random graphs.
    Sweep(SweepArgs),
    /// Run the built-in property checks.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Report {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    /// Matching engine: exact, greedy or local_search.
    #[arg(long, default_value = "exact")]
    pub engine: String,
    /// Approximation slack, in (0, 1).
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
}

impl EngineArgs {
    fn choice(&self) -> Result<EngineChoice> {
        let kind: EngineKind = self.engine.parse()?;
        EngineChoice::new(kind, self.epsilon)?.with_env_size_cap()
    }
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Graph file (`# orientation=...` header, edge list or matrix).
    #[arg(long, conflicts_with = "dataset", required_unless_present = "dataset")]
    pub input: Option<PathBuf>,
    /// Labeled CSV; clustered through its cosine (max) or L2 (min) graph.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long, default_value = "matching-affinity")]
    pub algo: String,
    /// max or min; defaults to the graph's orientation.
    #[arg(long)]
    pub mode: Option<String>,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// lowest_index, seeded_random:SEED or adversarial_hub:H+H+...
    #[arg(long, default_value = "lowest_index")]
    pub policy: String,
    /// Also print the flat clustering with this many clusters.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Report::Json)]
    pub report: Report,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the dendrogram in merge-list form here.
    #[arg(long)]
    pub dendrogram: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Labeled CSV files (repeat or comma-separate).
    #[arg(long = "data", required = true, value_delimiter = ',')]
    pub data: Vec<PathBuf>,
    /// Algorithms to run (default: all four).
    #[arg(long, value_delimiter = ',')]
    pub algo: Vec<String>,
    /// Modes to run (default: max and min).
    #[arg(long, value_delimiter = ',')]
    pub mode: Vec<String>,
    #[arg(long, default_value = "greedy")]
    pub engine: String,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,8")]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    pub reps: usize,
    /// Seed of the first repetition.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Subsample to balanced power-of-two size in every repetition.
    #[arg(long)]
    pub filtered: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AdversarialArgs {
    #[arg(long)]
    pub family: String,
    /// disjoint_matching sizes.
    #[arg(long, value_delimiter = ',')]
    pub n_sets: Vec<usize>,
    /// bipartite_unit side sizes.
    #[arg(long, value_delimiter = ',')]
    pub half: Vec<usize>,
    /// rows_columns exponents (2^(3n) vertices).
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// bipartite_minus_pm side sizes.
    #[arg(long, value_delimiter = ',')]
    pub n_half: Vec<usize>,
    /// Extra weight on rows_columns row edges.
    #[arg(long)]
    pub row_bonus: Option<f64>,
    /// Matching engine for Matching Affinity (default: exact when small, else greedy).
    #[arg(long)]
    pub engine: Option<String>,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = Report::Csv)]
    pub report: Report,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepObjective {
    Revenue,
    Value,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "4,5,6,7,8,9,10,11,12,13,14,15,16")]
    pub sizes: Vec<usize>,
    /// Random graphs per size.
    #[arg(long, default_value_t = 50)]
    pub graphs: usize,
    /// Objectives to check (default: both).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub objective: Vec<SweepObjective>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Report::Csv)]
    pub report: Report,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Use the acceptance-suite case counts instead of the quick ones.
    #[arg(long)]
    pub full: bool,
}

/// What a successful command leaves behind for the exit status.
#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    ChecksFailed,
}

pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<Outcome> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(Error::pre("--jobs must be at least 1"));
        }
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    match cli.command {
        Command::Cluster(a) => cluster(a, stdout),
        Command::Eval(a) => eval(a, stdout),
        Command::Adversarial(a) => adversarial(a, stdout),
        Command::Sweep(a) => sweep(a, stdout),
        Command::Selftest(a) => selftest(a, stdout),
    }
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::pre(format!("csv writer: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::pre(format!("csv writer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

#[derive(Serialize)]
struct ClusterReport {
    algorithm: Algorithm,
    mode: Mode,
    engine: String,
    epsilon: f64,
    seed: u64,
    policy: String,
    summary: DendrogramSummary,
    objectives: ObjectiveReport,
    ledger: Option<RoundLedger>,
    k_clustering: Option<Vec<Vec<usize>>>,
}

fn cluster(a: ClusterArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    let algorithm: Algorithm = a.algo.parse()?;
    let engine = a.engine.choice()?;
    let requested: Option<Mode> = a.mode.as_deref().map(str::parse).transpose()?;
    let (g, mode) = match (&a.input, &a.dataset) {
        (Some(path), _) => {
            let g = load_graph(path)?;
            let mode = requested.unwrap_or(Mode::for_orientation(g.orientation()));
            (g, mode)
        }
        (None, Some(path)) => {
            let mode = requested.unwrap_or(Mode::Max);
            (graph_for_mode(&load_dataset(path)?, mode)?, mode)
        }
        (None, None) => return Err(Error::pre("one of --input or --dataset is required")),
    };
    let policy: TieBreakPolicy = a.policy.parse()?;
    let spec = RunSpec {
        algorithm,
        mode,
        engine,
        epsilon: a.engine.epsilon,
        seed: a.seed,
        policy,
    };
    let result = run(&g, &spec)?;
    let objectives = ObjectiveReport::evaluate(&g, &result.dendrogram)?;
    if let Some(path) = &a.dendrogram {
        fs::write(path, result.dendrogram.to_text())?;
    }
    let text = match a.report {
        Report::Csv => objectives.to_csv()?,
        Report::Json => {
            let k_clustering = a
                .k
                .map(|k| result.dendrogram.extract_k_clustering(k))
                .transpose()?
                .map(|c| c.clusters().to_vec());
            json(&ClusterReport {
                algorithm,
                mode,
                engine: engine.kind.to_string(),
                epsilon: spec.epsilon,
                seed: spec.seed,
                policy: spec.policy.to_string(),
                summary: result.dendrogram.summary(),
                objectives,
                ledger: result.ledger,
                k_clustering,
            })?
        }
    };
    emit(&a.out, stdout, &text)?;
    Ok(Outcome::Ok)
}

fn eval(a: EvalArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    let datasets = a.data.iter().map(|p| load_dataset(p)).collect::<Result<Vec<_>>>()?;
    let algorithms = if a.algo.is_empty() {
        Algorithm::ALL.to_vec()
    } else {
        a.algo.iter().map(|s| s.parse()).collect::<Result<_>>()?
    };
    let modes = if a.mode.is_empty() {
        vec![Mode::Max, Mode::Min]
    } else {
        a.mode.iter().map(|s| s.parse()).collect::<Result<_>>()?
    };
    let kind: EngineKind = a.engine.parse()?;
    let grid = EvalGrid {
        algorithms,
        modes,
        engine: EngineChoice::new(kind, a.epsilon)?.with_env_size_cap()?,
        epsilon: a.epsilon,
        ks: a.k,
        reps: a.reps,
        base_seed: a.seed,
        filtered: a.filtered,
    };
    let rows = eval_grid(&datasets, &grid)?;
    emit(&a.out, stdout, &write_eval_csv(&rows)?)?;
    Ok(Outcome::Ok)
}

fn adversarial(a: AdversarialArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    let family: Family = a.family.parse()?;
    let sizes = match family {
        Family::DisjointMatching => &a.n_sets,
        Family::BipartiteUnit => &a.half,
        Family::RowsColumns => &a.n,
        Family::BipartiteMinusPm => &a.n_half,
    };
    if sizes.is_empty() {
        let flag = match family {
            Family::DisjointMatching => "--n-sets",
            Family::BipartiteUnit => "--half",
            Family::RowsColumns => "--n",
            Family::BipartiteMinusPm => "--n-half",
        };
        return Err(Error::pre(format!("{family} needs {flag}")));
    }
    let mut reports: Vec<FamilyReport> = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let mut spec = FamilySpec::new(family, size);
        if let Some(eps) = a.row_bonus {
            spec = spec.with_row_bonus(eps);
        }
        spec.validate()?;
        let engine = match &a.engine {
            Some(e) => EngineChoice::new(e.parse()?, a.epsilon)?.with_env_size_cap()?,
            None => engine_for(spec.vertex_count()),
        };
        reports.push(family_report(&spec, &engine, a.epsilon)?);
    }
    let text = match a.report {
        Report::Csv => to_csv(&reports)?,
        Report::Json => json(&reports)?,
    };
    emit(&a.out, stdout, &text)?;
    Ok(Outcome::Ok)
}

#[derive(Debug, Serialize)]
struct SweepRow {
    objective: SweepObjective,
    n: usize,
    graphs: usize,
    /// Lower bound on the normalized objective.
    bound: f64,
    min_normalized: f64,
    mean_normalized: f64,
    passed: bool,
}

fn sweep(a: SweepArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    if a.graphs == 0 {
        return Err(Error::pre("--graphs must be at least 1"));
    }
    if let Some(&n) = a.sizes.iter().find(|&&n| n < 3) {
        return Err(Error::pre(format!("sweep sizes must be at least 3, got {n}")));
    }
    let objectives = if a.objective.is_empty() {
        vec![SweepObjective::Revenue, SweepObjective::Value]
    } else {
        a.objective.clone()
    };
    let mut rows = Vec::new();
    for obj in objectives {
        let orientation = match obj {
            SweepObjective::Revenue => Orientation::Similarity,
            SweepObjective::Value => Orientation::Dissimilarity,
        };
        for &n in &a.sizes {
            let runs = bound_corpus(orientation, &[n], a.graphs, a.seed)?;
            let pow2 = n.is_power_of_two();
            let (bound, scale): (f64, f64) = match obj {
                SweepObjective::Revenue => (if pow2 { 1.0 / 3.0 } else { 1.0 / 9.0 }, n as f64 - 2.0),
                SweepObjective::Value => (if pow2 { 2.0 / 3.0 } else { 1.0 / 3.0 }, n as f64),
            };
            let mut min = f64::INFINITY;
            let mut sum = 0.0;
            let mut counted = 0usize;
            let mut passed = true;
            for r in &runs {
                let total = r.graph.total_weight();
                let x = match obj {
                    SweepObjective::Revenue => revenue(&r.graph, &r.dendrogram)?,
                    SweepObjective::Value => value(&r.graph, &r.dendrogram)?,
                };
                passed &= x >= bound * scale * total - 1e-6;
                if total > 0.0 {
                    let norm = x / (scale * total);
                    min = min.min(norm);
                    sum += norm;
                    counted += 1;
                }
            }
            rows.push(SweepRow {
                objective: obj,
                n,
                graphs: a.graphs,
                bound,
                min_normalized: if counted == 0 { f64::NAN } else { min },
                mean_normalized: if counted == 0 { f64::NAN } else { sum / counted as f64 },
                passed,
            });
        }
    }
    let all_passed = rows.iter().all(|r| r.passed);
    let text = match a.report {
        Report::Csv => to_csv(&rows)?,
        Report::Json => json(&rows)?,
    };
    emit(&a.out, stdout, &text)?;
    Ok(if all_passed { Outcome::Ok } else { Outcome::ChecksFailed })
}

fn selftest(a: SelftestArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    let budget = if a.full { Budget::full() } else { Budget::quick() };
    let results = checks::run_all(budget);
    let failed = results.iter().filter(|r| !r.passed).count();
    for r in &results {
        writeln!(stdout, "{r}")?;
    }
    writeln!(stdout, "{} passed, {failed} failed", results.len() - failed)?;
    Ok(if failed == 0 { Outcome::Ok } else { Outcome::ChecksFailed })
}
