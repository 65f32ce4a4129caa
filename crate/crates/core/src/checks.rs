//! Seeded property checks shared by `selftest` and the acceptance suite.
//!
//! Each check draws its own inputs from a fixed seed, compares production
//! output against the bounds it must meet (or against [`crate::oracle`]),
//! and reports a single pass/fail line.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adversarial::{self, FamilySpec};
use crate::clusterers::{
    levels_for, matching_affinity, random_divisive, Algorithm, Mode, RoundLedger, RunSpec,
};
use crate::error::Result;
use crate::evaluation::{
    balance_ratio, eval_grid, filter_balanced_pow2, parse_dataset, rand_index, write_eval_csv, EvalGrid,
    LabeledDataset,
};
use crate::graph::{build_clustering_graph, coarsen, Clustering, Orientation, WeightedGraph};
use crate::hierarchy::{Dendrogram, DendrogramBuilder};
use crate::matching::{
    greedy_matching, k_sized_max_matching, local_search_matching, max_weight_matching, probe_bound,
    Cardinality, EngineChoice, Matching,
};
use crate::objectives::{dasgupta_cost, merge_cost, merge_revenue, revenue, value};
use crate::oracle;

const ABS_TOL: f64 = 1e-6;
const REL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} ({} cases): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.detail
        )
    }
}

/// Tracks cases and the first failure seen.
struct Tally {
    name: &'static str,
    cases: usize,
    failure: Option<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failure: None,
            notes: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(msg());
        }
    }

    fn error(&mut self, context: &str, e: crate::Error) {
        self.expect(false, || format!("{context}: {e}"));
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self) -> CheckResult {
        let passed = self.failure.is_none();
        let detail = match self.failure {
            Some(f) => f,
            None if self.notes.is_empty() => "ok".to_string(),
            None => self.notes.join("; "),
        };
        CheckResult {
            name: self.name.to_string(),
            passed,
            cases: self.cases,
            detail,
        }
    }
}

/// Complete graph with integer weights in `0..=max_w`, about a fifth of them zero.
pub fn random_integer_graph(rng: &mut impl Rng, n: usize, orientation: Orientation, max_w: u32) -> WeightedGraph {
    WeightedGraph::from_fn(n, orientation, |_, _| {
        if rng.gen_bool(0.2) {
            0.0
        } else {
            f64::from(rng.gen_range(1..=max_w))
        }
    })
    .expect("generated weights are valid")
}

/// Binary dendrogram from uniformly random merges, one merge per level.
pub fn random_binary_dendrogram(rng: &mut impl Rng, n: usize) -> Dendrogram {
    let mut b = DendrogramBuilder::new(n).expect("n >= 1");
    let mut roots: Vec<usize> = (0..n).collect();
    for step in 1..n {
        let i = rng.gen_range(0..roots.len());
        let a = roots.swap_remove(i);
        let j = rng.gen_range(0..roots.len());
        let c = roots.swap_remove(j);
        roots.push(b.merge(vec![a, c], step).expect("roots are disjoint"));
    }
    b.finish().expect("single root")
}

/// One seeded Matching Affinity run kept for the balance and ledger checks.
#[derive(Clone, Debug)]
pub struct MaRun {
    pub n: usize,
    pub graph: WeightedGraph,
    pub dendrogram: Dendrogram,
    pub ledger: RoundLedger,
}

/// Runs for the revenue and value bound checks, drawn from `seed`.
pub fn bound_corpus(orientation: Orientation, sizes: &[usize], per_size: usize, seed: u64) -> Result<Vec<MaRun>> {
    let mode = Mode::for_orientation(orientation);
    let engine = EngineChoice::exact();
    let mut out = Vec::with_capacity(sizes.len() * per_size);
    for &n in sizes {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32));
        for _ in 0..per_size {
            let graph = random_integer_graph(&mut rng, n, orientation, 20);
            let (dendrogram, ledger) = matching_affinity(&graph, mode, &engine, 0.05)?;
            out.push(MaRun {
                n,
                graph,
                dendrogram,
                ledger,
            });
        }
    }
    Ok(out)
}

fn is_pow2(n: usize) -> bool {
    n.is_power_of_two()
}

/// Revenue of Matching Affinity against `(n-2) Σw` times 1/3 (`n` a power
/// of two) or 1/9 (otherwise).
pub fn revenue_bound(runs: &[MaRun]) -> CheckResult {
    let mut t = Tally::new("revenue_bound");
    let mut worst = f64::INFINITY;
    for r in runs {
        let total = r.graph.total_weight();
        let factor = if is_pow2(r.n) { 1.0 / 3.0 } else { 1.0 / 9.0 };
        let bound = factor * (r.n as f64 - 2.0) * total;
        match revenue(&r.graph, &r.dendrogram) {
            Ok(rev) => {
                if bound > 0.0 {
                    worst = worst.min(rev / ((r.n as f64 - 2.0) * total));
                }
                t.expect(rev >= bound - ABS_TOL, || format!("n={}: revenue {rev} < bound {bound}", r.n));
            }
            Err(e) => t.error("revenue", e),
        }
    }
    t.note(format!("min revenue/((n-2)Σw) = {worst:.4}"));
    t.finish()
}

/// Value of min-mode Matching Affinity against `n Σw` times 2/3 (`n` a
/// power of two) or 1/3 (otherwise).
pub fn value_bound(runs: &[MaRun]) -> CheckResult {
    let mut t = Tally::new("value_bound");
    let mut worst = f64::INFINITY;
    for r in runs {
        let total = r.graph.total_weight();
        let factor = if is_pow2(r.n) { 2.0 / 3.0 } else { 1.0 / 3.0 };
        let bound = factor * r.n as f64 * total;
        match value(&r.graph, &r.dendrogram) {
            Ok(v) => {
                if total > 0.0 {
                    worst = worst.min(v / (r.n as f64 * total));
                }
                t.expect(v >= bound - ABS_TOL, || format!("n={}: value {v} < bound {bound}", r.n));
            }
            Err(e) => t.error("value", e),
        }
    }
    t.note(format!("min value/(nΣw) = {worst:.4}"));
    t.finish()
}

/// Revenue of Matching Affinity against a third of the best revenue over
/// every binary tree on `n` leaves.
pub fn revenue_vs_optimum(n: usize, graphs: usize, seed: u64) -> CheckResult {
    let mut t = Tally::new("revenue_vs_optimum");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gs: Vec<WeightedGraph> = (0..graphs)
        .map(|_| random_integer_graph(&mut rng, n, Orientation::Similarity, 20))
        .collect();
    let best = oracle::brute_max_revenue(&gs);
    let mut worst = f64::INFINITY;
    for (g, opt) in gs.iter().zip(best) {
        match matching_affinity(g, Mode::Max, &EngineChoice::exact(), 0.05).and_then(|(d, _)| revenue(g, &d)) {
            Ok(rev) => {
                if opt > 0.0 {
                    worst = worst.min(rev / opt);
                }
                t.expect(rev >= opt / 3.0 - ABS_TOL, || format!("revenue {rev} < OPT/3 = {}", opt / 3.0));
            }
            Err(e) => t.error("matching affinity", e),
        }
    }
    t.note(format!("min revenue/OPT = {worst:.4}"));
    t.finish()
}

/// Level shape of Matching Affinity: every level from the first merge on
/// has real cluster sizes within a factor of two (equal when `n = 2^N`),
/// and level `i` has `2^(N-i)` clusters.
pub fn balance(runs: &[MaRun]) -> CheckResult {
    let mut t = Tally::new("balance");
    let mut worst = 1.0f64;
    for r in runs {
        let levels = r.dendrogram.levels();
        let big_n = levels_for(r.n);
        for (i, level) in levels.iter().enumerate().skip(1) {
            let b = balance_ratio(level);
            worst = worst.min(b);
            let need = if is_pow2(r.n) { 1.0 } else { 0.5 };
            t.expect(b >= need, || format!("n={} level {i}: balance {b} < {need}", r.n));
            t.expect(level.len() == 1 << (big_n - i), || {
                format!("n={} level {i}: {} clusters, expected {}", r.n, level.len(), 1 << (big_n - i))
            });
        }
    }
    t.note(format!("min level balance = {worst:.3}"));
    t.finish()
}

/// k-sized matching against the brute-force best matching with at most k
/// pairs, on random graphs with `n` drawn from `4..=max_n`.
pub fn k_sized_matching(graphs: usize, max_n: usize, epsilon: f64, seed: u64) -> CheckResult {
    let mut t = Tally::new("k_sized_matching");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let engine = EngineChoice::exact();
    let mut worst = f64::INFINITY;
    let mut max_probes = 0;
    for _ in 0..graphs {
        let n = rng.gen_range(4..=max_n);
        let g = random_integer_graph(&mut rng, n, Orientation::Similarity, 20);
        let w_max = g.max_weight() as u64;
        for k in 1..=n / 2 {
            let opt = oracle::brute_max_matching(&g, Some(k));
            match k_sized_max_matching(g.weights(), k, epsilon, &engine) {
                Ok(out) => {
                    let got = out.matching.total_weight();
                    if opt > 0.0 {
                        worst = worst.min(got / opt);
                    }
                    max_probes = max_probes.max(out.probes);
                    t.expect(got >= (1.0 - epsilon) * opt - ABS_TOL, || {
                        format!("n={n} k={k}: weight {got} < (1-ε)·OPT_k = {}", (1.0 - epsilon) * opt)
                    });
                    t.expect(out.matching.len() <= k, || format!("n={n} k={k}: {} pairs", out.matching.len()));
                    let cap = probe_bound(n, w_max);
                    t.expect(out.probes <= cap, || format!("n={n} k={k}: {} probes > {cap}", out.probes));
                    t.expect(out.matching.validate(g.weights()).is_ok(), || format!("n={n} k={k}: invalid matching"));
                }
                Err(e) => t.error("k-sized matching", e),
            }
        }
    }
    t.note(format!("min weight/OPT_k = {worst:.4}, max probes = {max_probes}"));
    t.finish()
}

/// Adversarial Affinity on the disjoint-matching family has value exactly
/// `8 n_sets` against `8 n_sets^2` for the reference; on the bipartite unit
/// family the Matching Affinity / Affinity revenue ratio roughly doubles as
/// the sides double.
pub fn affinity_separation(n_sets: &[usize], halves: &[usize]) -> CheckResult {
    let mut t = Tally::new("affinity_separation");
    for &s in n_sets {
        match adversarial::adversarial_affinity_run(&FamilySpec::disjoint_matching(s)) {
            Ok((_, r)) => {
                let (want_a, want_r) = (8.0 * s as f64, 8.0 * (s * s) as f64);
                t.expect(r.affinity == want_a && r.reference == want_r, || {
                    format!("n_sets={s}: values {} / {}, expected {want_a} / {want_r}", r.affinity, r.reference)
                });
                t.note(format!("n_sets={s}: {}/{}", r.affinity, r.reference));
            }
            Err(e) => t.error("disjoint_matching", e),
        }
    }
    let mut ratios = Vec::new();
    for &h in halves {
        let spec = FamilySpec::bipartite_unit(h);
        let engine = adversarial::engine_for(spec.vertex_count());
        match adversarial::family_report(&spec, &engine, 0.05) {
            Ok(r) => ratios.push(r.matching_affinity_over_affinity),
            Err(e) => t.error("bipartite_unit", e),
        }
    }
    for w in ratios.windows(2) {
        let growth = w[1] / w[0];
        t.expect((1.5..=2.5).contains(&growth), || {
            format!("bipartite_unit ratio grew by {growth:.3}, outside 2 ± 25%")
        });
    }
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    t.note(format!("bipartite_unit ratios {}", shown.join(" -> ")));
    t.finish()
}

/// Matching Affinity stays below the reference hierarchy on the rows/columns
/// (revenue) and bipartite-minus-matching (value) families, with the ratio
/// shrinking as the instances grow.
pub fn tightness_trends(rows_columns: &[usize], n_halves: &[usize]) -> CheckResult {
    let mut t = Tally::new("tightness_trends");
    let run = |t: &mut Tally, label: &str, specs: Vec<FamilySpec>| {
        let mut ratios = Vec::new();
        for spec in specs {
            let engine = adversarial::engine_for(spec.vertex_count());
            match adversarial::family_report(&spec, &engine, 0.05) {
                Ok(r) => {
                    let x = r.matching_affinity_over_reference;
                    t.expect(x < 1.0, || format!("{label} size {}: ratio {x} >= 1", spec.size));
                    ratios.push(x);
                }
                Err(e) => t.error(label, e),
            }
        }
        for w in ratios.windows(2) {
            t.expect(w[1] < w[0], || format!("{label}: ratio {} does not drop below {}", w[1], w[0]));
        }
        let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
        t.note(format!("{label} {}", shown.join(" -> ")));
    };
    run(&mut t, "rows_columns", rows_columns.iter().map(|&n| FamilySpec::rows_columns(n)).collect());
    run(&mut t, "bipartite_minus_pm", n_halves.iter().map(|&n| FamilySpec::bipartite_minus_pm(n)).collect());
    t.finish()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Cost/revenue identities on random binary trees, checked against the
/// per-pair oracle, plus the closed form for unit-weight complete graphs.
pub fn objective_identities(pairs: usize, max_n: usize, seed: u64) -> CheckResult {
    let mut t = Tally::new("objective_identities");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let n = rng.gen_range(2..=max_n);
        let g = random_integer_graph(&mut rng, n, Orientation::Similarity, 20);
        let d = random_binary_dendrogram(&mut rng, n);
        let total = g.total_weight();
        let (cost, rev) = match (dasgupta_cost(&g, &d), revenue(&g, &d)) {
            (Ok(c), Ok(r)) => (c, r),
            (Err(e), _) | (_, Err(e)) => {
                t.error("objective", e);
                continue;
            }
        };
        let mut merge_costs = 0.0;
        let mut merge_revs = 0.0;
        for id in d.internal_nodes() {
            let kids = d.node(id).children();
            let (a, b) = (d.members(kids[0]), d.members(kids[1]));
            merge_costs += merge_cost(&g, a, b).unwrap_or(f64::NAN);
            merge_revs += merge_revenue(&g, a, b).unwrap_or(f64::NAN);
        }
        let pairwise = oracle::pairwise_cost(&g, &d);
        t.expect(close(cost, pairwise), || format!("n={n}: cost {cost} vs pairwise {pairwise}"));
        t.expect(close(cost, 2.0 * total + merge_costs), || {
            format!("n={n}: cost {cost} vs 2Σw + Σ merge costs {}", 2.0 * total + merge_costs)
        });
        t.expect(close(rev, merge_revs), || format!("n={n}: revenue {rev} vs Σ merge revenues {merge_revs}"));
        t.expect(close(rev + cost, n as f64 * total), || {
            format!("n={n}: revenue + cost {} vs nΣw {}", rev + cost, n as f64 * total)
        });
    }
    for m in 3..=8usize {
        let g = WeightedGraph::from_fn(m, Orientation::Similarity, |_, _| 1.0).expect("unit weights");
        let want = ((m * m * m - m) / 3) as f64;
        for _ in 0..20 {
            let d = random_binary_dendrogram(&mut rng, m);
            match dasgupta_cost(&g, &d) {
                Ok(c) => t.expect(c == want, || format!("K_{m}: cost {c}, expected {want}")),
                Err(e) => t.error("K_m cost", e),
            }
        }
    }
    t.finish()
}

/// The bundled labeled datasets (iris and wine), compiled into the binary.
pub fn bundled_datasets() -> Result<Vec<LabeledDataset>> {
    Ok(vec![
        parse_dataset(include_str!("../data/iris.csv"), "iris")?,
        parse_dataset(include_str!("../data/wine.csv"), "wine")?,
    ])
}

/// Experimental protocol on real data: perfect balance at every power-of-two
/// cut of filtered data, balance at least 1/4 on raw data, and a better Rand
/// index than random divisive clustering averaged over `seeds` runs.
pub fn protocol_properties(datasets: &[LabeledDataset], seeds: u64) -> CheckResult {
    let mut t = Tally::new("protocol_properties");
    let engine = EngineChoice::greedy();
    for ds in datasets {
        for mode in [Mode::Max, Mode::Min] {
            let spec = RunSpec::new(Algorithm::MatchingAffinity, mode, engine);
            let label = format!("{} {mode}", ds.name);
            let result = (|| -> Result<()> {
                for s in 0..seeds {
                    let f = filter_balanced_pow2(ds, s)?;
                    let d = crate::clusterers::run(&crate::evaluation::graph_for_mode(&f, mode)?, &spec)?.dendrogram;
                    let mut k = 2;
                    while k < f.len() {
                        let b = balance_ratio(&d.extract_k_clustering(k)?);
                        t.expect(b == 1.0, || format!("{label} filtered seed {s}: k={k} balance {b}"));
                        k *= 2;
                    }
                }
                let g = crate::evaluation::graph_for_mode(ds, mode)?;
                let d = crate::clusterers::run(&g, &spec)?.dendrogram;
                let mut worst = 1.0f64;
                for k in 2..=32.min(ds.len()) {
                    let b = balance_ratio(&d.extract_k_clustering(k)?);
                    worst = worst.min(b);
                    t.expect(b >= 0.25, || format!("{label} raw: k={k} balance {b} < 1/4"));
                }
                let truth = ds.ground_truth();
                let k = ds.num_classes();
                let ma = rand_index(&d.extract_k_clustering(k)?, &truth)?;
                let mut rd = 0.0;
                for s in 0..seeds {
                    rd += rand_index(&random_divisive(&g, s)?.extract_k_clustering(k)?, &truth)?;
                }
                rd /= seeds as f64;
                t.expect(ma > rd, || format!("{label}: rand index {ma:.4} <= random divisive {rd:.4}"));
                t.note(format!("{label}: RI {ma:.3} vs {rd:.3}, raw balance >= {worst:.2}"));
                Ok(())
            })();
            if let Err(e) = result {
                t.error(&label, e);
            }
        }
    }
    t.finish()
}

/// Ledger depth matches `N` with `2^(N-1) < n <= 2^N`, and seeded runs and
/// CSV output reproduce byte for byte.
pub fn round_accounting(runs: &[MaRun], datasets: &[LabeledDataset]) -> CheckResult {
    let mut t = Tally::new("round_accounting");
    for r in runs {
        let want = levels_for(r.n);
        let ok = r.ledger.levels == want && (r.n == 1 || (1usize << (want - 1)) < r.n) && r.n <= 1 << want;
        t.expect(ok, || format!("n={}: ledger levels {} vs N={want}", r.n, r.ledger.levels));
        t.expect(r.dendrogram.levels().len() == want + 1, || {
            format!("n={}: {} levels in dendrogram", r.n, r.dendrogram.levels().len())
        });
    }
    for r in runs.iter().step_by(17) {
        let mode = Mode::for_orientation(r.graph.orientation());
        match matching_affinity(&r.graph, mode, &EngineChoice::exact(), 0.05) {
            Ok((d, l)) => t.expect(d == r.dendrogram && l == r.ledger, || format!("n={}: rerun differs", r.n)),
            Err(e) => t.error("rerun", e),
        }
    }
    let grid = EvalGrid {
        algorithms: Algorithm::ALL.to_vec(),
        modes: vec![Mode::Max, Mode::Min],
        engine: EngineChoice::greedy(),
        epsilon: 0.05,
        ks: vec![2, 3, 4],
        reps: 3,
        base_seed: 7,
        filtered: true,
    };
    let csv = || -> Result<String> { write_eval_csv(&eval_grid(datasets, &grid)?) };
    match (csv(), csv()) {
        (Ok(a), Ok(b)) => {
            t.expect(a == b, || "eval CSV differs between identical runs".to_string());
            t.note(format!("eval CSV {} bytes reproduced", a.len()));
        }
        (Err(e), _) | (_, Err(e)) => t.error("eval grid", e),
    }
    t.finish()
}

/// Matching engines: greedy keeps half of the optimum, local search never
/// loses to greedy, outputs are valid and repeatable.
pub fn engine_properties(graphs: usize, seed: u64) -> CheckResult {
    let mut t = Tally::new("engine_properties");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..graphs {
        let n = rng.gen_range(2..=10);
        let g = random_integer_graph(&mut rng, n, Orientation::Similarity, 20);
        let w = g.weights();
        let opt = oracle::brute_max_matching(&g, None);
        let exact = max_weight_matching(w, Cardinality::Any, &EngineChoice::exact());
        let greedy = greedy_matching(w);
        let local = local_search_matching(w, 0.05);
        match (exact, local) {
            (Ok(e), Ok(l)) => {
                t.expect((e.total_weight() - opt).abs() <= ABS_TOL, || format!("n={n}: exact {} vs oracle {opt}", e.total_weight()));
                t.expect(greedy.total_weight() >= 0.5 * opt - ABS_TOL, || format!("n={n}: greedy below half"));
                t.expect(l.total_weight() >= greedy.total_weight() - ABS_TOL, || format!("n={n}: local search below greedy"));
                for m in [&e, &greedy, &l] {
                    t.expect(m.validate(w).is_ok(), || format!("n={n}: invalid matching {:?}", m.pairs()));
                }
                t.expect(greedy_matching(w) == greedy, || format!("n={n}: greedy not repeatable"));
                t.expect(local_search_matching(w, 0.05).is_ok_and(|x| x == l), || {
                    format!("n={n}: local search not repeatable")
                });
            }
            (Err(e), _) | (_, Err(e)) => t.error("engine", e),
        }
    }
    t.finish()
}

/// Clustering-graph invariants: the singleton graph is the weight table,
/// coarsening agrees with recomputation from the base graph, and average
/// linkage is symmetric and scales with the weights.
pub fn clustering_graph_properties(graphs: usize, seed: u64) -> CheckResult {
    let mut t = Tally::new("clustering_graph_properties");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..graphs {
        let n = 1 << rng.gen_range(1..=4);
        let g = random_integer_graph(&mut rng, n, Orientation::Similarity, 20);
        let result = (|| -> Result<()> {
            let mut cg = build_clustering_graph(&g, &Clustering::singletons(n))?;
            t.expect(cg.weights() == g.weights(), || format!("n={n}: singleton graph differs"));
            while cg.len() > 1 {
                let m = greedy_matching(cg.weights());
                let pairing = Matching::from_pairs(m.pairs().to_vec(), cg.weights());
                cg = coarsen(&cg, &pairing)?;
                let fresh = build_clustering_graph(&g, &cg.to_clustering(0)?)?;
                let mut worst = 0.0f64;
                for a in 0..cg.len() {
                    for b in 0..cg.len() {
                        let (x, y) = (cg.members(a), cg.members(b));
                        let ia = (0..fresh.len()).find(|&i| fresh.members(i) == sorted(x)).expect("same clusters");
                        let ib = (0..fresh.len()).find(|&i| fresh.members(i) == sorted(y)).expect("same clusters");
                        worst = worst.max((cg.weight(a, b) - fresh.weight(ia, ib)).abs());
                    }
                }
                t.expect(worst <= 1e-9, || format!("n={n}: coarsened weight off by {worst}"));
            }
            let a: Vec<usize> = (0..n / 2).collect();
            let b: Vec<usize> = (n / 2..n).collect();
            let ab = crate::graph::average_linkage(&g, &a, &b)?;
            let ba = crate::graph::average_linkage(&g, &b, &a)?;
            let scaled = crate::graph::average_linkage(&g.scaled(2.5)?, &a, &b)?;
            t.expect(ab == ba, || format!("n={n}: average linkage not symmetric"));
            t.expect(close(scaled, 2.5 * ab), || format!("n={n}: average linkage not scale-equivariant"));
            Ok(())
        })();
        if let Err(e) = result {
            t.error("clustering graph", e);
        }
    }
    t.finish()
}

fn sorted(x: &[usize]) -> Vec<usize> {
    let mut v = x.to_vec();
    v.sort_unstable();
    v
}

/// Hierarchy and objective invariants: `extract_k_clustering` returns `k`
/// dendrogram nodes, and revenue and value scale linearly with the weights.
pub fn hierarchy_properties(trees: usize, seed: u64) -> CheckResult {
    let mut t = Tally::new("hierarchy_properties");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trees {
        let n = rng.gen_range(1..=24);
        let g = random_integer_graph(&mut rng, n, Orientation::Similarity, 20);
        let result = (|| -> Result<()> {
            let (d, _) = matching_affinity(&g, Mode::Max, &EngineChoice::greedy(), 0.05)?;
            for k in 1..=n {
                let c = d.extract_k_clustering(k)?;
                t.expect(c.len() == k, || format!("n={n}: asked for {k} clusters, got {}", c.len()));
                let all_nodes = c.clusters().iter().all(|cl| (0..d.nodes().len()).any(|id| d.members(id) == cl.as_slice()));
                t.expect(all_nodes, || format!("n={n} k={k}: a cluster is not a dendrogram node"));
            }
            let lambda = 3.0;
            let gs = g.scaled(lambda)?;
            t.expect(close(revenue(&gs, &d)?, lambda * revenue(&g, &d)?), || format!("n={n}: revenue not scaling"));
            let gd = g.clone().with_orientation(Orientation::Dissimilarity);
            let gds = gs.with_orientation(Orientation::Dissimilarity);
            t.expect(close(value(&gds, &d)?, lambda * value(&gd, &d)?), || format!("n={n}: value not scaling"));
            Ok(())
        })();
        if let Err(e) = result {
            t.error("hierarchy", e);
        }
    }
    t.finish()
}

/// Rand index symmetry and identity against the pairwise oracle, and the
/// size and balance of filtered datasets.
pub fn evaluation_properties(seeds: u64, datasets: &[LabeledDataset]) -> CheckResult {
    let mut t = Tally::new("evaluation_properties");
    for s in 0..seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let n = rng.gen_range(2..=30);
        let kx = rng.gen_range(1..=n);
        let ky = rng.gen_range(1..=n);
        let lx: Vec<usize> = (0..n).map(|_| rng.gen_range(0..kx)).collect();
        let ly: Vec<usize> = (0..n).map(|_| rng.gen_range(0..ky)).collect();
        let (x, y) = (Clustering::from_labels(&lx), Clustering::from_labels(&ly));
        match (rand_index(&x, &y), rand_index(&y, &x), rand_index(&x, &x)) {
            (Ok(a), Ok(b), Ok(c)) => {
                let want = oracle::pairwise_rand_index(&lx, &ly);
                t.expect(a == b, || format!("seed {s}: rand index not symmetric"));
                t.expect((a - want).abs() <= 1e-12, || format!("seed {s}: rand index {a} vs pairwise {want}"));
                t.expect(c == 1.0, || format!("seed {s}: r(X, X) = {c}"));
            }
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => t.error("rand index", e),
        }
    }
    for ds in datasets {
        for s in 0..seeds.min(20) {
            match filter_balanced_pow2(ds, s) {
                Ok(f) => {
                    let counts: Vec<usize> = f.class_counts().iter().map(|c| c.1).collect();
                    let spread = counts.iter().max().unwrap_or(&0) - counts.iter().min().unwrap_or(&0);
                    t.expect(f.len().is_power_of_two(), || format!("{} seed {s}: size {}", ds.name, f.len()));
                    t.expect(spread <= 1, || format!("{} seed {s}: class counts {counts:?}", ds.name));
                    t.expect(filter_balanced_pow2(ds, s).is_ok_and(|g| g == f), || {
                        format!("{} seed {s}: filter not repeatable", ds.name)
                    });
                }
                Err(e) => t.error("filter", e),
            }
        }
    }
    t.finish()
}

/// Fast counts for `selftest`; [`Budget::full`] matches the acceptance suite.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub bound_graphs: usize,
    pub optimum_graphs: usize,
    pub kmatch_graphs: usize,
    pub identity_pairs: usize,
    pub protocol_seeds: u64,
    pub property_cases: usize,
}

impl Budget {
    pub fn full() -> Self {
        Budget {
            bound_graphs: 200,
            optimum_graphs: 50,
            kmatch_graphs: 200,
            identity_pairs: 100,
            protocol_seeds: 50,
            property_cases: 200,
        }
    }

    pub fn quick() -> Self {
        Budget {
            bound_graphs: 30,
            optimum_graphs: 5,
            kmatch_graphs: 40,
            identity_pairs: 100,
            protocol_seeds: 10,
            property_cases: 60,
        }
    }
}

/// Sizes used by the revenue and value bounds: powers of two and the rest of `5..=15`.
pub const BOUND_SIZES: [usize; 13] = [4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16];

/// The ten headline checks followed by the per-module property checks.
pub fn run_all(budget: Budget) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let corpus = |o| bound_corpus(o, &BOUND_SIZES, budget.bound_graphs, 0x5eed);
    let (sim, dis) = match (corpus(Orientation::Similarity), corpus(Orientation::Dissimilarity)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            let mut t = Tally::new("corpus");
            t.error("generating runs", e);
            return vec![t.finish()];
        }
    };
    let datasets = bundled_datasets();
    let all_runs: Vec<MaRun> = sim.iter().chain(&dis).cloned().collect();
    out.push(revenue_bound(&sim));
    out.push(revenue_vs_optimum(8, budget.optimum_graphs, 0x0b7));
    out.push(value_bound(&dis));
    out.push(balance(&all_runs));
    out.push(k_sized_matching(budget.kmatch_graphs, 10, 0.05, 0x6b));
    out.push(affinity_separation(&[2, 4, 8], &[8, 16, 32]));
    out.push(tightness_trends(&[2, 3], &[8, 16, 32]));
    out.push(objective_identities(budget.identity_pairs, 12, 0x1d));
    match &datasets {
        Ok(ds) => {
            out.push(protocol_properties(ds, budget.protocol_seeds));
            out.push(round_accounting(&all_runs, ds));
        }
        Err(e) => {
            for name in ["protocol_properties", "round_accounting"] {
                let mut t = Tally::new(name);
                t.expect(false, || format!("loading bundled datasets: {e}"));
                out.push(t.finish());
            }
        }
    }
    out.push(engine_properties(budget.property_cases, 0xe9));
    out.push(clustering_graph_properties(budget.property_cases / 4, 0xc9));
    out.push(hierarchy_properties(budget.property_cases / 4, 0x4e));
    out.push(evaluation_properties(budget.property_cases as u64, datasets.as_deref().unwrap_or(&[])));
    out
}
