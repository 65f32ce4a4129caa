use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matchclust"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn seven_vertices_take_three_levels() {
    let graph = data("seven.csv");
    let text = stdout_of(&[
        "cluster", "--input", graph.to_str().unwrap(), "--algo", "matching-affinity", "--mode", "max", "--engine",
        "exact",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["ledger"]["levels"], 3);
    assert_eq!(v["summary"]["leaves"], 7);
}

#[test]
fn disjoint_matching_ratio_is_one_half() {
    let text = stdout_of(&["adversarial", "--family", "disjoint_matching", "--n-sets", "2", "--report", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["affinity_over_reference"], 0.5);
}

#[test]
fn csv_outputs_are_byte_identical_across_runs() {
    let iris = data("iris.csv");
    let wine = data("wine.csv");
    let graph = data("seven.csv");
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["eval", "--data", iris.to_str().unwrap(), "--data", wine.to_str().unwrap(), "--reps", "4", "--filtered", "--seed", "3", "--jobs", "4"],
        vec!["eval", "--data", iris.to_str().unwrap(), "--algo", "random-divisive,affinity", "--reps", "5", "--k", "2,3"],
        vec!["adversarial", "--family", "rows_columns", "--n", "2"],
        vec!["adversarial", "--family", "bipartite_minus_pm", "--n-half", "8,16"],
        vec!["sweep", "--sizes", "4,6", "--graphs", "5", "--seed", "9"],
        vec!["cluster", "--input", graph.to_str().unwrap(), "--report", "csv", "--algo", "affinity", "--policy", "seeded_random:5"],
    ]
    .into_iter()
    .map(|c| c.into_iter().map(String::from).collect())
    .collect();
    for (i, args) in cases.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("{i}-{rep}.csv"));
            let mut full: Vec<&str> = args.iter().map(String::as_str).collect();
            full.extend(["--out", path.to_str().unwrap()]);
            let out = run(&full);
            assert!(out.status.success(), "{full:?}: {}", String::from_utf8_lossy(&out.stderr));
            outputs.push(std::fs::read(&path).unwrap());
        }
        assert!(!outputs[0].is_empty(), "{args:?} wrote nothing");
        assert_eq!(outputs[0], outputs[1], "{args:?} is not reproducible");
    }
}

#[test]
fn eval_header_is_fixed() {
    let iris = data("iris.csv");
    let text = stdout_of(&["eval", "--data", iris.to_str().unwrap(), "--algo", "ma", "--mode", "min", "--k", "3"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("dataset,algorithm,mode,engine,k,rand_index,balance_ratio,seed"));
    assert!(lines.next().unwrap().starts_with("iris,matching_affinity,min,greedy,3,"));
}

#[test]
fn dendrogram_file_parses_back() {
    let graph = data("seven.csv");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tree.txt");
    stdout_of(&["cluster", "--input", graph.to_str().unwrap(), "--dendrogram", path.to_str().unwrap()]);
    let d = matchclust::hierarchy::Dendrogram::parse_text(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(d.leaves(), 7);
    assert_eq!(d.levels().len(), 4);
}

#[test]
fn usage_errors_exit_with_two() {
    let graph = data("seven.csv");
    for args in [
        vec!["frobnicate"],
        vec!["cluster"],
        vec!["cluster", "--input", graph.to_str().unwrap(), "--engine", "magic"],
        vec!["cluster", "--input", graph.to_str().unwrap(), "--epsilon", "1.5"],
        vec!["cluster", "--input", "/no/such/file"],
        vec!["cluster", "--input", graph.to_str().unwrap(), "--mode", "min"],
        vec!["adversarial", "--family", "bipartite_unit"],
        vec!["eval", "--data", graph.to_str().unwrap(), "--reps", "0"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty(), "{args:?} printed no message");
    }
}

#[test]
fn size_cap_comes_from_the_environment() {
    let graph = data("seven.csv");
    let out = bin()
        .args(["cluster", "--input", graph.to_str().unwrap(), "--engine", "exact"])
        .env("MATCHCLUST_SIZE_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size cap"));
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.trim_end().ends_with("0 failed"), "{text}");
}
