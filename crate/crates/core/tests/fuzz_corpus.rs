//! Replays the checked-in fuzz seeds through the same assertions the fuzz
//! targets make, so the corpus stays meaningful on stable toolchains.

use std::fs;
use std::path::Path;

use matchclust::evaluation::parse_dataset;
use matchclust::graph_io::{parse_graph, write_graph, GraphFormat};
use matchclust::hierarchy::Dendrogram;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.display().to_string(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn graph_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("parse_graph") {
        if let Ok(g) = parse_graph(&text) {
            accepted += 1;
            for f in [GraphFormat::Edges, GraphFormat::Matrix] {
                assert_eq!(parse_graph(&write_graph(&g, f)).unwrap(), g, "{name}");
            }
        }
    }
    assert!(accepted >= 3);
}

#[test]
fn dataset_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("parse_dataset") {
        if let Ok(ds) = parse_dataset(&text, "seed") {
            accepted += 1;
            assert_eq!(ds.vectors.len(), ds.labels.len(), "{name}");
            assert!(ds.vectors.iter().all(|v| v.len() == ds.dim()), "{name}");
        }
    }
    assert!(accepted >= 2);
}

#[test]
fn dendrogram_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("parse_dendrogram") {
        if let Ok(d) = Dendrogram::parse_text(&text) {
            accepted += 1;
            assert!(d.validate().is_empty(), "{name}");
            assert_eq!(Dendrogram::parse_text(&d.to_text()).unwrap(), d, "{name}");
            for k in 1..=d.leaves() {
                assert_eq!(d.extract_k_clustering(k).unwrap().len(), k, "{name}");
            }
        }
    }
    assert!(accepted >= 2);
}
