use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Clustering;

/// Feature vectors with one class label each.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub name: String,
    pub vectors: Vec<Vec<f64>>,
    pub labels: Vec<String>,
}

impl LabeledDataset {
    pub fn new(name: impl Into<String>, vectors: Vec<Vec<f64>>, labels: Vec<String>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::pre("dataset has no points"));
        }
        if vectors.len() != labels.len() {
            return Err(Error::SizeMismatch {
                expected: vectors.len(),
                found: labels.len(),
            });
        }
        let d = vectors[0].len();
        if d == 0 {
            return Err(Error::pre("dataset has no feature columns"));
        }
        if let Some(i) = vectors.iter().position(|v| v.len() != d) {
            return Err(Error::pre(format!(
                "point {i} has {} features, expected {d}",
                vectors[i].len()
            )));
        }
        Ok(LabeledDataset {
            name: name.into(),
            vectors,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    /// `(label, count)` in order of first appearance.
    pub fn class_counts(&self) -> Vec<(String, usize)> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut out: Vec<(String, usize)> = Vec::new();
        for l in &self.labels {
            let i = *index.entry(l.as_str()).or_insert_with(|| {
                out.push((l.clone(), 0));
                out.len() - 1
            });
            out[i].1 += 1;
        }
        out
    }

    pub fn num_classes(&self) -> usize {
        self.class_counts().len()
    }

    /// Ground-truth partition by label.
    pub fn ground_truth(&self) -> Clustering {
        Clustering::from_labels(&self.labels)
    }

    /// Rows at `keep` (in the given order).
    pub fn subset(&self, keep: &[usize]) -> LabeledDataset {
        LabeledDataset {
            name: self.name.clone(),
            vectors: keep.iter().map(|&i| self.vectors[i].clone()).collect(),
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }
}

/// Loads a labeled CSV file; the dataset is named after the file stem.
pub fn load_dataset(path: &Path) -> Result<LabeledDataset> {
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    parse_dataset(&text, &name)
}

/// Parses labeled CSV: numeric feature columns, then a label column.
/// A first row whose feature cells are not all numeric is taken as a header.
pub fn parse_dataset(text: &str, name: &str) -> Result<LabeledDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    let mut width: Option<usize> = None;
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() < 2 {
            return Err(Error::parse(line, "need at least one feature column and a label"));
        }
        let cells: Vec<&str> = record.iter().collect();
        let (features, label) = cells.split_at(cells.len() - 1);
        let parsed: Vec<Option<f64>> = features
            .iter()
            .map(|c| c.parse::<f64>().ok().filter(|x| x.is_finite()))
            .collect();
        if first {
            first = false;
            if parsed.iter().all(Option::is_none) {
                width = Some(cells.len());
                continue;
            }
        }
        match width {
            Some(w) if w != cells.len() => {
                return Err(Error::parse(line, format!("expected {w} columns, found {}", cells.len())));
            }
            None => width = Some(cells.len()),
            _ => {}
        }
        let mut row = Vec::with_capacity(features.len());
        for (col, (cell, value)) in features.iter().zip(parsed).enumerate() {
            match value {
                Some(x) => row.push(x),
                None => {
                    return Err(Error::parse(
                        line,
                        format!("feature column {col} holds `{cell}`, not a finite number"),
                    ))
                }
            }
        }
        if label[0].is_empty() {
            return Err(Error::parse(line, "empty class label"));
        }
        vectors.push(row);
        labels.push(label[0].to_string());
    }
    if vectors.is_empty() {
        return Err(Error::parse(1, "no data rows"));
    }
    LabeledDataset::new(name, vectors, labels)
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;

    proptest! {
        #[test]
        fn parser_never_panics(text in "([a-z0-9.,# -]{0,12}\n){0,8}") {
            let _ = parse_dataset(&text, "fuzz");
        }

        #[test]
        fn written_rows_parse_back(rows in prop::collection::vec((prop::collection::vec(-1e6f64..1e6, 3), 0usize..3), 1..20)) {
            let mut text = String::from("a,b,c,label\n");
            for (v, l) in &rows {
                text.push_str(&format!("{},{},{},k{l}\n", v[0], v[1], v[2]));
            }
            let ds = parse_dataset(&text, "p").unwrap();
            prop_assert_eq!(ds.len(), rows.len());
            for (i, (v, l)) in rows.iter().enumerate() {
                prop_assert_eq!(&ds.vectors[i], v);
                prop_assert_eq!(&ds.labels[i], &format!("k{l}"));
            }
        }
    }
}
