//! Proptest strategies shared by the module tests.

use proptest::prelude::*;

use crate::graph::{Orientation, WeightedGraph};

/// Complete graph on `n` vertices (drawn from `sizes`) with integer weights in `0..=20`.
pub fn int_graph(sizes: std::ops::RangeInclusive<usize>, o: Orientation) -> impl Strategy<Value = WeightedGraph> {
    sizes.prop_flat_map(move |n| {
        prop::collection::vec(0u32..=20, n * (n - 1) / 2).prop_map(move |ws| {
            let mut it = ws.into_iter();
            let mut m = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let w = f64::from(it.next().expect("one weight per pair"));
                    m[i][j] = w;
                    m[j][i] = w;
                }
            }
            WeightedGraph::from_fn(n, o, |i, j| m[i][j]).expect("valid weights")
        })
    })
}

/// Label vector of length `n` with labels below `k`.
pub fn labels(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..k, n)
}
