//! Heaviest-edge-first matching.

use super::{Cardinality, Matching};
use crate::error::{Error, Result};
use crate::graph::DenseMatrix;

/// Scans edges by weight (descending, ties by `(u, v)`) and keeps each edge
/// whose endpoints are still free. Zero-weight edges are matchable, so on
/// even vertex counts the result is perfect.
pub fn greedy_matching(w: &DenseMatrix) -> Matching {
    greedy_with(w, Cardinality::Any).expect("unconstrained greedy cannot fail")
}

pub(crate) fn greedy_with(w: &DenseMatrix, card: Cardinality) -> Result<Matching> {
    let n = w.n();
    card.check(n)?;
    let limit = card.limit(n);
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let x = w.get(i, j);
            if x.is_finite() {
                edges.push((x, i, j));
            }
        }
    }
    edges.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    let mut used = vec![false; n];
    let mut pairs = Vec::with_capacity(limit);
    for (_, i, j) in edges {
        if pairs.len() == limit {
            break;
        }
        if !used[i] && !used[j] {
            used[i] = true;
            used[j] = true;
            pairs.push((i, j));
        }
    }
    if let Cardinality::Exactly(k) = card {
        if pairs.len() < k {
            return Err(Error::Infeasible(format!(
                "greedy found only {} of {k} requested pairs",
                pairs.len()
            )));
        }
    }
    Ok(Matching::from_pairs(pairs, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::tests::k4;

    #[test]
    fn k4_takes_heaviest_first() {
        let m = greedy_matching(&k4());
        assert_eq!(m.pairs(), &[(0, 2), (1, 3)]);
        assert_eq!(m.total_weight(), 7.0);
    }

    #[test]
    fn path_example() {
        let w = DenseMatrix::from_fn(4, |i, j| match (i, j) {
            (0, 1) | (2, 3) => 1.0,
            (1, 2) => 10.0,
            _ => 0.0,
        });
        let m = greedy_matching(&w);
        assert_eq!(m.pairs(), &[(0, 3), (1, 2)]);
        assert_eq!(m.total_weight(), 10.0);
    }

    #[test]
    fn ties_break_lexicographically() {
        let m = greedy_matching(&DenseMatrix::from_fn(4, |_, _| 1.0));
        assert_eq!(m.pairs(), &[(0, 1), (2, 3)]);
    }

    #[test]
    fn respects_limits() {
        let w = k4();
        let m = greedy_with(&w, Cardinality::AtMost(1)).unwrap();
        assert_eq!(m.pairs(), &[(0, 2)]);
        let forbidden = DenseMatrix::from_fn(3, |_, _| f64::NEG_INFINITY);
        assert!(greedy_with(&forbidden, Cardinality::Exactly(1)).is_err());
        assert!(greedy_matching(&forbidden).is_empty());
    }
}
