//! Exhaustive maximum-weight matching by dynamic programming over vertex subsets.

use super::{Cardinality, Matching, MAX_EXACT_VERTICES};
use crate::error::{Error, Result};
use crate::graph::DenseMatrix;

/// Maximum-weight matching, optionally limited to at most `k_edges` pairs.
///
/// Among matchings of equal weight the one with more pairs wins, then the
/// lexicographically smallest sorted pair list.
pub fn exact_max_matching(
    w: &DenseMatrix,
    k_edges: Option<usize>,
    size_cap: usize,
) -> Result<Matching> {
    let card = match k_edges {
        Some(k) => Cardinality::AtMost(k),
        None => Cardinality::Any,
    };
    exact_with(w, card, size_cap)
}

#[inline]
fn near(a: f64, b: f64) -> bool {
    a >= b - 1e-12 * (1.0 + b.abs())
}

pub(crate) fn exact_with(w: &DenseMatrix, card: Cardinality, size_cap: usize) -> Result<Matching> {
    let n = w.n();
    let cap = size_cap.min(MAX_EXACT_VERTICES);
    if n > cap {
        return Err(Error::SizeCapExceeded { n, cap });
    }
    card.check(n)?;
    if n < 2 {
        return match card {
            Cardinality::Exactly(k) if k > 0 => Err(Error::Infeasible(format!(
                "{k} pairs requested on {n} vertices"
            ))),
            _ => Ok(Matching::empty()),
        };
    }

    // f[mask]: heaviest perfect matching on exactly the vertices of `mask`.
    let size = 1usize << n;
    let mut f = vec![f64::NEG_INFINITY; size];
    f[0] = 0.0;
    for mask in 1..size {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        let low = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << low);
        let row = w.row(low);
        let mut best = f64::NEG_INFINITY;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let v = row[j] + f[rest & !(1 << j)];
            if v > best {
                best = v;
            }
        }
        f[mask] = best;
    }

    let wanted = |pop: u32| -> bool {
        let pairs = (pop / 2) as usize;
        match card {
            Cardinality::Any => true,
            Cardinality::AtMost(k) => pairs <= k,
            Cardinality::Exactly(k) => pairs == k,
        }
    };

    let mut best = f64::NEG_INFINITY;
    for (mask, &value) in f.iter().enumerate() {
        if value > best && wanted(mask.count_ones()) {
            best = value;
        }
    }
    if !best.is_finite() {
        return Err(Error::Infeasible(
            "no matching satisfies the cardinality constraint".into(),
        ));
    }

    let mut top_pop = 0;
    for (mask, &value) in f.iter().enumerate() {
        let pop = mask.count_ones();
        if pop > top_pop && near(value, best) && wanted(pop) {
            top_pop = pop;
        }
    }

    let mut chosen: Option<Vec<(usize, usize)>> = None;
    for (mask, &value) in f.iter().enumerate() {
        if mask.count_ones() != top_pop || !near(value, best) {
            continue;
        }
        let pairs = reconstruct(w, &f, mask);
        if chosen.as_ref().is_none_or(|c| pairs < *c) {
            chosen = Some(pairs);
        }
    }
    Ok(Matching::from_pairs(chosen.unwrap_or_default(), w))
}

/// Walks the table from `mask`, pairing the lowest vertex with the smallest
/// partner that attains the optimum.
fn reconstruct(w: &DenseMatrix, f: &[f64], mask: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(mask.count_ones() as usize / 2);
    let mut m = mask;
    while m != 0 {
        let low = m.trailing_zeros() as usize;
        let rest = m & !(1 << low);
        let mut bits = rest;
        let mut pick = None;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if near(w.get(low, j) + f[rest & !(1 << j)], f[m]) {
                pick = Some(j);
                break;
            }
        }
        let j = pick.expect("table entry is attained by some partner");
        pairs.push((low, j));
        m = rest & !(1 << j);
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::tests::k4;

    fn path4() -> DenseMatrix {
        DenseMatrix::from_fn(4, |i, j| match (i, j) {
            (0, 1) | (2, 3) => 1.0,
            (1, 2) => 10.0,
            _ => 0.0,
        })
    }

    #[test]
    fn k4_unconstrained_and_single_edge() {
        let w = k4();
        let m = exact_max_matching(&w, None, 22).unwrap();
        assert_eq!(m.pairs(), &[(0, 1), (2, 3)]);
        assert_eq!(m.total_weight(), 10.0);

        let one = exact_max_matching(&w, Some(1), 22).unwrap();
        assert_eq!(one.pairs(), &[(0, 2)]);
        assert_eq!(one.total_weight(), 6.0);
    }

    #[test]
    fn path_prefers_heavy_middle_edge() {
        let w = path4();
        let m = exact_max_matching(&w, None, 22).unwrap();
        assert_eq!(m.pairs(), &[(0, 3), (1, 2)]);
        assert_eq!(m.total_weight(), 10.0);
        let one = exact_max_matching(&w, Some(1), 22).unwrap();
        assert_eq!(one.pairs(), &[(1, 2)]);
    }

    #[test]
    fn ties_prefer_more_pairs_then_lexicographic() {
        let zero = DenseMatrix::zeros(4);
        let m = exact_max_matching(&zero, None, 22).unwrap();
        assert_eq!(m.pairs(), &[(0, 1), (2, 3)]);
        let m = exact_max_matching(&DenseMatrix::zeros(5), Some(1), 22).unwrap();
        assert_eq!(m.pairs(), &[(0, 1)]);
    }

    #[test]
    fn forbidden_pairs_are_never_used() {
        let w = DenseMatrix::from_fn(4, |i, j| if i >= 2 && j >= 2 { f64::NEG_INFINITY } else { 1.0 });
        let m = exact_with(&w, Cardinality::Exactly(2), 22).unwrap();
        assert!(m.pairs().iter().all(|&(a, b)| a < 2 || b < 2));
        assert_eq!(m.len(), 2);

        let all_forbidden = DenseMatrix::from_fn(2, |_, _| f64::NEG_INFINITY);
        assert!(matches!(
            exact_with(&all_forbidden, Cardinality::Exactly(1), 22),
            Err(Error::Infeasible(_))
        ));
        assert!(exact_with(&all_forbidden, Cardinality::Any, 22).unwrap().is_empty());
    }

    #[test]
    fn size_cap_is_enforced() {
        let w = DenseMatrix::zeros(6);
        assert!(matches!(
            exact_max_matching(&w, None, 4),
            Err(Error::SizeCapExceeded { n: 6, cap: 4 })
        ));
    }

    #[test]
    fn trivial_sizes() {
        assert!(exact_max_matching(&DenseMatrix::zeros(1), None, 22).unwrap().is_empty());
        assert!(exact_max_matching(&DenseMatrix::zeros(0), None, 22).unwrap().is_empty());
    }
}
