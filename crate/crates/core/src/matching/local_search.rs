//! Greedy start plus bounded local improvement.

use super::greedy::greedy_with;
use super::{check_epsilon, Cardinality, Matching};
use crate::error::Result;
use crate::graph::DenseMatrix;

/// Local-search matching with relative-gain threshold `epsilon`.
pub fn local_search_matching(w: &DenseMatrix, epsilon: f64) -> Result<Matching> {
    local_search_with(w, Cardinality::Any, epsilon)
}

pub(crate) fn local_search_with(
    w: &DenseMatrix,
    card: Cardinality,
    epsilon: f64,
) -> Result<Matching> {
    check_epsilon(epsilon)?;
    let start = greedy_with(w, card)?;
    Ok(improve(w, start, card, epsilon))
}

#[derive(Clone, Copy, Debug)]
enum Move {
    /// Match two free vertices.
    Add(usize, usize),
    /// Replace pair `(u, old)` by `(u, free)`.
    Swap { u: usize, old: usize, free: usize },
    /// Replace pair `(u, v)` by `(x, u)` and `(v, y)`.
    Augment { u: usize, v: usize, x: usize, y: usize },
    /// Replace `(a, b)` and `(c, d)` by `(a, c)` and `(b, d)`.
    Rewire { a: usize, b: usize, c: usize, d: usize },
}

/// Applies the best improving move until none gains more than
/// `epsilon * w(M) / max(1, |M|)`.
///
/// Moves that grow the matching are only considered while the cardinality
/// constraint allows another pair.
pub fn improve(w: &DenseMatrix, start: Matching, card: Cardinality, epsilon: f64) -> Matching {
    let n = w.n();
    let mut mate = start.mates(n);
    let mut size = start.len();
    let mut total = start.total_weight();
    let max_steps = 100 * n * n + 100;

    for _ in 0..max_steps {
        let can_grow = match card {
            Cardinality::Any => 2 * (size + 1) <= n,
            Cardinality::AtMost(k) => size < k,
            Cardinality::Exactly(_) => false,
        };
        let floor = (epsilon * total / size.max(1) as f64).max(1e-12 * (1.0 + total.abs()));
        let free: Vec<usize> = (0..n).filter(|&v| mate[v].is_none()).collect();
        let matched: Vec<(usize, usize)> = (0..n)
            .filter_map(|u| mate[u].filter(|&v| u < v).map(|v| (u, v)))
            .collect();

        let mut best: Option<(f64, Move)> = None;
        let mut consider = |gain: f64, mv: Move| {
            if gain > floor && best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, mv));
            }
        };

        if can_grow {
            for (i, &x) in free.iter().enumerate() {
                for &y in &free[i + 1..] {
                    consider(w.get(x, y), Move::Add(x, y));
                }
            }
        }
        for &(u, v) in &matched {
            let base = w.get(u, v);
            for &x in &free {
                consider(w.get(u, x) - base, Move::Swap { u, old: v, free: x });
                consider(w.get(v, x) - base, Move::Swap { u: v, old: u, free: x });
            }
            if can_grow {
                for &x in &free {
                    for &y in &free {
                        if x != y {
                            consider(
                                w.get(x, u) + w.get(v, y) - base,
                                Move::Augment { u, v, x, y },
                            );
                        }
                    }
                }
            }
        }
        for (i, &(a, b)) in matched.iter().enumerate() {
            for &(c, d) in &matched[i + 1..] {
                let base = w.get(a, b) + w.get(c, d);
                consider(w.get(a, c) + w.get(b, d) - base, Move::Rewire { a, b, c, d });
                consider(w.get(a, d) + w.get(b, c) - base, Move::Rewire { a, b, c: d, d: c });
            }
        }

        let Some((gain, mv)) = best else { break };
        match mv {
            Move::Add(x, y) => {
                mate[x] = Some(y);
                mate[y] = Some(x);
                size += 1;
            }
            Move::Swap { u, old, free } => {
                mate[old] = None;
                mate[u] = Some(free);
                mate[free] = Some(u);
            }
            Move::Augment { u, v, x, y } => {
                mate[x] = Some(u);
                mate[u] = Some(x);
                mate[v] = Some(y);
                mate[y] = Some(v);
                size += 1;
            }
            Move::Rewire { a, b, c, d } => {
                mate[a] = Some(c);
                mate[c] = Some(a);
                mate[b] = Some(d);
                mate[d] = Some(b);
            }
        }
        total += gain;
    }

    let pairs = (0..n)
        .filter_map(|u| mate[u].filter(|&v| u < v).map(|v| (u, v)))
        .collect();
    Matching::from_pairs(pairs, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::tests::k4;

    #[test]
    fn k4_reaches_optimum() {
        let m = local_search_matching(&k4(), 0.01).unwrap();
        assert_eq!(m.pairs(), &[(0, 1), (2, 3)]);
        assert_eq!(m.total_weight(), 10.0);
    }

    #[test]
    fn never_worse_than_greedy() {
        let w = DenseMatrix::from_fn(7, |i, j| ((i * 7 + j * 3) % 5) as f64);
        let g = crate::matching::greedy_matching(&w);
        let l = local_search_matching(&w, 0.1).unwrap();
        assert!(l.total_weight() >= g.total_weight());
        l.validate(&w).unwrap();
    }

    #[test]
    fn exact_cardinality_is_kept() {
        let w = DenseMatrix::from_fn(6, |i, j| (i + j) as f64);
        let start = greedy_with(&w, Cardinality::Exactly(2)).unwrap();
        let m = improve(&w, start, Cardinality::Exactly(2), 0.01);
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn grows_from_empty_start() {
        let w = DenseMatrix::from_fn(4, |_, _| 1.0);
        let m = improve(&w, Matching::empty(), Cardinality::Any, 0.5);
        assert_eq!(m.len(), 2);
    }
}
