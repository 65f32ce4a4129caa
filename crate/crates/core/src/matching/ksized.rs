//! Maximum matching with at most `k` pairs, reduced to unconstrained
//! maximum matching by adding dummy vertices.

use serde::Serialize;

use super::{check_epsilon, max_weight_matching, Cardinality, EngineChoice, Matching};
use crate::error::{Error, Result};
use crate::graph::DenseMatrix;

/// Result of [`k_sized_max_matching`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KMatchOutcome {
    pub matching: Matching,
    /// Engine invocations made by the search.
    pub probes: usize,
    /// Dummy edge weight of the accepted probe.
    pub q: u64,
    pub delta: f64,
    /// False when no probed `Q` met the halting condition and the result
    /// was cut down to its `k` heaviest pairs instead.
    pub halted: bool,
}

/// Slack used by the halting test: the smaller root of
/// `d^2 - (c + 1) d + epsilon = 0` with `c = n / k`, capped at `epsilon`.
pub fn reduction_delta(epsilon: f64, n: usize, k_edges: usize) -> f64 {
    let c = n as f64 / k_edges as f64;
    let b = c + 1.0;
    let disc = (b * b - 4.0 * epsilon).max(0.0);
    let root = (b - disc.sqrt()) / 2.0;
    root.min(epsilon)
}

/// Upper bound on engine invocations for `n` vertices and maximum weight `w_max`.
pub fn probe_bound(n: usize, w_max: u64) -> usize {
    let nw = n as u64 * w_max;
    if nw <= 1 {
        1
    } else {
        (64 - (nw - 1).leading_zeros()) as usize + 1
    }
}

fn integer_max_weight(w: &DenseMatrix) -> Result<u64> {
    let n = w.n();
    let mut top = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            let x = w.get(i, j);
            if !x.is_finite() || x < 0.0 || x.fract() != 0.0 {
                return Err(Error::NonIntegerWeight { u: i, v: j, weight: x });
            }
            top = top.max(x as u64);
        }
    }
    Ok(top)
}

/// Maximum-weight matching with at most `k_edges` pairs.
///
/// Adds `n - 2k` dummy vertices joined to every real vertex at weight `Q`
/// (dummies never pair with each other), solves the enlarged instance, and
/// drops dummy pairs. `Q` is binary searched for the smallest value whose
/// stripped matching `M` has `|M| <= k` and `w(M) <= Q k (1 - delta)`.
pub fn k_sized_max_matching(
    w: &DenseMatrix,
    k_edges: usize,
    epsilon: f64,
    engine: &EngineChoice,
) -> Result<KMatchOutcome> {
    let n = w.n();
    if k_edges == 0 || 2 * k_edges > n {
        return Err(Error::pre(format!(
            "k_edges = {k_edges} is not in 1..={} for {n} vertices",
            n / 2
        )));
    }
    check_epsilon(epsilon)?;
    let w_max = integer_max_weight(w)?;
    let delta = reduction_delta(epsilon, n, k_edges);
    let dummies = n - 2 * k_edges;

    if dummies == 0 {
        let matching = max_weight_matching(w, Cardinality::AtMost(k_edges), engine)?;
        return Ok(KMatchOutcome {
            matching,
            probes: 1,
            q: 0,
            delta,
            halted: true,
        });
    }

    let inner = EngineChoice {
        epsilon: delta.max(f64::MIN_POSITIVE),
        ..*engine
    };
    let total = n + dummies;
    let mut probes = 0usize;
    let mut probe = |q: u64| -> Result<(Matching, bool)> {
        probes += 1;
        let qf = q as f64;
        let t = DenseMatrix::from_fn(total, |i, j| match (i < n, j < n) {
            (true, true) => w.get(i, j),
            (false, false) => f64::NEG_INFINITY,
            _ => qf,
        });
        let full = max_weight_matching(&t, Cardinality::Any, &inner)?;
        let kept = full
            .pairs()
            .iter()
            .copied()
            .filter(|&(a, b)| a < n && b < n)
            .collect();
        let m = Matching::from_pairs(kept, w);
        let bound = qf * k_edges as f64 * (1.0 - delta);
        let ok = m.len() <= k_edges && m.total_weight() <= bound + 1e-9 * (1.0 + bound);
        Ok((m, ok))
    };

    let mut lo = if w_max == 0 { 0 } else { 1 };
    let mut hi = n as u64 * w_max;
    let mut found: Option<(u64, Matching)> = None;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let (m, ok) = probe(mid)?;
        if ok {
            hi = mid;
            found = Some((mid, m));
        } else {
            lo = mid + 1;
        }
    }
    let (q, matching, halted) = match found {
        Some((q, m)) if q == lo => (q, m, true),
        _ => {
            let (m, ok) = probe(lo)?;
            if ok {
                (lo, m, true)
            } else {
                (lo, m.truncated(k_edges, w), false)
            }
        }
    };
    Ok(KMatchOutcome {
        matching,
        probes,
        q,
        delta,
        halted,
    })
}
