use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::WeightedGraph;
use crate::hierarchy::{Dendrogram, DendrogramBuilder};

/// Recursive random bisection into halves of sizes `ceil(m/2)` and
/// `floor(m/2)`. A node's level is its height, so sibling subtrees of equal
/// size line up level by level.
pub fn random_divisive(g: &WeightedGraph, seed: u64) -> Result<Dendrogram> {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = DendrogramBuilder::new(n)?;
    let mut all: Vec<usize> = (0..n).collect();
    split(&mut b, &mut rng, &mut all)?;
    b.finish()
}

/// Returns `(node id, height)` for the subtree over `members`.
fn split(
    b: &mut DendrogramBuilder,
    rng: &mut ChaCha8Rng,
    members: &mut [usize],
) -> Result<(usize, usize)> {
    if members.len() == 1 {
        return Ok((members[0], 0));
    }
    members.shuffle(rng);
    let half = members.len().div_ceil(2);
    let (left, right) = members.split_at_mut(half);
    let (a, ha) = split(b, rng, left)?;
    let (c, hc) = split(b, rng, right)?;
    let h = ha.max(hc) + 1;
    Ok((b.merge(vec![a, c], h)?, h))
}
