//! Fill-reducing orderings for symmetric sparse matrices.

use std::collections::BTreeSet;

use crate::sparse::CscMatrix;

/// Minimum-degree ordering of a symmetric matrix given by its upper
/// triangle. Returns `perm` with `perm[k]` = original index eliminated
/// `k`-th. Ties go to the smallest index, so the result is deterministic.
///
/// This is the plain elimination-graph variant; it is quadratic in the
/// dimension but adequate for the problem sizes handled here.
pub fn minimum_degree(upper: &CscMatrix) -> Vec<usize> {
    let n = upper.ncols();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, j, _) in upper.triplets() {
        if i != j {
            adj[i].insert(j);
            adj[j].insert(i);
        }
    }
    let mut eliminated = vec![false; n];
    let mut perm = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&i| !eliminated[i])
            .min_by_key(|&i| (adj[i].len(), i))
            .expect("a node remains");
        eliminated[v] = true;
        perm.push(v);
        let nbrs: Vec<usize> = std::mem::take(&mut adj[v]).into_iter().collect();
        for &a in &nbrs {
            adj[a].remove(&v);
        }
        for (k, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[k + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }
    perm
}

/// Stable partition of `perm` placing indices `< split` first.
pub fn leading_block_first(perm: &[usize], split: usize) -> Vec<usize> {
    perm.iter()
        .copied()
        .filter(|&i| i < split)
        .chain(perm.iter().copied().filter(|&i| i >= split))
        .collect()
}

pub fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    inv
}
