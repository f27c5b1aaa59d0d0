use std::collections::HashSet;

use rand::Rng as _;

use crate::error::{param, Result};
use crate::graph::Graph;
use crate::rng::rng_from_seed;

/// Watts-Strogatz small world: a ring where each node links to its
/// `k_ring / 2` nearest neighbors on either side, then each lattice edge
/// `(u, u + j)` is, with probability `beta`, moved to `(u, w)` for a uniform
/// `w` that is neither `u` nor already adjacent to `u`. Rewiring never changes
/// the edge count.
pub fn gen_ws(n: usize, k_ring: usize, beta: f64, seed: u64) -> Result<Graph> {
    if k_ring == 0 || !k_ring.is_multiple_of(2) || k_ring >= n {
        return Err(param(format!(
            "WS ring degree must be even, positive and below n, got {k_ring} with n={n}"
        )));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(param(format!("WS beta must be in [0, 1], got {beta}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    for u in 0..n {
        for j in 1..=k_ring / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    for j in 1..=k_ring / 2 {
        for u in 0..n {
            if rng.random::<f64>() >= beta {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let v = (u + j) % n;
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)));
    Ok(Graph::from_edges(n, edges))
}
