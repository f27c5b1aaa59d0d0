use rand::Rng as _;

use crate::error::{param, Result};
use crate::graph::Graph;
use crate::rng::rng_from_seed;

/// Preferential attachment grown from a clique on `m_attach` nodes. Each new
/// node links to `m_attach` distinct existing nodes drawn proportionally to
/// their current degree, so the edge count is always
/// `C(m_attach, 2) + m_attach * (n - m_attach)`.
pub fn gen_ba(n: usize, m_attach: usize, seed: u64) -> Result<Graph> {
    if m_attach == 0 || m_attach >= n {
        return Err(param(format!("BA needs 1 <= m_attach < n, got {m_attach} with n={n}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::with_capacity(m_attach * n);
    // every edge endpoint once: sampling from here is degree-proportional
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * m_attach * n);
    for u in 0..m_attach {
        for v in u + 1..m_attach {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut targets = Vec::with_capacity(m_attach);
    for v in m_attach..n {
        targets.clear();
        while targets.len() < m_attach {
            let t = if endpoints.is_empty() {
                rng.random_range(0..v)
            } else {
                endpoints[rng.random_range(0..endpoints.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    Ok(Graph::from_edges(n, edges))
}
