//! Node-importance scores: degree, closeness, betweenness and eigenvector
//! centrality on unweighted undirected graphs.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Degree,
    Closeness,
    Betweenness,
    Eigenvector,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Degree,
        Metric::Closeness,
        Metric::Betweenness,
        Metric::Eigenvector,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Degree => "degree",
            Metric::Closeness => "closeness",
            Metric::Betweenness => "betweenness",
            Metric::Eigenvector => "eigenvector",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "degree" => Ok(Metric::Degree),
            "closeness" => Ok(Metric::Closeness),
            "betweenness" => Ok(Metric::Betweenness),
            "eigenvector" => Ok(Metric::Eigenvector),
            other => Err(param(format!("unknown metric '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub metric: Metric,
    pub scores: Vec<f64>,
}

impl ScoreVector {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Node ids ordered by (score descending, id ascending).
    pub fn ranking(&self) -> Vec<NodeId> {
        let mut order: Vec<NodeId> = (0..self.scores.len()).collect();
        order.sort_by(|&a, &b| self.scores[b].total_cmp(&self.scores[a]).then(a.cmp(&b)));
        order
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

pub fn compute(g: &Graph, metric: Metric) -> Result<ScoreVector> {
    match metric {
        Metric::Degree => Ok(degree_centrality(g)),
        Metric::Closeness => Ok(closeness_centrality(g)),
        Metric::Betweenness => Ok(betweenness_centrality(g)),
        Metric::Eigenvector => eigenvector_centrality(g, EigenOptions::default()),
    }
}

pub fn degree_centrality(g: &Graph) -> ScoreVector {
    ScoreVector {
        metric: Metric::Degree,
        scores: (0..g.node_count()).map(|v| g.degree(v) as f64).collect(),
    }
}

/// BFS hop distances from `source`; unreachable nodes get `u32::MAX`.
fn bfs_distances(g: &Graph, source: NodeId, dist: &mut [u32], queue: &mut VecDeque<NodeId>) {
    dist.fill(u32::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
}

/// Closeness in the Wasserman-Faust form, which stays meaningful on
/// disconnected graphs: `((r-1)/(n-1)) * ((r-1)/sum_d)` where `r` counts the
/// nodes reachable from `v` (including `v`) and `sum_d` their distances.
pub fn closeness_centrality(g: &Graph) -> ScoreVector {
    let n = g.node_count();
    let scores = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![0u32; n], VecDeque::new()),
            |(dist, queue), v| {
                bfs_distances(g, v, dist, queue);
                let (reach, total) = dist
                    .iter()
                    .filter(|&&d| d != u32::MAX)
                    .fold((0usize, 0u64), |(r, s), &d| (r + 1, s + d as u64));
                if reach <= 1 || n <= 1 {
                    0.0
                } else {
                    let others = (reach - 1) as f64;
                    (others / (n - 1) as f64) * (others / total as f64)
                }
            },
        )
        .collect();
    ScoreVector {
        metric: Metric::Closeness,
        scores,
    }
}

struct BrandesScratch {
    stack: Vec<NodeId>,
    preds: Vec<Vec<NodeId>>,
    sigma: Vec<f64>,
    dist: Vec<i64>,
    delta: Vec<f64>,
    queue: VecDeque<NodeId>,
}

impl BrandesScratch {
    fn new(n: usize) -> Self {
        BrandesScratch {
            stack: Vec::with_capacity(n),
            preds: vec![Vec::new(); n],
            sigma: vec![0.0; n],
            dist: vec![-1; n],
            delta: vec![0.0; n],
            queue: VecDeque::with_capacity(n),
        }
    }

    /// Single-source dependency accumulation; leaves `delta` filled with the
    /// dependency of `source` on every node.
    fn accumulate(&mut self, g: &Graph, source: NodeId) {
        self.stack.clear();
        for p in &mut self.preds {
            p.clear();
        }
        self.sigma.fill(0.0);
        self.dist.fill(-1);
        self.delta.fill(0.0);

        self.sigma[source] = 1.0;
        self.dist[source] = 0;
        self.queue.push_back(source);
        while let Some(v) = self.queue.pop_front() {
            self.stack.push(v);
            let next = self.dist[v] + 1;
            for &w in g.neighbors(v) {
                if self.dist[w] < 0 {
                    self.dist[w] = next;
                    self.queue.push_back(w);
                }
                if self.dist[w] == next {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
        while let Some(w) = self.stack.pop() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &v in &self.preds[w] {
                self.delta[v] += self.sigma[v] * coeff;
            }
        }
        self.delta[source] = 0.0;
    }
}

const BETWEENNESS_BLOCK: usize = 64;

/// Shortest-path betweenness via dependency accumulation, unnormalized and
/// counting each unordered pair once.
///
/// Sources are processed in parallel blocks; the per-source dependency
/// vectors are summed in source order so the result is bit-identical for any
/// thread count.
pub fn betweenness_centrality(g: &Graph) -> ScoreVector {
    let n = g.node_count();
    let mut scores = vec![0.0; n];
    let sources: Vec<NodeId> = (0..n).collect();
    for block in sources.chunks(BETWEENNESS_BLOCK) {
        let partials: Vec<Vec<f64>> = block
            .par_iter()
            .map_init(
                || BrandesScratch::new(n),
                |scratch, &s| {
                    scratch.accumulate(g, s);
                    scratch.delta.clone()
                },
            )
            .collect();
        for delta in &partials {
            for (acc, d) in scores.iter_mut().zip(delta) {
                *acc += d;
            }
        }
    }
    for s in &mut scores {
        *s /= 2.0;
    }
    ScoreVector {
        metric: Metric::Betweenness,
        scores,
    }
}

/// Power iteration on `A + I` restricted to one connected component.
/// Returns the unit-norm iterate (indexed like `nodes`) and its Rayleigh
/// quotient for `A`.
fn component_power_iteration(
    g: &Graph,
    nodes: &[NodeId],
    local: &[usize],
    opts: EigenOptions,
) -> Result<(Vec<f64>, f64)> {
    let size = nodes.len();
    let mut x = vec![1.0 / (size as f64).sqrt(); size];
    let mut next = vec![0.0; size];
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iter {
        for (i, &v) in nodes.iter().enumerate() {
            let mut acc = x[i];
            for &w in g.neighbors(v) {
                acc += x[local[w]];
            }
            next[i] = acc;
        }
        let norm = next.iter().map(|a| a * a).sum::<f64>().sqrt();
        for a in &mut next {
            *a /= norm;
        }
        residual = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);
        if residual < opts.tol {
            let rayleigh = nodes
                .iter()
                .enumerate()
                .map(|(i, &v)| x[i] * g.neighbors(v).iter().map(|&w| x[local[w]]).sum::<f64>())
                .sum();
            return Ok((x, rayleigh));
        }
    }
    let mut last = vec![0.0; g.node_count()];
    for (i, &v) in nodes.iter().enumerate() {
        last[v] = x[i];
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual,
        last_iterate: last,
    })
}

/// Relative gap under which two component eigenvalues count as tied.
const EIGENVALUE_TIE: f64 = 1e-9;

/// Dominant adjacency eigenvector, unit Euclidean norm, nonnegative.
///
/// Each connected component with at least one edge is solved by power
/// iteration on `A + I` (the identity shift rules out the oscillation a
/// bipartite component would otherwise cause). The component with the
/// largest eigenvalue carries the whole vector; ties go to the component
/// holding the smallest node id. Every other node scores 0.
pub fn eigenvector_centrality(g: &Graph, opts: EigenOptions) -> Result<ScoreVector> {
    if g.edge_count() == 0 {
        return Err(param("eigenvector centrality needs at least one edge"));
    }
    let n = g.node_count();
    let mut local = vec![0usize; n];
    let mut best: Option<(Vec<NodeId>, Vec<f64>, f64)> = None;
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        for (i, &v) in comp.iter().enumerate() {
            local[v] = i;
        }
        let (vec, lambda) = component_power_iteration(g, &comp, &local, opts)?;
        let better = match &best {
            None => true,
            Some((_, _, cur)) => lambda > cur + EIGENVALUE_TIE * cur.abs().max(1.0),
        };
        if better {
            best = Some((comp, vec, lambda));
        }
    }
    let (nodes, vec, _) = best.expect("graph has an edge");
    let mut scores = vec![0.0; n];
    for (i, &v) in nodes.iter().enumerate() {
        scores[v] = vec[i].max(0.0);
    }
    Ok(ScoreVector {
        metric: Metric::Eigenvector,
        scores,
    })
}
