//! LFR-style community benchmark.
//!
//! Degrees follow a truncated power law (exponent `tau1`) whose lower cutoff
//! is solved so the mean hits the target degree; community sizes follow a
//! power law with exponent `tau2`. Each node sends a fraction `mu` of its
//! stubs outside its community. Internal stubs are matched within each
//! community and external stubs across communities; pairs that would form a
//! self-loop, a repeated edge or (for external stubs) an intra-community edge
//! are repaired by swapping endpoints with random existing edges, for at most
//! `max_sweeps` passes. Stubs still unmatched after that are dropped and
//! reported in the metadata.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::GenSpec;
use crate::error::{param, Error, Result};
use crate::graph::Graph;
use crate::meta::Metadata;
use crate::rng::{rng_from_seed, Rng};

#[derive(Debug, Clone, PartialEq)]
pub struct LfrParams {
    pub tau1: f64,
    pub tau2: f64,
    pub mu: f64,
    pub max_degree: usize,
    pub min_community: usize,
    pub max_community: usize,
    pub max_sweeps: usize,
}

impl Default for LfrParams {
    fn default() -> Self {
        LfrParams {
            tau1: 2.5,
            tau2: 1.5,
            mu: 0.1,
            max_degree: 50,
            min_community: 20,
            max_community: 100,
            max_sweeps: 200,
        }
    }
}

const MAX_ATTEMPTS: usize = 100;

impl LfrParams {
    pub fn validate(&self, n: usize, avg: f64) -> Result<()> {
        if !(self.tau1 > 1.0) || !(self.tau2 > 1.0) {
            return Err(param("LFR exponents must exceed 1"));
        }
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return Err(param(format!("LFR mixing must be in (0, 1), got {}", self.mu)));
        }
        if self.max_degree < 1 || self.max_degree >= n {
            return Err(param(format!(
                "LFR max degree must be in [1, n-1], got {}",
                self.max_degree
            )));
        }
        if !(avg < self.max_degree as f64) {
            return Err(param(format!(
                "target average degree {avg} must be below the max degree {}",
                self.max_degree
            )));
        }
        if self.min_community < 2
            || self.min_community > self.max_community
            || self.min_community > n
        {
            return Err(param(format!(
                "LFR community sizes [{}, {}] infeasible for n={n}",
                self.min_community, self.max_community
            )));
        }
        Ok(())
    }
}

/// Inverse-CDF draw from a continuous power law `x^-tau` on `[lo, hi]`.
fn power_law_draw(rng: &mut Rng, tau: f64, lo: f64, hi: f64) -> f64 {
    let e = 1.0 - tau;
    let (a, b) = (lo.powf(e), hi.powf(e));
    let u: f64 = rng.random();
    (a + u * (b - a)).powf(1.0 / e)
}

fn power_law_mean(tau: f64, lo: f64, hi: f64) -> f64 {
    let (e1, e2) = (1.0 - tau, 2.0 - tau);
    let num = if e2.abs() < 1e-12 {
        (hi / lo).ln()
    } else {
        (hi.powf(e2) - lo.powf(e2)) / e2
    };
    let den = (hi.powf(e1) - lo.powf(e1)) / e1;
    num / den
}

/// Lower cutoff in `[1, hi]` giving the requested mean, by bisection.
fn solve_min_degree(tau: f64, target: f64, hi: f64) -> Result<f64> {
    let (mut lo_x, mut hi_x) = (1.0f64, hi);
    if power_law_mean(tau, lo_x, hi) > target {
        return Err(Error::Generation(format!(
            "average degree {target} unreachable: the smallest attainable mean is {:.3}",
            power_law_mean(tau, lo_x, hi)
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo_x + hi_x);
        if power_law_mean(tau, mid, hi) < target {
            lo_x = mid;
        } else {
            hi_x = mid;
        }
    }
    Ok(0.5 * (lo_x + hi_x))
}

fn degree_sequence(rng: &mut Rng, n: usize, p: &LfrParams, avg: f64) -> Result<Vec<usize>> {
    let hi = p.max_degree as f64;
    let lo = solve_min_degree(p.tau1, avg, hi)?;
    let mut deg: Vec<usize> = (0..n)
        .map(|_| {
            (power_law_draw(rng, p.tau1, lo, hi).round() as usize).clamp(1, p.max_degree)
        })
        .collect();
    if deg.iter().sum::<usize>() % 2 == 1 {
        let v = rng.random_range(0..n);
        if deg[v] < p.max_degree {
            deg[v] += 1;
        } else {
            deg[v] -= 1;
        }
    }
    Ok(deg)
}

fn community_sizes(rng: &mut Rng, n: usize, p: &LfrParams) -> Option<Vec<usize>> {
    let (lo, hi) = (p.min_community as f64, p.max_community as f64);
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < n {
        let s = (power_law_draw(rng, p.tau2, lo, hi).round() as usize)
            .clamp(p.min_community, p.max_community);
        sizes.push(s);
        total += s;
    }
    let mut excess = total - n;
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
    for &c in &order {
        if excess == 0 {
            break;
        }
        let cut = excess.min(sizes[c] - p.min_community);
        sizes[c] -= cut;
        excess -= cut;
    }
    (excess == 0).then_some(sizes)
}

/// Places nodes (largest internal degree first) into communities big enough
/// to hold all their internal links, weighting by remaining capacity.
fn assign_communities(rng: &mut Rng, sizes: &[usize], internal: &[usize]) -> Option<Vec<usize>> {
    let n = internal.len();
    let mut remaining = sizes.to_vec();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| internal[b].cmp(&internal[a]).then(a.cmp(&b)));
    let mut membership = vec![0; n];
    for v in order {
        let eligible = |c: usize| remaining[c] > 0 && sizes[c] > internal[v];
        let capacity: usize = (0..sizes.len()).filter(|&c| eligible(c)).map(|c| remaining[c]).sum();
        if capacity == 0 {
            return None;
        }
        let mut pick = rng.random_range(0..capacity);
        let chosen = (0..sizes.len())
            .filter(|&c| eligible(c))
            .find(|&c| {
                if pick < remaining[c] {
                    true
                } else {
                    pick -= remaining[c];
                    false
                }
            })
            .expect("pick within capacity");
        remaining[chosen] -= 1;
        membership[v] = chosen;
    }
    Some(membership)
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Default)]
struct EdgePool {
    edges: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl EdgePool {
    fn contains(&self, u: usize, v: usize) -> bool {
        self.index.contains_key(&key(u, v))
    }

    fn insert(&mut self, u: usize, v: usize) {
        let k = key(u, v);
        self.index.insert(k, self.edges.len());
        self.edges.push(k);
    }

    fn remove_at(&mut self, i: usize) -> (usize, usize) {
        let e = self.edges.swap_remove(i);
        self.index.remove(&e);
        if i < self.edges.len() {
            self.index.insert(self.edges[i], i);
        }
        e
    }
}

/// Random stub matching with swap-based repair. Returns the matched edges and
/// the number of stubs that could not be placed.
fn wire<F>(rng: &mut Rng, mut stubs: Vec<usize>, allowed: F, max_sweeps: usize) -> (EdgePool, usize)
where
    F: Fn(usize, usize) -> bool,
{
    stubs.shuffle(rng);
    let mut pool = EdgePool::default();
    let mut bad = Vec::new();
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        if allowed(u, v) && !pool.contains(u, v) {
            pool.insert(u, v);
        } else {
            bad.push((u, v));
        }
    }
    for _ in 0..max_sweeps {
        if bad.is_empty() || pool.edges.is_empty() {
            break;
        }
        let mut still_bad = Vec::new();
        for (a, b) in bad {
            let i = rng.random_range(0..pool.edges.len());
            let (mut c, mut d) = pool.edges[i];
            if rng.random::<bool>() {
                std::mem::swap(&mut c, &mut d);
            }
            let ok = allowed(a, c)
                && allowed(b, d)
                && key(a, c) != key(b, d)
                && !pool.contains(a, c)
                && !pool.contains(b, d);
            if ok {
                pool.remove_at(i);
                pool.insert(a, c);
                pool.insert(b, d);
            } else {
                still_bad.push((a, b));
            }
        }
        bad = still_bad;
    }
    (pool, 2 * bad.len())
}

/// Mean over non-isolated nodes of the fraction of their neighbors outside
/// their own community.
pub fn mixing_fraction(g: &Graph, communities: &[usize]) -> f64 {
    let mut total = 0.0;
    let mut counted = 0usize;
    for v in 0..g.node_count() {
        let d = g.degree(v);
        if d == 0 {
            continue;
        }
        let outside = g
            .neighbors(v)
            .iter()
            .filter(|&&w| communities[w] != communities[v])
            .count();
        total += outside as f64 / d as f64;
        counted += 1;
    }
    if counted == 0 {
        0.0
    } else {
        total / counted as f64
    }
}

pub struct LfrOutput {
    pub graph: Graph,
    pub communities: Vec<usize>,
    pub meta: Metadata,
}

pub fn gen_lfr(spec: &GenSpec) -> Result<LfrOutput> {
    let p = match &spec.topology {
        super::Topology::Lfr(p) => p,
        other => return Err(param(format!("gen_lfr called with {:?}", other.kind()))),
    };
    let n = spec.n;
    p.validate(n, spec.target_avg_degree)?;
    let mut rng = rng_from_seed(spec.seed);

    let degrees = degree_sequence(&mut rng, n, p, spec.target_avg_degree)?;
    let mut external: Vec<usize> = degrees
        .iter()
        .map(|&k| {
            let x = p.mu * k as f64;
            let base = x.floor();
            base as usize + usize::from(rng.random::<f64>() < x - base)
        })
        .collect();
    let mut internal: Vec<usize> = degrees.iter().zip(&external).map(|(k, e)| k - e).collect();

    let mut placed = None;
    for _ in 0..MAX_ATTEMPTS {
        let Some(sizes) = community_sizes(&mut rng, n, p) else {
            continue;
        };
        if let Some(m) = assign_communities(&mut rng, &sizes, &internal) {
            placed = Some((sizes, m));
            break;
        }
    }
    let Some((sizes, membership)) = placed else {
        return Err(Error::Generation(format!(
            "could not place {n} nodes into communities of size [{}, {}] after {MAX_ATTEMPTS} attempts",
            p.min_community, p.max_community
        )));
    };

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    for (v, &c) in membership.iter().enumerate() {
        members[c].push(v);
    }
    // each community needs an even number of internal stubs
    for nodes in &members {
        let sum: usize = nodes.iter().map(|&v| internal[v]).sum();
        if sum % 2 == 1 {
            let candidates: Vec<usize> = nodes.iter().copied().filter(|&v| internal[v] > 0).collect();
            let v = candidates[rng.random_range(0..candidates.len())];
            internal[v] -= 1;
            external[v] += 1;
        }
    }

    let mut edges = Vec::new();
    let mut dropped = 0;
    for nodes in &members {
        let stubs: Vec<usize> = nodes
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, internal[v]))
            .collect();
        let (pool, lost) = wire(&mut rng, stubs, |u, v| u != v, p.max_sweeps);
        edges.extend(pool.edges);
        dropped += lost;
    }
    let stubs: Vec<usize> = (0..n)
        .flat_map(|v| std::iter::repeat_n(v, external[v]))
        .collect();
    let (pool, lost) = wire(
        &mut rng,
        stubs,
        |u, v| u != v && membership[u] != membership[v],
        p.max_sweeps,
    );
    edges.extend(pool.edges);
    dropped += lost;

    let graph = Graph::from_edges(n, edges);
    let mut meta = Metadata::new();
    meta.push("communities", sizes.len())
        .push("realized_mu", mixing_fraction(&graph, &membership))
        .push("dropped_stubs", dropped);
    if dropped > 0 {
        log::debug!("LFR dropped {dropped} unmatched stubs");
    }
    Ok(LfrOutput {
        graph,
        communities: membership,
        meta,
    })
}
