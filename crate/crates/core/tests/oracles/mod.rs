//! Brute-force reference implementations shared by the test suites.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeMap;

use kgdrift::ie::{CalibrationFilters, ScoreRow};
use kgdrift::Graph;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INF: usize = usize::MAX / 4;

pub fn random_graphs(count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=8usize);
            let p: f64 = rng.random_range(0.1..0.9);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random::<f64>() < p {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges)
        })
        .collect()
}

pub fn floyd_warshall(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut d = vec![vec![INF; n]; n];
    for (u, row) in d.iter_mut().enumerate() {
        row[u] = 0;
    }
    for (u, v) in g.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

pub fn closeness_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let d = floyd_warshall(g);
    (0..n)
        .map(|v| {
            let reach: Vec<usize> = (0..n).filter(|&u| u != v && d[v][u] < INF).collect();
            if reach.is_empty() {
                return 0.0;
            }
            let r = reach.len() as f64;
            let sum: usize = reach.iter().map(|&u| d[v][u]).sum();
            (r / (n - 1) as f64) * (r / sum as f64)
        })
        .collect()
}

/// Every simple path from `s` to `t`, by exhaustive depth-first search.
pub fn all_simple_paths(g: &Graph, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn walk(g: &Graph, t: usize, path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        for &w in g.neighbors(v) {
            if !on[w] {
                on[w] = true;
                path.push(w);
                walk(g, t, path, on, out);
                path.pop();
                on[w] = false;
            }
        }
    }
    let mut on = vec![false; g.node_count()];
    on[s] = true;
    let mut out = Vec::new();
    walk(g, t, &mut vec![s], &mut on, &mut out);
    out
}

pub fn betweenness_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let paths = all_simple_paths(g, s, t);
            let Some(shortest) = paths.iter().map(Vec::len).min() else {
                continue;
            };
            let geodesics: Vec<&Vec<usize>> = paths.iter().filter(|p| p.len() == shortest).collect();
            for p in &geodesics {
                for &v in &p[1..p.len() - 1] {
                    b[v] += 1.0 / geodesics.len() as f64;
                }
            }
        }
    }
    b
}

pub fn adjacency(g: &Graph, nodes: &[usize]) -> DMatrix<f64> {
    let k = nodes.len();
    DMatrix::from_fn(k, k, |i, j| if g.has_edge(nodes[i], nodes[j]) { 1.0 } else { 0.0 })
}

/// Top eigenpair of a symmetric matrix, with the eigenvector made
/// nonnegative and unit norm, plus the gap to the second eigenvalue.
pub fn top_eigen(a: DMatrix<f64>) -> (f64, Vec<f64>, f64) {
    let eig = SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let top = order[0];
    let gap = order
        .get(1)
        .map_or(f64::INFINITY, |&i| eig.eigenvalues[top] - eig.eigenvalues[i]);
    let col = eig.eigenvectors.column(top);
    let sign = if col.sum() < 0.0 { -1.0 } else { 1.0 };
    let norm = col.norm();
    let v = col.iter().map(|x| sign * x / norm).collect();
    (eig.eigenvalues[top], v, gap)
}

pub fn eigenvector_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let all: Vec<usize> = (0..n).collect();
    let (_, v, gap) = top_eigen(adjacency(g, &all));
    if gap > 1e-6 {
        return v;
    }
    // Degenerate top eigenvalue: solve each component densely and keep the
    // one with the largest eigenvalue, smallest node id on ties.
    let mut best: Option<(f64, Vec<usize>, Vec<f64>)> = None;
    for comp in g.components().into_iter().filter(|c| c.len() > 1) {
        let (lambda, v, _) = top_eigen(adjacency(g, &comp));
        if best.as_ref().is_none_or(|(l, _, _)| lambda > l + 1e-9 * l.max(1.0)) {
            best = Some((lambda, comp, v));
        }
    }
    let (_, comp, v) = best.unwrap();
    let mut out = vec![0.0; n];
    for (i, &u) in comp.iter().enumerate() {
        out[u] = v[i];
    }
    out
}

pub fn degree_oracle(g: &Graph) -> Vec<f64> {
    (0..g.node_count())
        .map(|u| (0..g.node_count()).filter(|&v| g.has_edge(u, v)).count() as f64)
        .collect()
}

const TYPES: [&str; 3] = ["politician", "scholar", "athlete"];
const SYNONYMS: [&str; 5] = ["a", "b", "c", "d", "e"];

pub fn random_table(rng: &mut ChaCha8Rng, labeled: bool) -> Vec<ScoreRow> {
    let mentions = rng.random_range(3..30);
    let mut rows = Vec::new();
    for ty in TYPES {
        let syns = rng.random_range(1..=SYNONYMS.len());
        for syn in &SYNONYMS[..syns] {
            for m in 0..mentions {
                let gold = rng.random::<f64>() < 0.4;
                // positives skew high so that some synonyms survive the filters
                let prob: f64 = if gold {
                    rng.random_range(0.2..1.0)
                } else {
                    rng.random_range(0.0..0.7)
                };
                rows.push(ScoreRow {
                    mention_id: format!("m{m}"),
                    sentence_id: format!("s{m}"),
                    mention_text: format!("Mention {m}"),
                    coarse_type: "PERSON".into(),
                    fine_type: ty.into(),
                    synonym: (*syn).into(),
                    // two decimals so grid points are hit exactly now and then
                    prob: (prob * 100.0).round() / 100.0,
                    gold: labeled.then_some(gold),
                });
            }
        }
    }
    rows
}

/// (tp, fp, fn, tn) of `prob > t`.
pub fn counts(obs: &[(f64, bool)], t: f64) -> (u64, u64, u64, u64) {
    let mut c = (0, 0, 0, 0);
    for &(p, g) in obs {
        match (p > t, g) {
            (true, true) => c.0 += 1,
            (true, false) => c.1 += 1,
            (false, true) => c.2 += 1,
            (false, false) => c.3 += 1,
        }
    }
    c
}

/// Compares 2tp/(2tp+fp+fn) exactly by cross-multiplication; 0/0 counts as 0.
pub fn cmp_f1(a: (u64, u64, u64, u64), b: (u64, u64, u64, u64)) -> Ordering {
    let (na, da) = (2 * a.0, 2 * a.0 + a.1 + a.2);
    let (nb, db) = (2 * b.0, 2 * b.0 + b.1 + b.2);
    let (na, da) = if da == 0 { (0, 1) } else { (na, da) };
    let (nb, db) = if db == 0 { (0, 1) } else { (nb, db) };
    (na * db).cmp(&(nb * da))
}

pub struct Oracle {
    pub threshold: f64,
    pub counts: (u64, u64, u64, u64),
}

pub fn oracle_choice(obs: &[(f64, bool)], grid: &[f64]) -> Oracle {
    let mut best: Option<Oracle> = None;
    for &t in grid {
        let c = counts(obs, t);
        let better = match &best {
            None => true,
            Some(b) => match cmp_f1(c, b.counts) {
                Ordering::Greater => true,
                Ordering::Equal => t > b.threshold,
                Ordering::Less => false,
            },
        };
        if better {
            best = Some(Oracle { threshold: t, counts: c });
        }
    }
    best.unwrap()
}

/// Per fine type, the synonyms a correct calibration keeps, best first.
pub fn oracle_selection(
    rows: &[ScoreRow],
    grid: &[f64],
    filters: CalibrationFilters,
) -> BTreeMap<String, Vec<(String, Oracle)>> {
    let mut groups: BTreeMap<(&str, &str), Vec<(f64, bool)>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((&r.fine_type, &r.synonym))
            .or_default()
            .push((r.prob, r.gold.unwrap()));
    }
    let mut out: BTreeMap<String, Vec<(String, Oracle)>> = BTreeMap::new();
    for ((ty, syn), obs) in groups {
        let best = oracle_choice(&obs, grid);
        let (tp, fp, fn_, tn) = best.counts;
        let fpr = if fp + tn == 0 { 0.0 } else { fp as f64 / (fp + tn) as f64 };
        let recall = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
        let entry = out.entry(ty.to_string()).or_default();
        if fpr <= filters.max_fpr && recall >= filters.min_recall {
            entry.push((syn.to_string(), best));
        }
    }
    for cands in out.values_mut() {
        cands.sort_by(|a, b| cmp_f1(b.1.counts, a.1.counts).then(a.0.cmp(&b.0)));
        cands.truncate(3);
    }
    out
}
