//! Noisy reconstruction of a ground-truth graph at a given relation-extraction
//! precision and recall.
//!
//! A fixed `floor(recall * |E|)` of the true edges survive, chosen uniformly
//! without replacement. Every node pair that is *not* an edge of the ground
//! truth then independently becomes a false edge with probability
//!
//! ```text
//! q = (1 - precision) / precision * |E| * recall / C(n, 2)
//! ```
//!
//! so the expected number of false edges is roughly what an extractor with
//! that precision would add. Because `q` is spread over all pairs but only
//! applied to non-edges, realized precision sits slightly above nominal on
//! dense graphs.

use rand::seq::index::sample;
use rand::Rng as _;

use crate::error::{param, Result};
use crate::graph::Graph;
use crate::meta::Metadata;
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModel {
    pub precision: f64,
    pub recall: f64,
    pub seed: u64,
}

impl ErrorModel {
    pub fn new(precision: f64, recall: f64, seed: u64) -> Result<Self> {
        let m = ErrorModel {
            precision,
            recall,
            seed,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.precision > 0.0 && self.precision <= 1.0) {
            return Err(param(format!("precision must be in (0, 1], got {}", self.precision)));
        }
        if !(0.0..=1.0).contains(&self.recall) {
            return Err(param(format!("recall must be in [0, 1], got {}", self.recall)));
        }
        Ok(())
    }

    /// Number of true edges kept out of `true_edges`.
    pub fn kept_count(&self, true_edges: usize) -> usize {
        // Absorb representation error such as 0.57 * 100 = 56.999...
        let exact = self.recall * true_edges as f64;
        ((exact + 1e-9 * exact.max(1.0)).floor() as usize).min(true_edges)
    }

    /// False-edge probability before clamping.
    pub fn raw_false_edge_probability(&self, n: usize, true_edges: usize) -> f64 {
        let pairs = pair_count(n);
        if pairs == 0 {
            return 0.0;
        }
        (1.0 - self.precision) / self.precision * true_edges as f64 * self.recall / pairs as f64
    }
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[derive(Debug, Clone)]
pub struct Perturbed {
    pub graph: Graph,
    pub kept: usize,
    pub added: usize,
    pub false_edge_probability: f64,
    /// True when the formula gave a probability above 1 and it was clamped.
    pub clamped: bool,
}

impl Perturbed {
    pub fn realized_precision(&self) -> f64 {
        let total = self.kept + self.added;
        if total == 0 {
            0.0
        } else {
            self.kept as f64 / total as f64
        }
    }

    pub fn realized_recall(&self, true_edges: usize) -> f64 {
        if true_edges == 0 {
            0.0
        } else {
            self.kept as f64 / true_edges as f64
        }
    }

    pub fn metadata(&self, truth: &Graph, model: &ErrorModel) -> Metadata {
        let mut meta = Metadata::new();
        meta.push("precision", model.precision)
            .push("recall", model.recall)
            .push("seed", model.seed)
            .push("true_edges", truth.edge_count())
            .push("kept", self.kept)
            .push("added", self.added)
            .push("false_edge_probability", self.false_edge_probability)
            .push("realized_precision", self.realized_precision())
            .push("realized_recall", self.realized_recall(truth.edge_count()));
        if self.clamped {
            meta.push(
                "warning",
                "false-edge probability exceeded 1 and was clamped; operating point outside the model's valid region",
            );
        }
        meta
    }
}

pub fn perturb(g: &Graph, model: &ErrorModel) -> Result<Perturbed> {
    model.validate()?;
    let mut rng = rng_from_seed(model.seed);
    let n = g.node_count();
    let true_edges: Vec<_> = g.edges().collect();
    let kept = model.kept_count(true_edges.len());

    let mut edges: Vec<(usize, usize)> = sample(&mut rng, true_edges.len(), kept)
        .into_iter()
        .map(|i| true_edges[i])
        .collect();

    let raw_q = model.raw_false_edge_probability(n, true_edges.len());
    let clamped = raw_q > 1.0;
    let q = raw_q.clamp(0.0, 1.0);
    if clamped {
        log::warn!(
            "false-edge probability {raw_q} clamped to 1 (precision={}, recall={})",
            model.precision,
            model.recall
        );
    }

    let mut added = 0;
    if q > 0.0 {
        for u in 0..n {
            let adj = g.neighbors(u);
            let mut next_edge = adj.partition_point(|&w| w <= u);
            for v in u + 1..n {
                if next_edge < adj.len() && adj[next_edge] == v {
                    next_edge += 1;
                    continue;
                }
                if rng.random::<f64>() < q {
                    edges.push((u, v));
                    added += 1;
                }
            }
        }
    }

    Ok(Perturbed {
        graph: g.with_edges(edges),
        kept,
        added,
        false_edge_probability: q,
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GenSpec};

    fn ring(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    #[test]
    fn identity_at_full_precision_and_recall() {
        let g = ring(30);
        let out = perturb(&g, &ErrorModel::new(1.0, 1.0, 9).unwrap()).unwrap();
        assert_eq!(out.graph, g);
        assert_eq!((out.kept, out.added), (30, 0));
        assert_eq!(out.false_edge_probability, 0.0);
    }

    #[test]
    fn kept_count_uses_floor() {
        let m = |r| ErrorModel::new(1.0, r, 0).unwrap();
        assert_eq!(m(0.5).kept_count(864), 432);
        assert_eq!(m(0.6).kept_count(2979), 1787);
        assert_eq!(m(0.57).kept_count(100), 57);
        assert_eq!(m(0.0).kept_count(100), 0);
        assert_eq!(m(1.0).kept_count(7), 7);
    }

    #[test]
    fn false_edge_probability_arithmetic() {
        let m = ErrorModel::new(0.5, 1.0, 0).unwrap();
        let q = m.raw_false_edge_probability(50, 100);
        assert!((q - 100.0 / 1225.0).abs() < 1e-15);
        assert!(((1225.0 - 100.0) * q - 91.836_734_693_877_55).abs() < 1e-9);
    }

    #[test]
    fn kept_edges_are_true_edges_and_false_edges_are_not() {
        let g = ring(60);
        let out = perturb(&g, &ErrorModel::new(0.5, 0.5, 3).unwrap()).unwrap();
        let kept = out.graph.edges().filter(|&(u, v)| g.has_edge(u, v)).count();
        assert_eq!(kept, 30);
        assert_eq!(out.graph.edge_count(), out.kept + out.added);
        assert_eq!(out.graph.labels(), g.labels());
    }

    #[test]
    fn clamping_is_flagged() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let model = ErrorModel::new(0.1, 1.0, 1).unwrap();
        let out = perturb(&g, &model).unwrap();
        assert!(out.clamped);
        assert_eq!(out.false_edge_probability, 1.0);
        // every non-edge becomes an edge
        assert_eq!(out.graph.edge_count(), 6);
        assert!(out.metadata(&g, &model).get("warning").is_some());
    }

    #[test]
    fn rejects_invalid_models() {
        assert!(ErrorModel::new(0.0, 0.5, 0).is_err());
        assert!(ErrorModel::new(1.1, 0.5, 0).is_err());
        assert!(ErrorModel::new(0.5, -0.1, 0).is_err());
        assert!(ErrorModel::new(0.5, f64::NAN, 0).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let g = generate(&GenSpec::er(100, 6.0, 5)).unwrap().graph;
        let a = perturb(&g, &ErrorModel::new(0.7, 0.8, 11).unwrap()).unwrap();
        let b = perturb(&g, &ErrorModel::new(0.7, 0.8, 11).unwrap()).unwrap();
        let c = perturb(&g, &ErrorModel::new(0.7, 0.8, 12).unwrap()).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_ne!(a.graph, c.graph);
    }

    #[test]
    fn false_edge_count_matches_expectation() {
        // n=50, |E|=100, precision 0.5, recall 1: q = 100/1225.
        let g = generate(&GenSpec::er(50, 4.0, 1)).unwrap().graph;
        let m = g.edge_count();
        let base = ErrorModel::new(0.5, 1.0, 0).unwrap();
        let q = base.raw_false_edge_probability(50, m);
        let slots = (pair_count(50) - m) as f64;
        let trials = 200;
        let counts: Vec<f64> = (0..trials)
            .map(|t| {
                let model = ErrorModel { seed: t, ..base };
                perturb(&g, &model).unwrap().added as f64
            })
            .collect();
        let mean = counts.iter().sum::<f64>() / trials as f64;
        let se = (slots * q * (1.0 - q) / trials as f64).sqrt();
        assert!((mean - slots * q).abs() < 3.0 * se, "mean {mean} vs {}", slots * q);
    }
}
