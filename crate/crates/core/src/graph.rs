//! Simple undirected graphs over dense node ids, plus the edge-list text format.
//!
//! A [`Graph`] never contains self-loops or parallel edges, and its adjacency
//! lists are kept sorted so that membership checks are a binary search and
//! every traversal visits neighbors in a fixed order.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub avg_degree: f64,
    pub component_count: usize,
}

/// Lines dropped while reading an edge list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

impl Graph {
    /// Graph with `n` nodes labelled `0..n` and no edges.
    pub fn empty(n: usize) -> Self {
        Self::with_labels((0..n).map(|i| i.to_string()).collect())
    }

    /// Graph with the given labels and no edges. Labels must be distinct.
    pub fn with_labels(labels: Vec<String>) -> Self {
        debug_assert_eq!(
            labels.iter().collect::<HashSet<_>>().len(),
            labels.len(),
            "node labels must be distinct"
        );
        let n = labels.len();
        Graph {
            labels,
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Build from an edge iterator on `0..n`, labelling nodes by their id.
    /// Self-loops and repeated edges are ignored.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::from_labeled_edges((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn from_labeled_edges<I>(labels: Vec<String>, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut g = Self::with_labels(labels);
        for (u, v) in edges {
            assert!(u < g.node_count() && v < g.node_count(), "edge endpoint out of range");
            if u != v {
                g.adjacency[u].push(v);
                g.adjacency[v].push(u);
            }
        }
        g.normalize();
        g
    }

    fn normalize(&mut self) {
        let mut total = 0;
        for adj in &mut self.adjacency {
            adj.sort_unstable();
            adj.dedup();
            total += adj.len();
        }
        self.edge_count = total / 2;
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        let (a, b) = if self.adjacency[u].len() <= self.adjacency[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn degree_sum(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Connected components as sorted node lists, ordered by their smallest node.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Subgraph induced by `nodes` (any order; duplicates are not allowed).
    /// New ids follow the ascending order of the old ids.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Graph {
        let mut keep: Vec<NodeId> = nodes.to_vec();
        keep.sort_unstable();
        let mut remap = vec![usize::MAX; self.node_count()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        let adjacency = keep
            .iter()
            .map(|&v| {
                self.adjacency[v]
                    .iter()
                    .filter_map(|&w| (remap[w] != usize::MAX).then_some(remap[w]))
                    .collect()
            })
            .collect();
        let mut g = Graph {
            labels,
            adjacency,
            edge_count: 0,
        };
        g.normalize();
        g
    }

    /// Same nodes and labels, different edge set.
    pub fn with_edges<I>(&self, edges: I) -> Graph
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Graph::from_labeled_edges(self.labels.clone(), edges)
    }

    /// Serialize as an edge list: one `label label` line per edge, sorted by
    /// (smaller id, larger id), each line newline-terminated.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{} {}", self.labels[u], self.labels[v]);
        }
        out
    }
}

/// Parse an edge-list document. Node ids are assigned in order of first
/// appearance; self-loops and repeated edges are dropped and counted.
pub fn from_edge_list(text: &str) -> Result<(Graph, ParseReport)> {
    let mut ids: HashMap<&str, NodeId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::new();
    let mut edges = Vec::new();
    let mut report = ParseReport::default();

    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected 2 node labels, found {}", tokens.len()),
            });
        }
        let mut ends = [0; 2];
        for (slot, label) in ends.iter_mut().zip(&tokens) {
            *slot = *ids.entry(label).or_insert_with(|| {
                labels.push(label.to_string());
                labels.len() - 1
            });
        }
        let [u, v] = ends;
        if u == v {
            report.self_loops += 1;
            continue;
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            report.duplicate_edges += 1;
            continue;
        }
        edges.push(key);
    }
    Ok((Graph::from_labeled_edges(labels, edges), report))
}

/// Induced subgraph on the largest connected component. Among components of
/// equal size the one holding the smallest node id wins.
pub fn largest_connected_component(g: &Graph) -> Graph {
    let comps = g.components();
    let mut best: Option<&Vec<NodeId>> = None;
    for comp in &comps {
        if best.is_none_or(|b| comp.len() > b.len()) {
            best = Some(comp);
        }
    }
    match best {
        Some(comp) => g.induced_subgraph(comp),
        None => g.clone(),
    }
}

pub fn basic_stats(g: &Graph) -> GraphStats {
    let n = g.node_count();
    let m = g.edge_count();
    GraphStats {
        n,
        m,
        avg_degree: if n == 0 { 0.0 } else { 2.0 * m as f64 / n as f64 },
        component_count: g.components().len(),
    }
}
