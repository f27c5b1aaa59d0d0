//! Knowledge-graph assembly from extracted entities and relation triples, and
//! entity ranking by centrality.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::centrality::{compute, Metric};
use crate::error::Result;
use crate::graph::{Graph, NodeId};
use crate::ie::{EntityTuple, RelationTriple};
use crate::overlap::top_k;

#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeGraph {
    /// Simple undirected skeleton used for ranking.
    pub graph: Graph,
    /// Fine types per node id; empty for entities seen only in triples.
    pub node_types: Vec<BTreeSet<String>>,
    /// Keyed by `(u, v)` with `u < v`: every (relation, sentence id) that
    /// supports the edge.
    pub edge_relations: BTreeMap<(NodeId, NodeId), BTreeSet<(String, String)>>,
    pub dropped_self_loops: usize,
}

pub const ATTRS_CSV_HEADER: &str = "a,b,relation,sentence_id";
pub const NODES_CSV_HEADER: &str = "label,fine_types";
pub const RANK_CSV_HEADER: &str = "rank,label,score";

/// Graph label for an entity: whitespace runs become `_` so the label
/// survives the whitespace-separated edge-list format.
pub fn node_label(entity: &str) -> String {
    entity.split_whitespace().collect::<Vec<_>>().join("_")
}

#[derive(Default)]
struct NodeTable {
    ids: HashMap<String, NodeId>,
    labels: Vec<String>,
    types: Vec<BTreeSet<String>>,
}

impl NodeTable {
    fn intern(&mut self, entity: &str) -> NodeId {
        let label = node_label(entity);
        if let Some(&id) = self.ids.get(&label) {
            return id;
        }
        self.labels.push(label.clone());
        self.types.push(BTreeSet::new());
        self.ids.insert(label, self.labels.len() - 1);
        self.labels.len() - 1
    }
}

/// One node per distinct entity label (exact string match), one undirected
/// edge per entity pair with at least one triple. Entities appear in order of
/// first mention, entity tuples before triples.
pub fn build_graph(entities: &[EntityTuple], triples: &[RelationTriple]) -> KnowledgeGraph {
    let mut nodes = NodeTable::default();
    for e in entities {
        let id = nodes.intern(&e.mention_text);
        nodes.types[id].insert(e.fine_type.clone());
    }
    let mut edge_relations: BTreeMap<(NodeId, NodeId), BTreeSet<(String, String)>> = BTreeMap::new();
    let mut dropped_self_loops = 0;
    for t in triples {
        if t.a == t.b {
            dropped_self_loops += 1;
            continue;
        }
        let u = nodes.intern(&t.a);
        let v = nodes.intern(&t.b);
        edge_relations
            .entry((u.min(v), u.max(v)))
            .or_default()
            .insert((t.relation.clone(), t.sentence_id.clone()));
    }
    if dropped_self_loops > 0 {
        log::warn!("dropped {dropped_self_loops} triples relating an entity to itself");
    }
    let graph = Graph::from_labeled_edges(nodes.labels, edge_relations.keys().copied());
    KnowledgeGraph {
        graph,
        node_types: nodes.types,
        edge_relations,
        dropped_self_loops,
    }
}

impl KnowledgeGraph {
    /// Sidecar CSV of edge provenance: one row per (edge, relation, sentence).
    pub fn attributes_csv(&self) -> String {
        let mut out = format!("{ATTRS_CSV_HEADER}\n");
        for (&(u, v), rels) in &self.edge_relations {
            for (rel, sent) in rels {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    csv_field(self.graph.label(u)),
                    csv_field(self.graph.label(v)),
                    csv_field(rel),
                    csv_field(sent)
                );
            }
        }
        out
    }

    /// Node table including isolated entities, which the edge list cannot
    /// carry. Fine types are `;`-joined.
    pub fn nodes_csv(&self) -> String {
        let mut out = format!("{NODES_CSV_HEADER}\n");
        for (v, types) in self.node_types.iter().enumerate() {
            let joined: Vec<&str> = types.iter().map(String::as_str).collect();
            let _ = writeln!(
                out,
                "{},{}",
                csv_field(self.graph.label(v)),
                csv_field(&joined.join(";"))
            );
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The `k` most central entities as (label, score), in top-k order.
pub fn rank_entities(g: &Graph, metric: Metric, k: usize) -> Result<Vec<(String, f64)>> {
    if g.node_count() == 0 {
        return Ok(Vec::new());
    }
    let scores = compute(g, metric)?;
    let top = top_k(&scores, k)?;
    Ok(top
        .members
        .iter()
        .map(|&v| (g.label(v).to_string(), scores.scores[v]))
        .collect())
}

pub fn ranking_csv(ranked: &[(String, f64)]) -> String {
    let mut out = format!("{RANK_CSV_HEADER}\n");
    for (i, (label, score)) in ranked.iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", i + 1, csv_field(label), score);
    }
    out
}
