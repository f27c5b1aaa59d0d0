use serde::{Deserialize, Serialize};

/// A scored relation candidate `a --relation--> b` from one sentence. The same
/// shape is used for entailment-score input rows and for extracted triples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationTriple {
    pub a: String,
    pub b: String,
    pub relation: String,
    pub sentence_id: String,
    pub prob: f64,
}

pub const DEFAULT_RELATION_THRESHOLD: f64 = 0.8;

/// Keep every row with `prob >= threshold`. All qualifying relation types for
/// a pair are kept, not just the most probable one.
pub fn extract_relations(rows: &[RelationTriple], threshold: f64) -> Vec<RelationTriple> {
    rows.iter().filter(|r| r.prob >= threshold).cloned().collect()
}
