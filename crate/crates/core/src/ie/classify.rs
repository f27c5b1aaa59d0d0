use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{ClassifierConfig, ScoreRow};

/// An extracted entity: mention `mention_id` is of type `fine_type`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityTuple {
    pub mention_id: String,
    pub sentence_id: String,
    pub mention_text: String,
    pub fine_type: String,
    pub synonym: String,
    pub prob: f64,
}

pub const ENTITY_CSV_HEADER: &str = "mention_id,sentence_id,mention_text,fine_type,synonym,prob";

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    /// One tuple per mention that cleared some threshold, in order of the
    /// mention's first row.
    pub entities: Vec<EntityTuple>,
    /// Rows whose (fine type, synonym) is not part of the configuration.
    pub ignored_rows: usize,
}

/// Label each mention with the fine type of its highest-probability row among
/// those exceeding their synonym's threshold (strictly). Equal probabilities
/// go to the lexicographically smallest (fine type, synonym).
pub fn classify(rows: &[ScoreRow], cfg: &ClassifierConfig) -> Classification {
    let mut order: Vec<&str> = Vec::new();
    let mut seen: HashSet<&str> = HashSet::new();
    let mut best: HashMap<&str, &ScoreRow> = HashMap::new();
    let mut ignored_rows = 0;
    for r in rows {
        if seen.insert(&r.mention_id) {
            order.push(&r.mention_id);
        }
        let Some(threshold) = cfg.threshold(&r.fine_type, &r.synonym) else {
            ignored_rows += 1;
            continue;
        };
        if !(r.prob > threshold) {
            continue;
        }
        let better = match best.get(r.mention_id.as_str()) {
            None => true,
            Some(cur) => {
                r.prob > cur.prob
                    || (r.prob == cur.prob
                        && (&r.fine_type, &r.synonym) < (&cur.fine_type, &cur.synonym))
            }
        };
        if better {
            best.insert(&r.mention_id, r);
        }
    }
    let entities = order
        .into_iter()
        .filter_map(|m| best.get(m))
        .map(|r| EntityTuple {
            mention_id: r.mention_id.clone(),
            sentence_id: r.sentence_id.clone(),
            mention_text: r.mention_text.clone(),
            fine_type: r.fine_type.clone(),
            synonym: r.synonym.clone(),
            prob: r.prob,
        })
        .collect();
    Classification {
        entities,
        ignored_rows,
    }
}
