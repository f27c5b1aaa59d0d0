use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub sentence_id: String,
    pub token_count: usize,
    pub entity_token_count: usize,
    pub has_target_entity: bool,
}

impl CorpusRecord {
    /// One JSON object per line; blank lines are skipped.
    pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Vec<CorpusRecord>> {
        let mut out = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            out.push(rec);
        }
        Ok(out)
    }

    pub fn write_jsonl<W: Write>(mut writer: W, records: &[CorpusRecord]) -> Result<()> {
        for r in records {
            let line = serde_json::to_string(r).map_err(|e| Error::Format(e.to_string()))?;
            writeln!(writer, "{line}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subsample {
    /// Selected records in their original corpus order.
    pub records: Vec<CorpusRecord>,
    pub fillers: usize,
    pub entity_tokens: usize,
    pub total_tokens: usize,
    pub warning: Option<String>,
}

impl Subsample {
    pub fn ratio(&self) -> f64 {
        ratio(self.entity_tokens, self.total_tokens)
    }
}

fn ratio(entity: usize, total: usize) -> f64 {
    if total == 0 {
        f64::INFINITY
    } else {
        entity as f64 / total as f64
    }
}

/// Keep every sentence with the target entity, then add randomly ordered
/// filler sentences one by one for as long as the entity-token ratio stays at
/// or above `target_ratio`; the first filler that would push it below stops
/// the sampling.
pub fn subsample_corpus(corpus: &[CorpusRecord], target_ratio: f64, seed: u64) -> Result<Subsample> {
    if !(target_ratio > 0.0 && target_ratio <= 1.0) {
        return Err(param(format!("target ratio must be in (0, 1], got {target_ratio}")));
    }
    let mut keep = vec![false; corpus.len()];
    let (mut entity, mut total) = (0usize, 0usize);
    let mut fillers = Vec::new();
    for (i, r) in corpus.iter().enumerate() {
        if r.has_target_entity {
            keep[i] = true;
            entity += r.entity_token_count;
            total += r.token_count;
        } else {
            fillers.push(i);
        }
    }

    let mut warning = None;
    if ratio(entity, total) < target_ratio {
        warning = Some(format!(
            "entity-token ratio {:.4} is already below the target {target_ratio}; no filler sentences added",
            ratio(entity, total)
        ));
        log::warn!("{}", warning.as_ref().unwrap());
    }

    let mut added = 0;
    if warning.is_none() {
        let mut rng = rng_from_seed(seed);
        fillers.shuffle(&mut rng);
        for i in fillers {
            let r = &corpus[i];
            let (e, t) = (entity + r.entity_token_count, total + r.token_count);
            if ratio(e, t) < target_ratio {
                break;
            }
            keep[i] = true;
            entity = e;
            total = t;
            added += 1;
        }
    }

    Ok(Subsample {
        records: corpus
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(r, _)| r.clone())
            .collect(),
        fillers: added,
        entity_tokens: entity,
        total_tokens: total,
        warning,
    })
}
