use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Prf1, ScoreRow};
use crate::error::{param, Error, Result};

/// Labeled probabilities per fine type, then per synonym.
type Groups<'a> = BTreeMap<&'a str, BTreeMap<&'a str, Vec<(f64, bool)>>>;

pub const MAX_SYNONYMS: usize = 3;
pub const GRID_MIN: f64 = 0.1;
pub const GRID_MAX: f64 = 0.6;

/// 0.10, 0.15, ..., 0.60
pub fn default_threshold_grid() -> Vec<f64> {
    (0..=10).map(|i| (10 + 5 * i) as f64 / 100.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationFilters {
    /// Synonyms whose false-positive rate exceeds this are discarded.
    pub max_fpr: f64,
    /// Synonyms whose recall falls below this are discarded.
    pub min_recall: f64,
}

impl Default for CalibrationFilters {
    fn default() -> Self {
        CalibrationFilters {
            max_fpr: 0.3,
            min_recall: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedSynonym {
    pub synonym: String,
    pub threshold: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub filters: CalibrationFilters,
    /// Selected synonyms per fine type, best first. An empty list means the
    /// type is never predicted.
    pub types: BTreeMap<String, Vec<SelectedSynonym>>,
}

impl ClassifierConfig {
    pub fn threshold(&self, fine_type: &str, synonym: &str) -> Option<f64> {
        self.types
            .get(fine_type)?
            .iter()
            .find(|s| s.synonym == synonym)
            .map(|s| s.threshold)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ClassifierConfig = toml::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        for (ty, syns) in &cfg.types {
            if syns.len() > MAX_SYNONYMS {
                return Err(Error::Format(format!(
                    "type '{ty}' lists {} synonyms (max {MAX_SYNONYMS})",
                    syns.len()
                )));
            }
            if let Some(s) = syns.iter().find(|s| !(GRID_MIN..=GRID_MAX).contains(&s.threshold)) {
                return Err(Error::Format(format!(
                    "type '{ty}' synonym '{}': threshold {} outside [{GRID_MIN}, {GRID_MAX}]",
                    s.synonym, s.threshold
                )));
            }
        }
        Ok(cfg)
    }
}

/// Best operating point found for one (fine type, synonym).
#[derive(Debug, Clone, PartialEq)]
pub struct SynonymScore {
    pub fine_type: String,
    pub synonym: String,
    pub threshold: f64,
    pub scores: Prf1,
    pub false_positive_rate: f64,
    pub kept: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub config: ClassifierConfig,
    pub synonyms: Vec<SynonymScore>,
    pub warnings: Vec<String>,
}

/// Confusion counts of the rule `prob > threshold` against gold labels.
fn confusion(rows: &[(f64, bool)], threshold: f64) -> (Prf1, usize) {
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for &(p, gold) in rows {
        match (p > threshold, gold) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    (Prf1::from_counts(tp, fp, fn_), tn)
}

fn best_threshold(rows: &[(f64, bool)], grid: &[f64]) -> (f64, Prf1, f64) {
    let mut best: Option<(f64, Prf1, usize)> = None;
    // grid is ascending, so `>=` leaves ties at the largest threshold
    for &t in grid {
        let (s, tn) = confusion(rows, t);
        if best.as_ref().is_none_or(|(_, b, _)| s.f1 >= b.f1) {
            best = Some((t, s, tn));
        }
    }
    let (t, s, tn) = best.expect("nonempty grid");
    let negatives = s.fp + tn;
    let fpr = if negatives == 0 {
        0.0
    } else {
        s.fp as f64 / negatives as f64
    };
    (t, s, fpr)
}

/// Choose per-synonym thresholds maximizing F1 of `prob > threshold`, then
/// keep for each fine type the (at most three) best synonyms that pass the
/// false-positive-rate and recall filters.
pub fn calibrate(
    rows: &[ScoreRow],
    grid: &[f64],
    filters: CalibrationFilters,
) -> Result<Calibration> {
    if grid.is_empty() {
        return Err(param("threshold grid is empty"));
    }
    if let Some(t) = grid.iter().find(|t| !(GRID_MIN..=GRID_MAX).contains(*t)) {
        return Err(param(format!("threshold {t} outside [{GRID_MIN}, {GRID_MAX}]")));
    }
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut groups: Groups = BTreeMap::new();
    for r in rows {
        let gold = r
            .gold
            .ok_or_else(|| param(format!("row for mention '{}' has no gold label", r.mention_id)))?;
        groups
            .entry(&r.fine_type)
            .or_default()
            .entry(&r.synonym)
            .or_default()
            .push((r.prob, gold));
    }

    let per_type: Vec<(String, Vec<SynonymScore>)> = groups
        .into_par_iter()
        .map(|(ty, syns)| {
            let mut scored: Vec<SynonymScore> = syns
                .into_iter()
                .map(|(syn, obs)| {
                    let (threshold, scores, fpr) = best_threshold(&obs, &grid);
                    SynonymScore {
                        fine_type: ty.to_string(),
                        synonym: syn.to_string(),
                        threshold,
                        scores,
                        false_positive_rate: fpr,
                        kept: false,
                    }
                })
                .collect();
            let mut ranked: Vec<usize> = (0..scored.len())
                .filter(|&i| {
                    scored[i].false_positive_rate <= filters.max_fpr
                        && scored[i].scores.recall >= filters.min_recall
                })
                .collect();
            ranked.sort_by(|&a, &b| {
                scored[b]
                    .scores
                    .f1
                    .total_cmp(&scored[a].scores.f1)
                    .then_with(|| scored[a].synonym.cmp(&scored[b].synonym))
            });
            ranked.truncate(MAX_SYNONYMS);
            for &i in &ranked {
                scored[i].kept = true;
            }
            // kept synonyms first, in rank order
            let mut ordered: Vec<SynonymScore> = ranked.iter().map(|&i| scored[i].clone()).collect();
            ordered.extend(scored.into_iter().filter(|s| !s.kept));
            (ty.to_string(), ordered)
        })
        .collect();

    let mut config = ClassifierConfig {
        filters,
        types: BTreeMap::new(),
    };
    let mut warnings = Vec::new();
    let mut synonyms = Vec::new();
    for (ty, scored) in per_type {
        let chosen: Vec<SelectedSynonym> = scored
            .iter()
            .filter(|s| s.kept)
            .map(|s| SelectedSynonym {
                synonym: s.synonym.clone(),
                threshold: s.threshold,
                f1: s.scores.f1,
            })
            .collect();
        if chosen.is_empty() {
            warnings.push(format!(
                "fine type '{ty}': no synonym passed the filters; it will never be predicted"
            ));
        }
        config.types.insert(ty, chosen);
        synonyms.extend(scored);
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(Calibration {
        config,
        synonyms,
        warnings,
    })
}
