//! Information-extraction post-processing over precomputed entailment
//! probabilities.
//!
//! An upstream entailment model scores hypotheses of the form
//! "<mention> is a <synonym>" for every candidate fine-grained type; this
//! module never runs a model, it only consumes those probabilities:
//!
//! * [`calibrate`] picks a probability threshold per synonym and at most three
//!   synonyms per fine type from a small labeled table;
//! * [`classify`] applies such a configuration to unlabeled rows;
//! * [`evaluate`] scores predictions against gold tuples;
//! * [`extract_relations`] applies the fixed-threshold relation rule;
//! * [`subsample_corpus`] rebalances a corpus to a target entity-token ratio.

mod calibrate;
mod classify;
mod evaluate;
mod relations;
mod subsample;

pub use calibrate::{
    calibrate, default_threshold_grid, Calibration, CalibrationFilters, ClassifierConfig,
    SelectedSynonym, SynonymScore,
};
pub use classify::{classify, Classification, EntityTuple, ENTITY_CSV_HEADER};
pub use evaluate::{
    evaluate, gold_from_scores, EvalReport, GoldTuple, Prf1, EVAL_CSV_HEADER, GOLD_CSV_HEADER,
};
pub use relations::{extract_relations, RelationTriple, DEFAULT_RELATION_THRESHOLD};
pub use subsample::{subsample_corpus, CorpusRecord, Subsample};

use std::collections::HashSet;
use std::io::{Read, Write};

use serde::{de::DeserializeOwned, Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

/// One entailment probability: how strongly `mention_text` (a coarse entity)
/// reads as `synonym`, a keyword standing in for `fine_type`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub mention_id: String,
    pub sentence_id: String,
    pub mention_text: String,
    pub coarse_type: String,
    pub fine_type: String,
    pub synonym: String,
    pub prob: f64,
    #[serde(deserialize_with = "de_opt_bool", serialize_with = "ser_opt_bool")]
    pub gold: Option<bool>,
}

pub const SCORE_CSV_HEADER: &str =
    "mention_id,sentence_id,mention_text,coarse_type,fine_type,synonym,prob,gold";
pub const RELATION_CSV_HEADER: &str = "a,b,relation,sentence_id,prob";

fn de_opt_bool<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<bool>, D::Error> {
    let s = String::deserialize(d)?;
    match s.trim().to_ascii_lowercase().as_str() {
        "" => Ok(None),
        "true" | "1" | "yes" => Ok(Some(true)),
        "false" | "0" | "no" => Ok(Some(false)),
        other => Err(serde::de::Error::custom(format!("invalid gold label '{other}'"))),
    }
}

fn ser_opt_bool<S: serde::Serializer>(v: &Option<bool>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(true) => s.serialize_str("true"),
        Some(false) => s.serialize_str("false"),
        None => s.serialize_str(""),
    }
}

pub(crate) fn check_prob(p: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Format(format!("{what}: probability {p} outside [0, 1]")))
    }
}

/// Read a CSV whose header must equal `header` exactly.
pub fn read_csv<T: DeserializeOwned, R: Read>(reader: R, header: &str) -> Result<Vec<T>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let found: Vec<&str> = rdr.headers()?.iter().collect();
    let expected: Vec<&str> = header.split(',').collect();
    if found != expected {
        return Err(Error::Format(format!(
            "expected CSV header '{header}', found '{}'",
            found.join(",")
        )));
    }
    rdr.deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

pub fn write_csv<T: Serialize, W: Write>(writer: W, rows: &[T], header: &str) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    wtr.write_record(header.split(','))?;
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_scores<R: Read>(reader: R) -> Result<Vec<ScoreRow>> {
    let rows: Vec<ScoreRow> = read_csv(reader, SCORE_CSV_HEADER)?;
    let mut seen = HashSet::new();
    for r in &rows {
        check_prob(r.prob, &r.mention_id)?;
        if !seen.insert((&r.mention_id, &r.fine_type, &r.synonym)) {
            return Err(Error::Format(format!(
                "duplicate row for mention '{}', type '{}', synonym '{}'",
                r.mention_id, r.fine_type, r.synonym
            )));
        }
    }
    Ok(rows)
}

pub fn read_relations<R: Read>(reader: R) -> Result<Vec<RelationTriple>> {
    let rows: Vec<RelationTriple> = read_csv(reader, RELATION_CSV_HEADER)?;
    for r in &rows {
        check_prob(r.prob, &format!("{} {} {}", r.a, r.relation, r.b))?;
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_csv_round_trip_with_blank_gold() {
        let text = format!(
            "{SCORE_CSV_HEADER}\nm1,s1,Joachim Sauer,PERSON,scholar,academic,0.91,true\nm2,s1,Angela Merkel,PERSON,scholar,academic,0.2,\n"
        );
        let rows = read_scores(text.as_bytes()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].gold, Some(true));
        assert_eq!(rows[1].gold, None);
        let mut out = Vec::new();
        write_csv(&mut out, &rows, SCORE_CSV_HEADER).unwrap();
        let back = read_scores(out.as_slice()).unwrap();
        assert_eq!(back, rows);
        assert!(String::from_utf8(out).unwrap().contains(",0.2,\n"));
    }

    #[test]
    fn rejects_wrong_header_and_bad_probabilities() {
        assert!(read_scores("a,b\n1,2\n".as_bytes()).is_err());
        let text = format!("{SCORE_CSV_HEADER}\nm1,s1,X,PERSON,scholar,academic,1.5,\n");
        assert!(read_scores(text.as_bytes()).is_err());
        let text = format!("{SCORE_CSV_HEADER}\nm1,s1,X,PERSON,scholar,academic,0.5,maybe\n");
        assert!(read_scores(text.as_bytes()).is_err());
        let text = format!(
            "{SCORE_CSV_HEADER}\nm1,s1,X,PERSON,scholar,academic,0.5,\nm1,s1,X,PERSON,scholar,academic,0.6,\n"
        );
        assert!(read_scores(text.as_bytes()).is_err());
    }
}
