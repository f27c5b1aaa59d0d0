use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::ScoreRow;

/// Precision, recall and F1 from exact-match counts. Every ratio with a zero
/// denominator is 0.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Prf1 {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf1 {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        Prf1 {
            tp,
            fp,
            fn_,
            precision: ratio(tp, tp + fp),
            recall: ratio(tp, tp + fn_),
            // harmonic mean of precision and recall, written on the counts
            f1: ratio(2 * tp, 2 * tp + fp + fn_),
        }
    }
}

/// Gold annotation: `mention_id` is an instance of `fine_type`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GoldTuple {
    pub mention_id: String,
    pub fine_type: String,
}

pub const GOLD_CSV_HEADER: &str = "mention_id,fine_type";

/// Positive rows of a labeled score table, as gold tuples.
pub fn gold_from_scores(rows: &[ScoreRow]) -> Vec<GoldTuple> {
    let set: BTreeSet<GoldTuple> = rows
        .iter()
        .filter(|r| r.gold == Some(true))
        .map(|r| GoldTuple {
            mention_id: r.mention_id.clone(),
            fine_type: r.fine_type.clone(),
        })
        .collect();
    set.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub per_type: BTreeMap<String, Prf1>,
    /// Unweighted means over types of precision, recall and F1.
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
}

pub const EVAL_CSV_HEADER: &str = "fine_type,tp,fp,fn,precision,recall,f1";

impl EvalReport {
    /// Per-type rows and a closing `macro` row; scores in percent with one
    /// decimal.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{EVAL_CSV_HEADER}\n");
        for (ty, s) in &self.per_type {
            let _ = writeln!(
                out,
                "{ty},{},{},{},{:.1},{:.1},{:.1}",
                s.tp,
                s.fp,
                s.fn_,
                100.0 * s.precision,
                100.0 * s.recall,
                100.0 * s.f1
            );
        }
        let _ = writeln!(
            out,
            "macro,,,,{:.1},{:.1},{:.1}",
            100.0 * self.macro_precision,
            100.0 * self.macro_recall,
            100.0 * self.macro_f1
        );
        out
    }
}

/// Exact-match scoring of predicted (mention, type) pairs against gold pairs,
/// per fine type (every type seen on either side) plus a macro average.
pub fn evaluate<'a, P>(predictions: P, gold: &[GoldTuple]) -> EvalReport
where
    P: IntoIterator<Item = (&'a str, &'a str)>,
{
    let pred: BTreeSet<(&str, &str)> = predictions.into_iter().collect();
    let gold: BTreeSet<(&str, &str)> = gold
        .iter()
        .map(|g| (g.mention_id.as_str(), g.fine_type.as_str()))
        .collect();
    let types: BTreeSet<&str> = pred.iter().chain(&gold).map(|&(_, t)| t).collect();

    let mut per_type = BTreeMap::new();
    for ty in types {
        let p: BTreeSet<_> = pred.iter().filter(|(_, t)| *t == ty).collect();
        let g: BTreeSet<_> = gold.iter().filter(|(_, t)| *t == ty).collect();
        let tp = p.intersection(&g).count();
        per_type.insert(ty.to_string(), Prf1::from_counts(tp, p.len() - tp, g.len() - tp));
    }
    let n = per_type.len();
    let mean = |f: fn(&Prf1) -> f64| {
        if n == 0 {
            0.0
        } else {
            per_type.values().map(f).sum::<f64>() / n as f64
        }
    };
    EvalReport {
        macro_precision: mean(|s| s.precision),
        macro_recall: mean(|s| s.recall),
        macro_f1: mean(|s| s.f1),
        per_type,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gold(pairs: &[(&str, &str)]) -> Vec<GoldTuple> {
        pairs
            .iter()
            .map(|&(m, t)| GoldTuple {
                mention_id: m.into(),
                fine_type: t.into(),
            })
            .collect()
    }

    #[test]
    fn formula_example() {
        let s = Prf1::from_counts(2, 0, 1);
        assert_eq!(s.precision, 1.0);
        assert!((s.recall - 2.0 / 3.0).abs() < 1e-12);
        assert!((s.f1 - 0.8).abs() < 1e-12);
    }

    #[test]
    fn empty_predictions_score_zero() {
        let report = evaluate(Vec::new(), &gold(&[("m1", "scholar")]));
        let s = report.per_type["scholar"];
        assert_eq!((s.precision, s.recall, s.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn per_type_and_macro() {
        let g = gold(&[("m1", "scholar"), ("m2", "scholar"), ("m3", "politician")]);
        let preds = vec![("m1", "scholar"), ("m3", "scholar"), ("m3", "politician")];
        let r = evaluate(preds, &g);
        let sch = r.per_type["scholar"];
        assert_eq!((sch.tp, sch.fp, sch.fn_), (1, 1, 1));
        let pol = r.per_type["politician"];
        assert_eq!((pol.tp, pol.fp, pol.fn_), (1, 0, 0));
        assert!((r.macro_f1 - 0.75).abs() < 1e-12);
    }

    #[test]
    fn report_uses_percent_with_one_decimal() {
        let g = gold(&[("m1", "scholar"), ("m2", "scholar"), ("m3", "scholar")]);
        let r = evaluate(vec![("m1", "scholar"), ("m2", "scholar")], &g);
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "fine_type,tp,fp,fn,precision,recall,f1");
        assert_eq!(lines[1], "scholar,2,0,1,100.0,66.7,80.0");
        assert_eq!(lines[2], "macro,,,,100.0,66.7,80.0");
    }

    #[test]
    fn gold_from_labeled_rows() {
        let row = |m: &str, ty: &str, g: Option<bool>| ScoreRow {
            mention_id: m.into(),
            sentence_id: "s".into(),
            mention_text: m.into(),
            coarse_type: "PERSON".into(),
            fine_type: ty.into(),
            synonym: "x".into(),
            prob: 0.5,
            gold: g,
        };
        let rows = vec![
            row("a", "scholar", Some(true)),
            row("a", "scholar", Some(true)),
            row("b", "scholar", Some(false)),
            row("c", "scholar", None),
        ];
        assert_eq!(gold_from_scores(&rows), gold(&[("a", "scholar")]));
    }

    proptest! {
        #[test]
        fn f1_zero_iff_no_true_positives(tp in 0usize..50, fp in 0usize..50, fn_ in 0usize..50) {
            let s = Prf1::from_counts(tp, fp, fn_);
            prop_assert_eq!(s.f1 == 0.0, tp == 0);
            for x in [s.precision, s.recall, s.f1] {
                prop_assert!((0.0..=1.0).contains(&x));
            }
            let harmonic = if s.precision + s.recall == 0.0 {
                0.0
            } else {
                2.0 * s.precision * s.recall / (s.precision + s.recall)
            };
            prop_assert!((s.f1 - harmonic).abs() < 1e-12);
        }

        #[test]
        fn balanced_errors_equalize_scores(tp in 0usize..50, e in 0usize..50) {
            let s = Prf1::from_counts(tp, e, e);
            prop_assert_eq!(s.precision, s.recall);
            prop_assert!((s.f1 - s.precision).abs() < 1e-12);
        }
    }
}
