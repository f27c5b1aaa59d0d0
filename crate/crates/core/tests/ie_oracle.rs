//! Calibration, classification and relation extraction against exhaustive
//! re-scoring on random tables.

use std::collections::{BTreeMap, BTreeSet};

use kgdrift::ie::{
    calibrate, classify, default_threshold_grid, extract_relations, CalibrationFilters,
    ClassifierConfig, RelationTriple, ScoreRow,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod oracles;
use oracles::*;

#[test]
fn calibration_is_optimal_on_random_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let grid = default_threshold_grid();
    let filters = CalibrationFilters::default();
    let mut kept = 0;
    for _ in 0..100 {
        let rows = random_table(&mut rng, true);
        let cal = calibrate(&rows, &grid, filters).unwrap();

        let mut groups: BTreeMap<(&str, &str), Vec<(f64, bool)>> = BTreeMap::new();
        for r in &rows {
            groups
                .entry((&r.fine_type, &r.synonym))
                .or_default()
                .push((r.prob, r.gold.unwrap()));
        }
        assert_eq!(cal.synonyms.len(), groups.len());
        for (&(ty, syn), obs) in &groups {
            let want = oracle_choice(obs, &grid);
            let got = cal
                .synonyms
                .iter()
                .find(|s| s.fine_type == ty && s.synonym == syn)
                .unwrap();
            assert_eq!(got.threshold, want.threshold, "{ty}/{syn}");
            let (tp, fp, fn_, _) = want.counts;
            assert_eq!(
                (got.scores.tp, got.scores.fp, got.scores.fn_),
                (tp as usize, fp as usize, fn_ as usize)
            );
        }

        let selection = oracle_selection(&rows, &grid, filters);
        assert_eq!(selection.len(), cal.config.types.len());
        for (ty, want) in selection {
            let got: Vec<(&str, f64)> = cal.config.types[&ty]
                .iter()
                .map(|s| (s.synonym.as_str(), s.threshold))
                .collect();
            let want: Vec<(&str, f64)> = want.iter().map(|(s, o)| (s.as_str(), o.threshold)).collect();
            assert_eq!(got, want, "selected synonyms for {ty}");
            kept += got.len();
        }
    }
    assert!(kept > 0);
}

fn config_from(rng: &mut ChaCha8Rng) -> ClassifierConfig {
    let rows = random_table(rng, true);
    calibrate(
        &rows,
        &default_threshold_grid(),
        CalibrationFilters {
            max_fpr: 1.0,
            min_recall: 0.0,
        },
    )
    .unwrap()
    .config
}

#[test]
fn classify_picks_the_most_probable_exceeding_row() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let cfg = config_from(&mut rng);
        let rows = random_table(&mut rng, false);
        let out = classify(&rows, &cfg);

        let mut eligible: BTreeMap<&str, Vec<&ScoreRow>> = BTreeMap::new();
        for r in &rows {
            if let Some(t) = cfg.threshold(&r.fine_type, &r.synonym) {
                if r.prob > t {
                    eligible.entry(&r.mention_id).or_default().push(r);
                }
            }
        }
        assert_eq!(out.entities.len(), eligible.len());
        for e in &out.entities {
            let cands = &eligible[e.mention_id.as_str()];
            let best = cands
                .iter()
                .max_by(|a, b| {
                    a.prob
                        .total_cmp(&b.prob)
                        .then_with(|| (&b.fine_type, &b.synonym).cmp(&(&a.fine_type, &a.synonym)))
                })
                .unwrap();
            assert_eq!((&e.fine_type, &e.synonym, e.prob), (&best.fine_type, &best.synonym, best.prob));
        }
    }
}

#[test]
fn raising_thresholds_never_adds_predictions() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let cfg = config_from(&mut rng);
        let rows = random_table(&mut rng, false);
        let before = classify(&rows, &cfg).entities.len();
        let mut raised = cfg.clone();
        for syns in raised.types.values_mut() {
            for s in syns {
                s.threshold += rng.random_range(0.0..0.3);
            }
        }
        let after = classify(&rows, &raised).entities.len();
        assert!(after <= before, "{after} > {before}");
    }
}

#[test]
fn relation_extraction_is_exactly_the_threshold_filter() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let rows: Vec<RelationTriple> = (0..rng.random_range(0..60))
            .map(|i| RelationTriple {
                a: format!("e{}", rng.random_range(0..10)),
                b: format!("e{}", rng.random_range(0..10)),
                relation: ["spouse", "member_of", "sibling"][i % 3].into(),
                sentence_id: format!("s{i}"),
                prob: (rng.random::<f64>() * 100.0).round() / 100.0,
            })
            .collect();
        let threshold = [0.8, 0.5, rng.random()][rng.random_range(0..3)];
        let got: BTreeSet<String> = extract_relations(&rows, threshold)
            .iter()
            .map(|r| format!("{r:?}"))
            .collect();
        let mut want = BTreeSet::new();
        for r in &rows {
            if r.prob >= threshold {
                want.insert(format!("{r:?}"));
            }
        }
        assert_eq!(got, want);
    }
}
