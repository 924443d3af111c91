//! Mittag-Leffler values against a frozen 40-digit reference corpus
//! (`data/ml_corpus.csv`, regenerated by `data/gen_ml_corpus.py`).

use hilfer_core::special::{mittag_leffler, mittag_leffler_eval, ml_oracle, MlBranch, MlParams};

fn corpus() -> Vec<(MlParams, f64)> {
    let text = include_str!("data/ml_corpus.csv");
    text.lines()
        .skip(1)
        .map(|line| {
            let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
            (MlParams::new(v[0], v[1], v[2]).unwrap(), v[3])
        })
        .collect()
}

#[test]
fn corpus_spans_the_parameter_box_and_both_branches() {
    let c = corpus();
    assert!(c.len() >= 200);
    assert!(c.iter().all(|(p, _)| (1.05..=1.95).contains(&p.alpha) && (-0.5..=2.5).contains(&p.beta)));
    assert!(c.iter().all(|(p, _)| (-1000.0..=5.0).contains(&p.z)));
    let branches: Vec<MlBranch> = c.iter().map(|(p, _)| mittag_leffler_eval(*p).unwrap().branch).collect();
    assert!(branches.contains(&MlBranch::Series));
    assert!(branches.iter().any(|b| *b != MlBranch::Series));
}

#[test]
fn evaluator_matches_reference() {
    for (p, reference) in corpus() {
        let v = mittag_leffler(p).unwrap();
        assert!((v - reference).abs() <= 1e-10, "{p:?}: {v} vs {reference}");
    }
}

#[test]
fn big_number_oracle_matches_reference() {
    for (p, reference) in corpus().into_iter().step_by(7) {
        let v = ml_oracle(p, 40).unwrap();
        assert!((v - reference).abs() <= 1e-15 * reference.abs().max(1.0), "{p:?}: {v} vs {reference}");
    }
}
