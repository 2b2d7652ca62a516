mod common;

use rand::seq::SliceRandom;
use verbal_certainty::corpus::{AuthorRef, FieldTag, PaperRecord};
use verbal_certainty::gender::{
    f1_score, load_name_rows, paper_gender, train, GenderBasis, GenderOutcome, NameModel, NameRow, Sex, TrainConfig,
};
use verbal_certainty::Error;

fn toy_rows() -> Vec<NameRow> {
    load_name_rows(common::crate_dir().join("data/toy_names.csv")).unwrap()
}

/// Pooled predictions from five folds, each name predicted by a model that
/// never saw it.
fn cross_validated_f1(rows: &[NameRow], seed: u64) -> f64 {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.shuffle(&mut common::rng(seed));
    let mut probs = Vec::new();
    let mut truth = Vec::new();
    for fold in order.chunks(rows.len().div_ceil(5)) {
        let train_rows: Vec<NameRow> =
            (0..rows.len()).filter(|i| !fold.contains(i)).map(|i| rows[i].clone()).collect();
        let (model, _) = train(&train_rows, &TrainConfig::default()).unwrap();
        for &i in fold {
            probs.push(model.predict(&rows[i].name).unwrap());
            truth.push(rows[i].sex == Sex::Male);
        }
    }
    f1_score(&probs, &truth)
}

#[test]
fn held_out_f1_on_separable_names() {
    let rows = toy_rows();
    assert_eq!(rows.len(), 20);
    for seed in 0..3 {
        let f1 = cross_validated_f1(&rows, seed);
        assert!(f1 >= 0.95, "seed {seed}: F1 {f1}");
    }
    let cfg = TrainConfig { test_fraction: Some(0.2), seed: 1, ..TrainConfig::default() };
    let (_, report) = train(&rows, &cfg).unwrap();
    assert_eq!((report.n_train_names, report.n_test_names), (16, 4));
    assert!(report.test_f1.unwrap() >= 0.95);
}

#[test]
fn reload_is_bit_exact() {
    let (model, _) = train(&toy_rows(), &TrainConfig::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    model.save(&path).unwrap();
    let back = NameModel::load(&path).unwrap();
    assert_eq!(model, back);
    for name in ["marco", "lucia", "roberto", "giulia", "kim", "zzz"] {
        assert_eq!(model.predict(name).unwrap().to_bits(), back.predict(name).unwrap().to_bits());
    }
    // saving again gives the same bytes
    let again = dir.path().join("again.json");
    back.save(&again).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn abbreviated_names_refused() {
    let (model, _) = train(&toy_rows(), &TrainConfig::default()).unwrap();
    for name in ["J.", "J", "J. R.", "A.-M.", "", "  "] {
        assert!(matches!(model.predict(name), Err(Error::NameRefused { .. })), "{name:?}");
    }
    assert!(model.predict("Jo").is_ok());
}

#[test]
fn balanced_weights_ignore_class_totals() {
    let rows = toy_rows();
    // every female count multiplied tenfold
    let heavy: Vec<NameRow> = rows
        .iter()
        .map(|r| NameRow::new(r.name.clone(), r.sex, if r.sex == Sex::Female { r.count * 10 } else { r.count }))
        .collect();
    let (a, _) = train(&rows, &TrainConfig::default()).unwrap();
    let (b, _) = train(&heavy, &TrainConfig::default()).unwrap();
    let unbalanced = TrainConfig { class_balanced: false, ..TrainConfig::default() };
    let (c, _) = train(&rows, &unbalanced).unwrap();
    let (d, _) = train(&heavy, &unbalanced).unwrap();
    let mut shift = 0.0f64;
    for name in ["marco", "laura", "roberto", "giulia", "kim"] {
        let (pa, pb) = (a.predict(name).unwrap(), b.predict(name).unwrap());
        assert!((pa - pb).abs() < 1e-9, "{name}: {pa} vs {pb}");
        shift = shift.max((c.predict(name).unwrap() - d.predict(name).unwrap()).abs());
    }
    // without balancing the heavier class pulls predictions toward it
    assert!(shift > 1e-3);
}

#[test]
fn large_teams_and_missing_names_are_excluded() {
    let (model, _) = train(&toy_rows(), &TrainConfig::default()).unwrap();
    let paper = |names: &[&str]| PaperRecord {
        paper_id: "p".into(),
        title: String::new(),
        abstract_text: String::new(),
        year: 2010,
        language: None,
        field_tags: vec![FieldTag::new(0, "Biology")],
        authors: names.iter().enumerate().map(|(i, n)| AuthorRef::new(format!("a{i}")).with_name(*n)).collect(),
        journal_rank: None,
        citation_count: 0,
        tweet_count: None,
    };
    let nine = paper(&["marco"; 9]);
    let ten = paper(&["marco"; 10]);
    for basis in GenderBasis::ALL {
        assert!(matches!(paper_gender(&nine, &model, basis), GenderOutcome::Scored(_)));
        assert!(matches!(paper_gender(&ten, &model, basis), GenderOutcome::Excluded(_)));
    }
    let initials_first = paper(&["M.", "laura"]);
    assert!(matches!(paper_gender(&initials_first, &model, GenderBasis::FirstAuthor), GenderOutcome::Excluded(_)));
    assert!(paper_gender(&initials_first, &model, GenderBasis::LastAuthor).score().unwrap() < 0.5);
    match paper_gender(&initials_first, &model, GenderBasis::AllAuthorsMean) {
        GenderOutcome::Scored(s) => assert_eq!(s.n_scored, 1),
        other => panic!("{other:?}"),
    }
}
