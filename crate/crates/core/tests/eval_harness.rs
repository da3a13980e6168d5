use std::collections::BTreeSet;

use newsclf::corpus::{make_folds, Article, LabelField, Partition, SplitSpec};
use newsclf::eval::{
    compute_metrics, cross_validate, cross_validate_partitions, learning_curve, run_protocol,
    validation_curve, Protocol, ProtocolParams, TrainParams,
};
use newsclf::features::{PipelineParams, VocabParams};
use newsclf::linear::ModelKind;
use newsclf::synth::{generate, SynthConfig};
use newsclf::{Error, Fraction};

fn article(id: String, body: &str, satire: bool) -> Article {
    Article {
        id,
        url: String::new(),
        title: String::new(),
        body: body.to_string(),
        category: String::new(),
        date: "2017-01-01".into(),
        publisher: if satire { "jester" } else { "herald" }.into(),
        satire,
        paid: None,
    }
}

/// `per_class` copies of one satire text and one regular text.
fn twin_corpus(per_class: usize) -> Vec<Article> {
    (0..per_class)
        .flat_map(|i| {
            [
                article(format!("s{i:04}"), "wild moon cheese scandal", true),
                article(format!("r{i:04}"), "council budget meeting report", false),
            ]
        })
        .collect()
}

fn loose_params(kind: ModelKind) -> TrainParams {
    let mut p = TrainParams::new(kind, LabelField::Satire);
    p.pipeline = PipelineParams {
        vocab: VocabParams {
            min_df_count: 1,
            ..VocabParams::default()
        },
        ..PipelineParams::default()
    };
    p
}

fn synthetic(n_docs: usize) -> Vec<Article> {
    generate(&SynthConfig {
        n_docs,
        ..SynthConfig::default()
    })
    .unwrap()
}

#[test]
fn ten_folds_of_a_hundred_documents() {
    let corpus = twin_corpus(50);
    let folds = make_folds(&corpus, &SplitSpec::kfold(10, 1, LabelField::Satire)).unwrap();
    assert!(folds.iter().all(|p| p.test_ids.len() == 10));
    let union: BTreeSet<&String> = folds.iter().flat_map(|p| &p.test_ids).collect();
    assert_eq!(union.len(), 100);
}

#[test]
fn mirrored_halves_give_identical_folds() {
    let mut corpus = twin_corpus(3);
    corpus.extend(twin_corpus(3).into_iter().map(|mut a| {
        a.id = format!("dup-{}", a.id);
        a
    }));
    let (first, second): (Vec<String>, Vec<String>) = {
        let ids: Vec<String> = corpus.iter().map(|a| a.id.clone()).collect();
        (ids[..6].to_vec(), ids[6..].to_vec())
    };
    let spec = SplitSpec::kfold(2, 0, LabelField::Satire);
    let sorted = |mut v: Vec<String>| {
        v.sort();
        v
    };
    let parts = vec![
        Partition {
            train_ids: sorted(first.clone()),
            test_ids: sorted(second.clone()),
            spec: spec.clone(),
        },
        Partition {
            train_ids: sorted(second),
            test_ids: sorted(first),
            spec,
        },
    ];
    let cv =
        cross_validate_partitions::<f64>(&corpus, &parts, &loose_params(ModelKind::LinearSvm), 5)
            .unwrap();
    assert_eq!(cv.folds[0].test_metrics, cv.folds[1].test_metrics);
    assert_eq!(cv.folds[0].train_metrics, cv.folds[1].train_metrics);
    assert_eq!(cv.test_score_std, 0.0);
}

#[test]
fn stored_metrics_are_recomputable() {
    let corpus = synthetic(400);
    let cv = cross_validate::<f64>(
        &corpus,
        &TrainParams::new(ModelKind::Logreg, LabelField::Satire),
        5,
        3,
    )
    .unwrap();
    for f in &cv.folds {
        assert_eq!(
            compute_metrics(&f.confusion_matrix, Some("satire")).unwrap(),
            f.test_metrics
        );
    }
}

#[test]
fn synthetic_corpus_cross_validates_well() {
    let corpus = synthetic(1000);
    let params = TrainParams::new(ModelKind::LinearSvm, LabelField::Satire);
    let cv = cross_validate::<f64>(&corpus, &params, 10, 42).unwrap();
    assert_eq!(cv.folds.len(), 10);
    assert!(cv.test_score_mean >= 0.95, "{}", cv.test_score_mean);
}

#[test]
fn full_size_learning_curve_point_is_plain_cross_validation() {
    let corpus = synthetic(300);
    let params = TrainParams::new(ModelKind::LinearSvm, LabelField::Satire);
    let curve = learning_curve::<f64>(&corpus, &[300], &params, 5, 9).unwrap();
    let cv = cross_validate::<f64>(&corpus, &params, 5, 9).unwrap();
    assert_eq!(curve[0].cv_score, cv.test_score_mean);
    assert_eq!(curve[0].cv_std, cv.test_score_std);
    assert_eq!(curve[0].train_score, cv.train_score_mean);
}

#[test]
fn duplicated_documents_add_nothing() {
    let corpus = twin_corpus(40);
    let curve = learning_curve::<f64>(
        &corpus,
        &[40, 80],
        &loose_params(ModelKind::LinearSvm),
        4,
        2,
    )
    .unwrap();
    assert_eq!(curve[0].cv_score, curve[1].cv_score);
    assert_eq!(curve[0].train_score, curve[1].train_score);
}

#[test]
fn more_data_does_not_hurt_on_separable_corpus() {
    let corpus = synthetic(1000);
    let mut params = TrainParams::new(ModelKind::LinearSvm, LabelField::Satire);
    params.pipeline.vocab.min_df_count = 2;
    let curve = learning_curve::<f64>(&corpus, &[50, 500], &params, 10, 42).unwrap();
    assert!(curve[1].cv_score >= curve[0].cv_score - 0.02, "{curve:?}");
}

#[test]
fn learning_curve_rejects_bad_sizes() {
    let corpus = twin_corpus(40);
    let params = loose_params(ModelKind::LinearSvm);
    assert!(matches!(
        learning_curve::<f64>(&corpus, &[19, 40], &params, 10, 0),
        Err(Error::Config(_))
    ));
    assert!(learning_curve::<f64>(&corpus, &[60, 40], &params, 4, 0).is_err());
    assert!(learning_curve::<f64>(&corpus, &[81], &params, 4, 0).is_err());
}

#[test]
fn single_value_validation_curve_is_cross_validation() {
    let corpus = synthetic(300);
    let mut params = TrainParams::new(ModelKind::Logreg, LabelField::Satire);
    params.solver.c = 10.0;
    let curve = validation_curve::<f64>(&corpus, &[10.0], &params, 5, 4).unwrap();
    let cv = cross_validate::<f64>(&corpus, &params, 5, 4).unwrap();
    assert_eq!(curve[0].cv_score, cv.test_score_mean);
    assert_eq!(curve[0].train_score, cv.train_score_mean);
}

#[test]
fn weak_regularization_wins_on_separable_corpus() {
    let corpus = synthetic(600);
    let params = TrainParams::new(ModelKind::LinearSvm, LabelField::Satire);
    let curve = validation_curve::<f64>(&corpus, &[0.01, 100.0], &params, 5, 42).unwrap();
    assert!(curve[1].cv_score >= curve[0].cv_score, "{curve:?}");
    assert!(validation_curve::<f64>(&corpus, &[], &params, 5, 42).is_err());
    assert!(validation_curve::<f64>(&corpus, &[-1.0], &params, 5, 42).is_err());
}

#[test]
fn cross_validation_names_a_too_small_class() {
    let mut corpus = twin_corpus(20);
    corpus.retain(|a| !a.satire || a.id.as_str() < "s0003");
    let err = cross_validate::<f64>(&corpus, &loose_params(ModelKind::Logreg), 10, 0).unwrap_err();
    assert!(
        matches!(err, Error::ClassTooSmall { ref class, count: 3, needed: 10 } if class == "satire")
    );
}

fn protocol_params() -> ProtocolParams {
    ProtocolParams {
        holdout_publishers: vec!["publisher01".into()],
        ..ProtocolParams::default()
    }
}

#[test]
fn reports_are_reproducible() {
    let corpus = synthetic(400);
    let a = run_protocol::<f64>(&corpus, Protocol::SatireRandom, &protocol_params()).unwrap();
    let b = run_protocol::<f64>(&corpus, Protocol::SatireRandom, &protocol_params()).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(a.test_size, 80);
    assert_eq!(
        a.metrics,
        compute_metrics(&a.confusion_matrix, Some("satire")).unwrap()
    );
}

#[test]
fn protocols_check_their_requirements_first() {
    let corpus = synthetic(200);
    let mut params = protocol_params();
    params.holdout_publishers = vec!["nobody".into()];
    assert!(run_protocol::<f64>(&corpus, Protocol::PublisherHoldout, &params).is_err());
    assert!(run_protocol::<f64>(&corpus, Protocol::PaidVsEditorial, &params).is_err());
}

#[test]
fn paid_protocol_uses_flagged_articles_only() {
    let corpus = generate(&SynthConfig {
        n_docs: 2000,
        paid_publisher: Some(0),
        ..SynthConfig::default()
    })
    .unwrap();
    let r = run_protocol::<f64>(&corpus, Protocol::PaidVsEditorial, &protocol_params()).unwrap();
    assert_eq!(r.train_size + r.test_size, 500);
    assert_eq!(r.spec.test_fraction, Some(Fraction::new(1, 5).unwrap()));
    assert!(r.metrics.f1 >= 0.95, "{}", r.metrics.f1);
    assert_eq!(r.metrics.positive.as_deref(), Some("paid"));
}
