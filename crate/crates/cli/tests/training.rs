//! Training invariants: determinism, input immutability, the exact update
//! rule, divergence reporting, and headline accuracy on the unit disk.

mod common;

use mlpalg::sample::{make_characteristic_dataset, Epsilon};
use mlpalg::shape::Shape;
use mlpalg::train::{
    fine_tune, init_mlp, sample_gradients, train_sgd, TrainConfig, TrainError,
};
use mlpalg_core::Mlp;

fn unit_disk_data(seed: u64) -> mlpalg::dataset::LabeledDataset {
    let disk = Shape::parse("ball:0,0:1").unwrap();
    make_characteristic_dataset(&disk, Epsilon::default(), 500, 500, seed).unwrap()
}

fn assert_nets_bit_identical(a: &Mlp, b: &Mlp) {
    assert_eq!(a.layer_dims(), b.layer_dims());
    for (wa, wb) in a.weights().iter().zip(b.weights()) {
        for (va, vb) in wa.data().iter().zip(wb.data()) {
            assert_eq!(va.to_bits(), vb.to_bits());
        }
    }
    for (ta, tb) in a.thresholds().iter().zip(b.thresholds()) {
        for (va, vb) in ta.iter().zip(tb) {
            assert_eq!(va.to_bits(), vb.to_bits());
        }
    }
}

#[test]
fn training_is_deterministic() {
    let data = unit_disk_data(11);
    let net = init_mlp(&[2, 3, 1], 0.5, 7).unwrap();
    let cfg = TrainConfig {
        epochs: 50,
        ..TrainConfig::default()
    };
    let (first, report_a) = train_sgd(&net, &data, &cfg).unwrap();
    let (second, report_b) = train_sgd(&net, &data, &cfg).unwrap();
    assert_nets_bit_identical(&first, &second);
    assert_eq!(report_a.loss_history.len(), 50);
    for ((ea, la), (eb, lb)) in report_a.loss_history.iter().zip(&report_b.loss_history) {
        assert_eq!(ea, eb);
        assert_eq!(la.to_bits(), lb.to_bits());
    }
}

#[test]
fn train_does_not_mutate_input() {
    let data = unit_disk_data(12);
    let net = init_mlp(&[2, 3, 1], 0.5, 8).unwrap();
    let before = net.clone();
    let cfg = TrainConfig {
        epochs: 20,
        ..TrainConfig::default()
    };
    let (trained, _) = train_sgd(&net, &data, &cfg).unwrap();
    assert_nets_bit_identical(&net, &before);
    // and training did move the returned copy
    let moved = net
        .weights()
        .iter()
        .zip(trained.weights())
        .any(|(a, b)| a.data().iter().zip(b.data()).any(|(x, y)| x != y));
    assert!(moved, "20 epochs left every weight untouched");
}

#[test]
fn zero_epochs_returns_bit_identical_net() {
    let data = unit_disk_data(13);
    let net = init_mlp(&[2, 3, 1], 0.5, 9).unwrap();
    let cfg = TrainConfig {
        epochs: 0,
        ..TrainConfig::default()
    };
    let (out, report) = train_sgd(&net, &data, &cfg).unwrap();
    assert_nets_bit_identical(&net, &out);
    assert!(report.loss_history.is_empty());
    assert_eq!(report.total, data.n_rows());
}

/// One sample, batch size 1, one epoch: the result must be exactly
/// `param - lr * gradient` in every slot.
#[test]
fn single_step_matches_manual_update() {
    let data =
        mlpalg::dataset::LabeledDataset::from_rows(&[vec![0.3, -0.4]], &[vec![1.0]]).unwrap();
    let net = init_mlp(&[2, 3, 1], 0.5, 22).unwrap();
    let cfg = TrainConfig {
        epochs: 1,
        batch_size: 1,
        ..TrainConfig::default()
    };
    let (stepped, _) = train_sgd(&net, &data, &cfg).unwrap();

    let (gw, gt) = sample_gradients(&net, data.point(0), data.label(0), cfg.loss).unwrap();
    let mut expected = net.clone();
    for m in 0..expected.depth() - 1 {
        let (w, t) = expected.map_params_mut(m);
        for (slot, g) in w.data_mut().iter_mut().zip(gw[m].data()) {
            *slot -= cfg.learning_rate * g;
        }
        for (slot, g) in t.iter_mut().zip(&gt[m]) {
            *slot -= cfg.learning_rate * g;
        }
    }
    assert_nets_bit_identical(&stepped, &expected);
}

#[test]
fn unit_disk_defaults_reach_headline_accuracy() {
    let data = unit_disk_data(1);
    let net = init_mlp(&[2, 3, 1], 0.5, 2).unwrap();
    let (_, report) = train_sgd(&net, &data, &TrainConfig::default()).unwrap();
    assert!(
        report.accuracy >= 0.97,
        "unit disk training accuracy {} below 0.97",
        report.accuracy
    );
}

#[test]
fn fine_tune_does_not_regress() {
    let data = unit_disk_data(31);
    let net = init_mlp(&[2, 3, 1], 0.5, 32).unwrap();
    let (trained, report) = train_sgd(&net, &data, &TrainConfig::default()).unwrap();
    let cfg = TrainConfig {
        seed: 33,
        ..TrainConfig::fine_tune()
    };
    assert_eq!(cfg.epochs, 200);
    let (_, tuned_report) = fine_tune(&trained, &data, &cfg).unwrap();
    assert!(
        tuned_report.accuracy >= report.accuracy - 0.01,
        "fine-tune regressed: {} -> {}",
        report.accuracy,
        tuned_report.accuracy
    );
}

#[test]
fn huge_learning_rate_reports_divergence() {
    let data = unit_disk_data(41);
    let net = init_mlp(&[2, 3, 1], 0.5, 42).unwrap();
    let cfg = TrainConfig {
        learning_rate: 100.0,
        ..TrainConfig::default()
    };
    match train_sgd(&net, &data, &cfg) {
        Err(TrainError::Diverged { epoch }) => assert!(epoch >= 1),
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn dimension_mismatches_are_rejected() {
    let data = unit_disk_data(51);
    let net3d = init_mlp(&[3, 4, 1], 0.5, 52).unwrap();
    assert!(matches!(
        train_sgd(&net3d, &data, &TrainConfig::default()),
        Err(TrainError::InputDimMismatch { net: 3, data: 2 })
    ));
    let wide = init_mlp(&[2, 4, 3], 0.5, 53).unwrap();
    assert!(matches!(
        train_sgd(&wide, &data, &TrainConfig::default()),
        Err(TrainError::OutputWidthMismatch { net: 3, labels: 1 })
    ));
}
