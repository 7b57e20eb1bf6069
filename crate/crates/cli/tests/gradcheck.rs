//! Backpropagation checked against central finite differences for every
//! architecture/loss pairing the trainer supports: fused sigmoid+BCE output
//! deltas, the general BCE path through a non-sigmoid final map, MSE, and
//! per-neuron mixed activation tags.

mod common;

use common::{max_gradient_error, random_point, random_tagged_net, random_uniform_net, GRAD_TOL};
use mlpalg::train::{sample_gradients, Loss};
use mlpalg_core::{Activation, Mlp};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Checks several random nets of one build against the oracle and returns
/// the worst relative error seen.
fn sweep(make_net: impl Fn(u64) -> Mlp, labels: &[Vec<f64>], loss: Loss, seeds: u64) -> f64 {
    let mut worst: f64 = 0.0;
    for seed in 0..seeds {
        let net = make_net(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        for y in labels {
            let x = random_point(net.input_dim(), &mut rng);
            let analytic = sample_gradients(&net, &x, y, loss).unwrap();
            worst = worst.max(max_gradient_error(&net, &x, y, loss, &analytic));
        }
    }
    worst
}

#[test]
fn bce_sigmoid_2_3_1() {
    let worst = sweep(
        |seed| random_uniform_net(&[2, 3, 1], &[Activation::Sigmoid; 2], 0.8, seed),
        &[vec![0.0], vec![1.0]],
        Loss::Bce,
        10,
    );
    assert!(worst <= GRAD_TOL, "worst relative error {worst:e}");
}

#[test]
fn bce_mixed_tags_4_5_3_1() {
    use Activation::{Relu, Sigmoid};
    let tags = vec![
        vec![Sigmoid, Relu, Sigmoid, Relu, Sigmoid],
        vec![Relu, Sigmoid, Relu],
        vec![Sigmoid],
    ];
    let worst = sweep(
        |seed| random_tagged_net(&[4, 5, 3, 1], tags.clone(), 0.7, seed),
        &[vec![0.0], vec![1.0]],
        Loss::Bce,
        10,
    );
    assert!(worst <= GRAD_TOL, "worst relative error {worst:e}");
}

#[test]
fn mse_relu_final_3_4_2() {
    let worst = sweep(
        |seed| random_uniform_net(&[3, 4, 2], &[Activation::Sigmoid, Activation::Relu], 0.8, seed),
        &[vec![0.25, 1.5], vec![0.0, 0.0]],
        Loss::Mse,
        10,
    );
    assert!(worst <= GRAD_TOL, "worst relative error {worst:e}");
}

#[test]
fn mse_mixed_tags_4_5_3_1() {
    use Activation::{Relu, Sigmoid};
    let tags = vec![
        vec![Relu, Relu, Sigmoid, Sigmoid, Relu],
        vec![Sigmoid, Relu, Sigmoid],
        vec![Relu],
    ];
    let worst = sweep(
        |seed| random_tagged_net(&[4, 5, 3, 1], tags.clone(), 0.7, seed),
        &[vec![0.5], vec![1.25]],
        Loss::Mse,
        10,
    );
    assert!(worst <= GRAD_TOL, "worst relative error {worst:e}");
}

/// The general (non-fused) BCE path runs when the final map is not sigmoid.
/// A ReLU final with small weights and a -0.5 threshold keeps outputs inside
/// (0, 1), where unclamped BCE is differentiable.
#[test]
fn bce_general_path_relu_final() {
    let make = |seed: u64| {
        let mut net = random_uniform_net(
            &[2, 3, 1],
            &[Activation::Sigmoid, Activation::Relu],
            0.1,
            seed,
        );
        let (_, thresholds) = net.map_params_mut(1);
        thresholds[0] = -0.5;
        net
    };
    let worst = sweep(make, &[vec![0.0], vec![1.0]], Loss::Bce, 10);
    assert!(worst <= GRAD_TOL, "worst relative error {worst:e}");
}
