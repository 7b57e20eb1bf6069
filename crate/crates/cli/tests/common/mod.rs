//! Helpers shared by the integration suites: a finite-difference gradient
//! oracle, random net construction, and relative-error comparison.

#![allow(dead_code)]

use mlpalg::train::{sample_loss, Loss};
use mlpalg_core::{Activation, Matrix, Mlp};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Step for central differences.
pub const GRAD_H: f64 = 1e-5;
/// Maximum allowed relative error between analytic and numeric gradients.
pub const GRAD_TOL: f64 = 1e-6;

/// Relative error with an absolute floor, so near-zero gradients compare on
/// an absolute scale.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-4)
}

/// Loss derivative with respect to every weight and threshold, by central
/// differences.
pub fn numeric_gradients(
    net: &Mlp,
    x: &[f64],
    y: &[f64],
    loss: Loss,
) -> (Vec<Matrix>, Vec<Vec<f64>>) {
    let mut grad_w = Vec::new();
    let mut grad_t = Vec::new();
    for m in 0..net.depth() - 1 {
        let w = &net.weights()[m];
        let mut gw = Matrix::zeros(w.rows(), w.cols());
        for idx in 0..w.rows() * w.cols() {
            let bumped = |h: f64| {
                let mut n = net.clone();
                n.map_params_mut(m).0.data_mut()[idx] += h;
                sample_loss(&n, x, y, loss).unwrap()
            };
            gw.data_mut()[idx] = (bumped(GRAD_H) - bumped(-GRAD_H)) / (2.0 * GRAD_H);
        }
        grad_w.push(gw);

        let width = net.thresholds()[m].len();
        let mut gt = vec![0.0; width];
        for (j, slot) in gt.iter_mut().enumerate() {
            let bumped = |h: f64| {
                let mut n = net.clone();
                n.map_params_mut(m).1[j] += h;
                sample_loss(&n, x, y, loss).unwrap()
            };
            *slot = (bumped(GRAD_H) - bumped(-GRAD_H)) / (2.0 * GRAD_H);
        }
        grad_t.push(gt);
    }
    (grad_w, grad_t)
}

/// Largest relative error between an analytic gradient set and the numeric
/// oracle for the same sample.
pub fn max_gradient_error(
    net: &Mlp,
    x: &[f64],
    y: &[f64],
    loss: Loss,
    analytic: &(Vec<Matrix>, Vec<Vec<f64>>),
) -> f64 {
    let (num_w, num_t) = numeric_gradients(net, x, y, loss);
    let mut worst: f64 = 0.0;
    for (a, n) in analytic.0.iter().zip(&num_w) {
        for (av, nv) in a.data().iter().zip(n.data()) {
            worst = worst.max(rel_err(*av, *nv));
        }
    }
    for (a, n) in analytic.1.iter().zip(&num_t) {
        for (av, nv) in a.iter().zip(n) {
            worst = worst.max(rel_err(*av, *nv));
        }
    }
    worst
}

/// Random net with one activation tag per map.
pub fn random_uniform_net(dims: &[usize], acts: &[Activation], scale: f64, seed: u64) -> Mlp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (weights, thresholds) = random_params(dims, scale, &mut rng);
    Mlp::new_uniform(weights, thresholds, acts).unwrap()
}

/// Random net with explicit per-neuron activation tags.
pub fn random_tagged_net(dims: &[usize], acts: Vec<Vec<Activation>>, scale: f64, seed: u64) -> Mlp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (weights, thresholds) = random_params(dims, scale, &mut rng);
    Mlp::new(weights, thresholds, acts).unwrap()
}

fn random_params(dims: &[usize], scale: f64, rng: &mut ChaCha8Rng) -> (Vec<Matrix>, Vec<Vec<f64>>) {
    let mut weights = Vec::new();
    let mut thresholds = Vec::new();
    for pair in dims.windows(2) {
        let (n_in, n_out) = (pair[0], pair[1]);
        let rows: Vec<Vec<f64>> = (0..n_out)
            .map(|_| (0..n_in).map(|_| rng.gen_range(-scale..=scale)).collect())
            .collect();
        weights.push(Matrix::from_rows(&rows).unwrap());
        thresholds.push((0..n_out).map(|_| rng.gen_range(-scale..=scale)).collect());
    }
    (weights, thresholds)
}

/// Random point in `[-1, 1]^dim`.
pub fn random_point(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}
