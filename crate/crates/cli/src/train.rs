//! Mini-batch stochastic gradient descent for characteristic nets, with the
//! per-sample loss/gradient pair exposed so tests can check backpropagation
//! against finite differences.
//!
//! Conventions that tests rely on:
//! - thresholds are subtracted (`z = W·a − θ`), so the threshold gradient is
//!   the negated output delta;
//! - the ReLU subgradient at exactly 0 is 0;
//! - binary cross-entropy is computed without clamping, so a saturated wrong
//!   answer drives the mean loss to infinity and training aborts with a
//!   divergence error naming the epoch.

use crate::dataset::LabeledDataset;
use crate::eval::{accuracy_argmax, accuracy_scalar, EvalReport};
use mlpalg_core::{Activation, Matrix, Mlp, MlpError};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Loss function for SGD; binary cross-entropy is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loss {
    Bce,
    Mse,
}

impl FromStr for Loss {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bce" => Ok(Loss::Bce),
            "mse" => Ok(Loss::Mse),
            other => Err(format!("unknown loss `{other}` (expected bce or mse)")),
        }
    }
}

impl fmt::Display for Loss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Loss::Bce => "bce",
            Loss::Mse => "mse",
        })
    }
}

/// Hyperparameters for [`train_sgd`] / [`fine_tune`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub loss: Loss,
    pub init_scale: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.5,
            epochs: 2000,
            batch_size: 32,
            loss: Loss::Bce,
            init_scale: 0.5,
            seed: 0,
        }
    }
}

impl TrainConfig {
    /// Default epoch count when touching up a composed net.
    pub const FINE_TUNE_EPOCHS: usize = 200;

    /// Defaults for [`fine_tune`]: as [`Default`] but few epochs.
    pub fn fine_tune() -> Self {
        TrainConfig {
            epochs: Self::FINE_TUNE_EPOCHS,
            ..TrainConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), TrainError> {
        let bad = |what: &str| Err(TrainError::BadConfig(what.to_string()));
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return bad("learning rate must be a positive finite number");
        }
        if self.batch_size == 0 {
            return bad("batch size must be at least 1");
        }
        if !self.init_scale.is_finite() || self.init_scale <= 0.0 {
            return bad("init scale must be a positive finite number");
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrainError {
    #[error("invalid training config: {0}")]
    BadConfig(String),
    #[error("net expects {net}-dimensional input, dataset provides {data}")]
    InputDimMismatch { net: usize, data: usize },
    #[error("net outputs {net} values, labels have width {labels}")]
    OutputWidthMismatch { net: usize, labels: usize },
    #[error("cannot train on an empty dataset")]
    EmptyDataset,
    #[error("initialization dims are invalid: {0}")]
    BadDims(String),
    #[error("training diverged: non-finite mean loss at epoch {epoch}")]
    Diverged { epoch: usize },
    #[error(transparent)]
    Net(#[from] MlpError),
}

/// Fresh all-sigmoid net with weights and thresholds drawn uniformly from
/// `[-init_scale, init_scale]`, filled layer by layer (each layer's weight
/// rows in row-major order, then its thresholds) for reproducibility.
pub fn init_mlp(layer_dims: &[usize], init_scale: f64, seed: u64) -> Result<Mlp, TrainError> {
    if layer_dims.len() < 2 {
        return Err(TrainError::BadDims(format!(
            "need at least an input and an output layer, got {} layer sizes",
            layer_dims.len()
        )));
    }
    if !init_scale.is_finite() || init_scale <= 0.0 {
        return Err(TrainError::BadConfig(
            "init scale must be a positive finite number".to_string(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = Vec::new();
    let mut thresholds = Vec::new();
    let mut acts = Vec::new();
    for pair in layer_dims.windows(2) {
        let (n_in, n_out) = (pair[0], pair[1]);
        let mut w = Matrix::zeros(n_out, n_in);
        for v in w.data_mut() {
            *v = rng.gen_range(-init_scale..=init_scale);
        }
        weights.push(w);
        thresholds.push(
            (0..n_out)
                .map(|_| rng.gen_range(-init_scale..=init_scale))
                .collect(),
        );
        acts.push(Activation::Sigmoid);
    }
    Mlp::new_uniform(weights, thresholds, &acts)
        .map_err(|e| TrainError::BadDims(e.to_string()))
}

/// Per-parameter gradients of one net, shaped like the net's parameters.
struct Gradients {
    weights: Vec<Matrix>,
    thresholds: Vec<Vec<f64>>,
}

impl Gradients {
    fn zeros_like(net: &Mlp) -> Self {
        Gradients {
            weights: net
                .weights()
                .iter()
                .map(|w| Matrix::zeros(w.rows(), w.cols()))
                .collect(),
            thresholds: net.thresholds().iter().map(|t| vec![0.0; t.len()]).collect(),
        }
    }

    fn clear(&mut self) {
        for w in &mut self.weights {
            w.data_mut().fill(0.0);
        }
        for t in &mut self.thresholds {
            t.fill(0.0);
        }
    }
}

/// Loss of the net on one `(x, y)` sample. BCE is the unclamped
/// `−Σ yⱼ ln ŷⱼ + (1−yⱼ) ln(1−ŷⱼ)`; MSE is `½ Σ (ŷⱼ−yⱼ)²`.
pub fn sample_loss(net: &Mlp, x: &[f64], y: &[f64], loss: Loss) -> Result<f64, TrainError> {
    let output = net.forward(x)?;
    Ok(loss_of(&output, y, loss))
}

fn loss_of(output: &[f64], y: &[f64], loss: Loss) -> f64 {
    match loss {
        Loss::Bce => output
            .iter()
            .zip(y)
            .map(|(o, t)| {
                let mut l = 0.0;
                if *t != 0.0 {
                    l -= t * o.ln();
                }
                if *t != 1.0 {
                    l -= (1.0 - t) * (1.0 - o).ln();
                }
                l
            })
            .sum(),
        Loss::Mse => {
            0.5 * output
                .iter()
                .zip(y)
                .map(|(o, t)| (o - t) * (o - t))
                .sum::<f64>()
        }
    }
}

/// Backpropagated gradients of [`sample_loss`] with respect to every weight
/// and threshold, as `(d_weights, d_thresholds)` shaped like the net.
pub fn sample_gradients(
    net: &Mlp,
    x: &[f64],
    y: &[f64],
    loss: Loss,
) -> Result<(Vec<Matrix>, Vec<Vec<f64>>), TrainError> {
    let mut grads = Gradients::zeros_like(net);
    backprop_into(net, x, y, loss, &mut grads)?;
    Ok((grads.weights, grads.thresholds))
}

/// Forward + backward pass for one sample, accumulating into `grads`;
/// returns the sample's loss.
fn backprop_into(
    net: &Mlp,
    x: &[f64],
    y: &[f64],
    loss: Loss,
    grads: &mut Gradients,
) -> Result<f64, TrainError> {
    if x.len() != net.input_dim() {
        return Err(TrainError::InputDimMismatch {
            net: net.input_dim(),
            data: x.len(),
        });
    }
    if y.len() != net.output_dim() {
        return Err(TrainError::OutputWidthMismatch {
            net: net.output_dim(),
            labels: y.len(),
        });
    }
    let n_maps = net.depth() - 1;

    // Forward pass, keeping every layer's pre-activations and activations.
    let mut activations: Vec<Vec<f64>> = Vec::with_capacity(n_maps + 1);
    let mut pre_activations: Vec<Vec<f64>> = Vec::with_capacity(n_maps);
    activations.push(x.to_vec());
    for i in 0..n_maps {
        let w = &net.weights()[i];
        let theta = &net.thresholds()[i];
        let tags = &net.activations()[i];
        let prev = &activations[i];
        let mut z = Vec::with_capacity(w.rows());
        let mut a = Vec::with_capacity(w.rows());
        for j in 0..w.rows() {
            let mut acc = 0.0;
            for (wk, pk) in w.row(j).iter().zip(prev) {
                acc += wk * pk;
            }
            acc -= theta[j];
            z.push(acc);
            a.push(tags[j].apply(acc));
        }
        pre_activations.push(z);
        activations.push(a);
    }

    let output = &activations[n_maps];
    let sample_loss = loss_of(output, y, loss);

    // Output delta dL/dz for the final map.
    let final_tags = &net.activations()[n_maps - 1];
    let mut delta: Vec<f64> = output
        .iter()
        .zip(y)
        .enumerate()
        .map(|(j, (o, t))| match loss {
            // For a sigmoid output, dL/dz of BCE collapses to (ŷ − y).
            Loss::Bce if final_tags[j] == Activation::Sigmoid => o - t,
            Loss::Bce => {
                let denominator = o * (1.0 - o);
                (o - t) / denominator
                    * final_tags[j].derivative_from_output(pre_activations[n_maps - 1][j], *o)
            }
            Loss::Mse => {
                (o - t) * final_tags[j].derivative_from_output(pre_activations[n_maps - 1][j], *o)
            }
        })
        .collect();

    // Backward pass: parameter gradients, then the previous layer's delta.
    for i in (0..n_maps).rev() {
        let w = &net.weights()[i];
        let prev = &activations[i];
        for (j, dj) in delta.iter().enumerate() {
            let grad_row = grads.weights[i].row_mut(j);
            for (g, pk) in grad_row.iter_mut().zip(prev) {
                *g += dj * pk;
            }
            grads.thresholds[i][j] -= dj;
        }
        if i > 0 {
            let tags = &net.activations()[i - 1];
            let mut prev_delta = vec![0.0; prev.len()];
            for (j, dj) in delta.iter().enumerate() {
                for (k, wjk) in w.row(j).iter().enumerate() {
                    prev_delta[k] += dj * wjk;
                }
            }
            for (k, d) in prev_delta.iter_mut().enumerate() {
                *d *= tags[k].derivative_from_output(pre_activations[i - 1][k], activations[i][k]);
            }
            delta = prev_delta;
        }
    }
    Ok(sample_loss)
}

/// Trains a copy of `net` for `cfg.epochs` epochs of mini-batch SGD and
/// returns it with a report carrying the loss history and the final
/// training-set accuracy (scalar rule for one output, argmax otherwise).
/// The input net is not modified; identical inputs give bit-identical
/// results.
pub fn train_sgd(
    net: &Mlp,
    data: &LabeledDataset,
    cfg: &TrainConfig,
) -> Result<(Mlp, EvalReport), TrainError> {
    cfg.validate()?;
    if net.input_dim() != data.input_dim() {
        return Err(TrainError::InputDimMismatch {
            net: net.input_dim(),
            data: data.input_dim(),
        });
    }
    if net.output_dim() != data.label_width() {
        return Err(TrainError::OutputWidthMismatch {
            net: net.output_dim(),
            labels: data.label_width(),
        });
    }
    if data.n_rows() == 0 {
        return Err(TrainError::EmptyDataset);
    }

    let mut current = net.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..data.n_rows()).collect();
    let mut grads = Gradients::zeros_like(net);
    let mut history = Vec::with_capacity(cfg.epochs);

    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            grads.clear();
            for &row in batch {
                epoch_loss +=
                    backprop_into(&current, data.point(row), data.label(row), cfg.loss, &mut grads)?;
            }
            let scale = cfg.learning_rate / batch.len() as f64;
            for i in 0..grads.weights.len() {
                let (w, theta) = current.map_params_mut(i);
                for (v, g) in w.data_mut().iter_mut().zip(grads.weights[i].data()) {
                    *v -= scale * g;
                }
                for (t, g) in theta.iter_mut().zip(&grads.thresholds[i]) {
                    *t -= scale * g;
                }
            }
        }
        let mean_loss = epoch_loss / data.n_rows() as f64;
        if !mean_loss.is_finite() {
            return Err(TrainError::Diverged { epoch });
        }
        history.push((epoch, mean_loss));
    }

    let mut report = if data.label_width() == 1 {
        accuracy_scalar(&current, data)
    } else {
        accuracy_argmax(&current, data)
    }
    .map_err(|e| TrainError::BadConfig(e.to_string()))?;
    report.loss_history = history;
    Ok((current, report))
}

/// [`train_sgd`] under a different name for touching up composed nets;
/// pair it with [`TrainConfig::fine_tune`] for the short default schedule.
pub fn fine_tune(
    net: &Mlp,
    data: &LabeledDataset,
    cfg: &TrainConfig,
) -> Result<(Mlp, EvalReport), TrainError> {
    train_sgd(net, data, cfg)
}
