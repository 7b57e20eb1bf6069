//! Rejection sampling of labeled geometric datasets: positives uniform over
//! a shape, negatives uniform over a sampling window minus the shape's
//! ε-neighbourhood.

use crate::dataset::{DataError, LabeledDataset};
use crate::seeds::derive_seed;
use crate::shape::Shape;
use mlpalg_core::Matrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Default inflation of the shape's bounding box when sampling negatives.
pub const DEFAULT_BBOX_MARGIN: f64 = 1.0;

/// Sampling aborts when fewer than this fraction of proposals is accepted.
pub const MIN_ACCEPTANCE_RATE: f64 = 1e-4;

/// The acceptance rate is checked every this many proposals.
const ACCEPTANCE_CHECK_INTERVAL: u64 = 100_000;

/// Positive separation between a shape and its sampled negatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epsilon(f64);

impl Epsilon {
    pub fn new(eps: f64) -> Result<Self, SampleError> {
        if !eps.is_finite() || eps <= 0.0 {
            return Err(SampleError::InvalidEpsilon(eps));
        }
        Ok(Epsilon(eps))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for Epsilon {
    fn default() -> Self {
        Epsilon(0.1)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SampleError {
    #[error("epsilon must be a positive finite number, got {0}")]
    InvalidEpsilon(f64),
    #[error("bounding-box margin {margin} must exceed epsilon {eps}")]
    MarginTooSmall { margin: f64, eps: f64 },
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("sampling window must enclose points outside the shape's ε-neighbourhood")]
    EmptyWindow,
    #[error("need at least one point per class, got n_pos={n_pos}, n_neg={n_neg}")]
    InvalidCount { n_pos: usize, n_neg: usize },
    #[error(
        "acceptance rate below {MIN_ACCEPTANCE_RATE:e} ({accepted} accepted in {attempts} attempts); \
         the target region is degenerate relative to its sampling window"
    )]
    AcceptanceRateTooLow { accepted: u64, attempts: u64 },
    #[error("shapes must share one space, got dimensions {0} and {1}")]
    MixedDimensions(usize, usize),
    #[error("need at least {required} shapes, got {actual}")]
    TooFewShapes { required: usize, actual: usize },
    #[error(transparent)]
    Data(#[from] DataError),
}

fn checked_shape(shape: &Shape) -> Result<(), SampleError> {
    shape
        .validate()
        .map_err(|e| SampleError::InvalidShape(e.to_string()))
}

fn sample_window(rng: &mut ChaCha8Rng, lo: &[f64], hi: &[f64]) -> Vec<f64> {
    lo.iter()
        .zip(hi)
        .map(|(a, b)| rng.gen_range(*a..*b))
        .collect()
}

/// Draws `count` points uniformly from the window, keeping those `accept`
/// admits; aborts if the running acceptance rate drops below
/// [`MIN_ACCEPTANCE_RATE`].
fn rejection_sample(
    lo: &[f64],
    hi: &[f64],
    count: usize,
    seed: u64,
    accept: impl Fn(&[f64]) -> bool,
) -> Result<Matrix, SampleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut attempts: u64 = 0;
    while rows.len() < count {
        attempts += 1;
        let p = sample_window(&mut rng, lo, hi);
        if accept(&p) {
            rows.push(p);
        }
        if attempts.is_multiple_of(ACCEPTANCE_CHECK_INTERVAL) {
            let rate = rows.len() as f64 / attempts as f64;
            if rate < MIN_ACCEPTANCE_RATE {
                return Err(SampleError::AcceptanceRateTooLow {
                    accepted: rows.len() as u64,
                    attempts,
                });
            }
        }
    }
    Ok(Matrix::from_rows(&rows).unwrap_or_else(|| Matrix::zeros(0, lo.len())))
}

/// `count` points uniform over the shape (rejection from its bounding box).
pub fn sample_positive(shape: &Shape, count: usize, seed: u64) -> Result<Matrix, SampleError> {
    checked_shape(shape)?;
    let (lo, hi) = shape.bounding_box();
    rejection_sample(&lo, &hi, count, seed, |p| shape.contains_raw(p))
}

/// `count` points uniform over (bounding box inflated by `bbox_margin`)
/// minus the ε-neighbourhood of the shape; every returned point has
/// distance > ε from the shape.
pub fn sample_negative(
    shape: &Shape,
    eps: Epsilon,
    bbox_margin: f64,
    count: usize,
    seed: u64,
) -> Result<Matrix, SampleError> {
    checked_shape(shape)?;
    if !bbox_margin.is_finite() || bbox_margin <= eps.get() {
        return Err(SampleError::MarginTooSmall {
            margin: bbox_margin,
            eps: eps.get(),
        });
    }
    let (lo, hi) = shape.bounding_box();
    let lo: Vec<f64> = lo.iter().map(|v| v - bbox_margin).collect();
    let hi: Vec<f64> = hi.iter().map(|v| v + bbox_margin).collect();
    rejection_sample(&lo, &hi, count, seed, |p| shape.distance_raw(p) > eps.get())
}

/// Like [`sample_negative`] but drawing from an explicit window, for demos
/// that need several shapes to share one negative-sampling region.
pub fn sample_negative_in_window(
    shape: &Shape,
    eps: Epsilon,
    window: (&[f64], &[f64]),
    count: usize,
    seed: u64,
) -> Result<Matrix, SampleError> {
    checked_shape(shape)?;
    let (lo, hi) = window;
    if lo.len() != shape.dim() || hi.len() != shape.dim() || lo.iter().zip(hi).any(|(a, b)| a >= b)
    {
        return Err(SampleError::EmptyWindow);
    }
    rejection_sample(lo, hi, count, seed, |p| shape.distance_raw(p) > eps.get())
}

fn labeled(points: Matrix, label_of: impl Fn(usize) -> Vec<f64>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let rows: Vec<Vec<f64>> = points.iter_rows().map(<[f64]>::to_vec).collect();
    let labels = (0..rows.len()).map(label_of).collect();
    (rows, labels)
}

/// Characteristic dataset of a shape: `n_pos` members labeled 1, `n_neg`
/// points at distance > ε labeled 0, deterministically shuffled.
pub fn make_characteristic_dataset(
    shape: &Shape,
    eps: Epsilon,
    n_pos: usize,
    n_neg: usize,
    seed: u64,
) -> Result<LabeledDataset, SampleError> {
    if n_pos == 0 || n_neg == 0 {
        return Err(SampleError::InvalidCount { n_pos, n_neg });
    }
    let pos = sample_positive(shape, n_pos, derive_seed(seed, 1))?;
    let neg = sample_negative(shape, eps, DEFAULT_BBOX_MARGIN, n_neg, derive_seed(seed, 2))?;
    let (mut rows, mut labels) = labeled(pos, |_| vec![1.0]);
    let (neg_rows, neg_labels) = labeled(neg, |_| vec![0.0]);
    rows.extend(neg_rows);
    labels.extend(neg_labels);
    let dataset = LabeledDataset::from_rows(&rows, &labels)?;
    Ok(dataset.shuffled(derive_seed(seed, 3)))
}

/// Characteristic dataset whose negatives come from an explicit window, so
/// several nets trained against one scene share a negative distribution.
pub fn make_characteristic_dataset_in_window(
    shape: &Shape,
    eps: Epsilon,
    window: (&[f64], &[f64]),
    n_pos: usize,
    n_neg: usize,
    seed: u64,
) -> Result<LabeledDataset, SampleError> {
    if n_pos == 0 || n_neg == 0 {
        return Err(SampleError::InvalidCount { n_pos, n_neg });
    }
    let pos = sample_positive(shape, n_pos, derive_seed(seed, 1))?;
    let neg = sample_negative_in_window(shape, eps, window, n_neg, derive_seed(seed, 2))?;
    let (mut rows, mut labels) = labeled(pos, |_| vec![1.0]);
    let (neg_rows, neg_labels) = labeled(neg, |_| vec![0.0]);
    rows.extend(neg_rows);
    labels.extend(neg_labels);
    let dataset = LabeledDataset::from_rows(&rows, &labels)?;
    Ok(dataset.shuffled(derive_seed(seed, 3)))
}

/// Shared sampling window for a family of shapes: the coordinate-wise hull
/// of their bounding boxes, inflated by `margin`.
pub fn union_window(shapes: &[Shape], margin: f64) -> (Vec<f64>, Vec<f64>) {
    let dim = shapes.first().map_or(0, Shape::dim);
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for shape in shapes {
        let (slo, shi) = shape.bounding_box();
        for i in 0..dim {
            lo[i] = lo[i].min(slo[i]);
            hi[i] = hi[i].max(shi[i]);
        }
    }
    (
        lo.iter().map(|v| v - margin).collect(),
        hi.iter().map(|v| v + margin).collect(),
    )
}

/// Characteristic dataset of a union of same-space shapes: positives drawn
/// per shape (split as evenly as the counts allow), negatives at distance
/// > ε from every shape, all sampled inside the shared union window.
pub fn make_union_dataset(
    shapes: &[Shape],
    eps: Epsilon,
    n_pos: usize,
    n_neg: usize,
    seed: u64,
) -> Result<LabeledDataset, SampleError> {
    if shapes.is_empty() {
        return Err(SampleError::TooFewShapes { required: 1, actual: 0 });
    }
    if n_pos == 0 || n_neg == 0 {
        return Err(SampleError::InvalidCount { n_pos, n_neg });
    }
    let dim = shapes[0].dim();
    for s in shapes {
        checked_shape(s)?;
        if s.dim() != dim {
            return Err(SampleError::MixedDimensions(dim, s.dim()));
        }
    }
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (i, shape) in shapes.iter().enumerate() {
        let quota = n_pos / shapes.len() + usize::from(i < n_pos % shapes.len());
        let pts = sample_positive(shape, quota, derive_seed(seed, 10 + i as u64))?;
        let (r, l) = labeled(pts, |_| vec![1.0]);
        rows.extend(r);
        labels.extend(l);
    }
    let (lo, hi) = union_window(shapes, DEFAULT_BBOX_MARGIN);
    let neg = rejection_sample(&lo, &hi, n_neg, derive_seed(seed, 20), |p| {
        shapes.iter().all(|s| s.distance_raw(p) > eps.get())
    })?;
    let (neg_rows, neg_labels) = labeled(neg, |_| vec![0.0]);
    rows.extend(neg_rows);
    labels.extend(neg_labels);
    let dataset = LabeledDataset::from_rows(&rows, &labels)?;
    Ok(dataset.shuffled(derive_seed(seed, 21)))
}

/// `k`-class dataset: `n_per_class` members of each shape, one-hot labeled
/// by shape index, deterministically shuffled.
pub fn make_multiclass_dataset(
    shapes: &[Shape],
    n_per_class: usize,
    seed: u64,
) -> Result<LabeledDataset, SampleError> {
    if shapes.len() < 2 {
        return Err(SampleError::TooFewShapes {
            required: 2,
            actual: shapes.len(),
        });
    }
    if n_per_class == 0 {
        return Err(SampleError::InvalidCount { n_pos: 0, n_neg: 1 });
    }
    let k = shapes.len();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (i, shape) in shapes.iter().enumerate() {
        let pts = sample_positive(shape, n_per_class, derive_seed(seed, 30 + i as u64))?;
        let one_hot = {
            let mut v = vec![0.0; k];
            v[i] = 1.0;
            v
        };
        let (r, l) = labeled(pts, |_| one_hot.clone());
        rows.extend(r);
        labels.extend(l);
    }
    let dataset = LabeledDataset::from_rows(&rows, &labels)?;
    Ok(dataset.shuffled(derive_seed(seed, 31)))
}
