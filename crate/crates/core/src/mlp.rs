//! Multilayer perceptron representation and exact evaluation.
//!
//! An [`Mlp`] is a sequence of layer dimensions `(n_1, ..., n_L)` together
//! with, for each of the `L - 1` connecting maps, a weight matrix of shape
//! `n_{i+1} x n_i`, a threshold vector of length `n_{i+1}`, and one
//! activation tag per output neuron. A map computes
//! `a_{i+1}[j] = act_j(sum_k w[j][k] a_i[k] - theta[j])` - thresholds are
//! subtracted, never added, and every sign rule in the composition algebra
//! depends on that convention.
//!
//! Activations are stored per neuron rather than per map because depth
//! alignment appends identity ReLU layers to one operand only; stacking an
//! aligned net with a plain sigmoid net then mixes both activations inside
//! a single layer of the result.
//!
//! `Mlp` values are immutable after construction and safe to evaluate from
//! any number of threads.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::activation::Activation;
use crate::matrix::Matrix;

/// One-based layer index, matching the convention that layer one is the
/// input space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerIndex(usize);

impl LayerIndex {
    /// Returns `None` for zero; upper bounds depend on the network and are
    /// checked by [`Mlp::layer_space`].
    pub fn new(k: usize) -> Option<Self> {
        if k >= 1 {
            Some(LayerIndex(k))
        } else {
            None
        }
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// A single broken invariant found by [`Mlp::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Fewer than two layers.
    TooFewLayers { found: usize },
    /// A layer with zero neurons (`layer` is one-based).
    EmptyLayer { layer: usize },
    /// weights/thresholds/activations list length differs from `L - 1`.
    WrongMapCount {
        field: &'static str,
        expected: usize,
        actual: usize,
    },
    /// Weight matrix shape disagrees with the layer dimensions it connects
    /// (`map` is the one-based index of the connecting map).
    WeightShape {
        map: usize,
        expected: (usize, usize),
        actual: (usize, usize),
    },
    /// Threshold vector length disagrees with the target layer dimension.
    ThresholdLen {
        map: usize,
        expected: usize,
        actual: usize,
    },
    /// Activation tag count disagrees with the target layer dimension.
    ActivationLen {
        map: usize,
        expected: usize,
        actual: usize,
    },
    /// A NaN or infinite entry.
    NonFinite { map: usize, field: &'static str },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewLayers { found } => {
                write!(f, "network must have at least 2 layers, found {found}")
            }
            Violation::EmptyLayer { layer } => {
                write!(f, "layer {layer} has zero neurons")
            }
            Violation::WrongMapCount {
                field,
                expected,
                actual,
            } => write!(
                f,
                "{field} list must have {expected} entries (one per connecting map), found {actual}"
            ),
            Violation::WeightShape {
                map,
                expected,
                actual,
            } => write!(
                f,
                "weight matrix at layer {map} must be {}x{}, found {}x{}",
                expected.0, expected.1, actual.0, actual.1
            ),
            Violation::ThresholdLen {
                map,
                expected,
                actual,
            } => write!(
                f,
                "threshold vector at layer {map} must have length {expected}, found {actual}"
            ),
            Violation::ActivationLen {
                map,
                expected,
                actual,
            } => write!(
                f,
                "activation tags at layer {map} must have length {expected}, found {actual}"
            ),
            Violation::NonFinite { map, field } => {
                write!(f, "non-finite entry in {field} at layer {map}")
            }
        }
    }
}

/// Errors from evaluation and layer queries.
#[derive(Debug, Clone, PartialEq)]
pub enum MlpError {
    /// Input vector length differs from the input layer dimension.
    InputDimMismatch { expected: usize, actual: usize },
    /// Batch matrix column count differs from the input layer dimension.
    BatchWidthMismatch { expected: usize, actual: usize },
    /// One-based layer index outside `1..=L`.
    LayerOutOfRange { index: usize, depth: usize },
    /// Construction rejected; carries every violation found.
    Invalid(Vec<Violation>),
}

impl fmt::Display for MlpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MlpError::InputDimMismatch { expected, actual } => {
                write!(f, "input has length {actual}, network expects {expected}")
            }
            MlpError::BatchWidthMismatch { expected, actual } => {
                write!(f, "batch has {actual} columns, network expects {expected}")
            }
            MlpError::LayerOutOfRange { index, depth } => {
                write!(f, "layer index {index} out of range for a {depth}-layer network")
            }
            MlpError::Invalid(violations) => {
                write!(f, "invalid network:")?;
                for v in violations {
                    write!(f, " [{v}]")?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for MlpError {}

/// A multilayer perceptron. See the module docs for the representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub(crate) layer_dims: Vec<usize>,
    pub(crate) weights: Vec<Matrix>,
    pub(crate) thresholds: Vec<Vec<f64>>,
    pub(crate) activations: Vec<Vec<Activation>>,
}

impl Mlp {
    /// Builds and validates a network, deriving the layer dimensions from
    /// the weight shapes.
    pub fn new(
        weights: Vec<Matrix>,
        thresholds: Vec<Vec<f64>>,
        activations: Vec<Vec<Activation>>,
    ) -> Result<Self, MlpError> {
        let mut layer_dims = Vec::with_capacity(weights.len() + 1);
        if let Some(first) = weights.first() {
            layer_dims.push(first.cols());
            for w in &weights {
                layer_dims.push(w.rows());
            }
        }
        let net = Mlp::from_parts_unchecked(layer_dims, weights, thresholds, activations);
        let violations = net.validate();
        if violations.is_empty() {
            Ok(net)
        } else {
            Err(MlpError::Invalid(violations))
        }
    }

    /// As [`Mlp::new`] but with a single activation tag per connecting map,
    /// applied to every neuron of that map.
    pub fn new_uniform(
        weights: Vec<Matrix>,
        thresholds: Vec<Vec<f64>>,
        activations: &[Activation],
    ) -> Result<Self, MlpError> {
        let expanded = weights
            .iter()
            .zip(activations)
            .map(|(w, act)| vec![*act; w.rows()])
            .collect();
        if activations.len() != weights.len() {
            return Err(MlpError::Invalid(vec![Violation::WrongMapCount {
                field: "activations",
                expected: weights.len(),
                actual: activations.len(),
            }]));
        }
        Mlp::new(weights, thresholds, expanded)
    }

    /// Assembles a network without checking any invariant. Used by file
    /// parsing and tests that need to diagnose broken nets via
    /// [`Mlp::validate`]; evaluation of an invalid net may panic.
    pub fn from_parts_unchecked(
        layer_dims: Vec<usize>,
        weights: Vec<Matrix>,
        thresholds: Vec<Vec<f64>>,
        activations: Vec<Vec<Activation>>,
    ) -> Self {
        Mlp {
            layer_dims,
            weights,
            thresholds,
            activations,
        }
    }

    /// Checks every structural invariant and returns the violations found;
    /// an empty list means the network is well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let depth = self.layer_dims.len();
        if depth < 2 {
            out.push(Violation::TooFewLayers { found: depth });
        }
        for (i, dim) in self.layer_dims.iter().enumerate() {
            if *dim == 0 {
                out.push(Violation::EmptyLayer { layer: i + 1 });
            }
        }
        let maps = depth.saturating_sub(1);
        for (field, len) in [
            ("weights", self.weights.len()),
            ("thresholds", self.thresholds.len()),
            ("activations", self.activations.len()),
        ] {
            if len != maps {
                out.push(Violation::WrongMapCount {
                    field,
                    expected: maps,
                    actual: len,
                });
            }
        }
        for (i, w) in self.weights.iter().enumerate().take(maps) {
            let expected = (self.layer_dims[i + 1], self.layer_dims[i]);
            let actual = (w.rows(), w.cols());
            if expected != actual {
                out.push(Violation::WeightShape {
                    map: i + 1,
                    expected,
                    actual,
                });
            }
            if !w.data().iter().all(|v| v.is_finite()) {
                out.push(Violation::NonFinite {
                    map: i + 1,
                    field: "weights",
                });
            }
        }
        for (i, th) in self.thresholds.iter().enumerate().take(maps) {
            let expected = self.layer_dims.get(i + 1).copied().unwrap_or(0);
            if th.len() != expected {
                out.push(Violation::ThresholdLen {
                    map: i + 1,
                    expected,
                    actual: th.len(),
                });
            }
            if !th.iter().all(|v| v.is_finite()) {
                out.push(Violation::NonFinite {
                    map: i + 1,
                    field: "thresholds",
                });
            }
        }
        for (i, acts) in self.activations.iter().enumerate().take(maps) {
            let expected = self.layer_dims.get(i + 1).copied().unwrap_or(0);
            if acts.len() != expected {
                out.push(Violation::ActivationLen {
                    map: i + 1,
                    expected,
                    actual: acts.len(),
                });
            }
        }
        out
    }

    /// Number of layers `L` (the input space counts).
    pub fn depth(&self) -> usize {
        self.layer_dims.len()
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    pub fn input_dim(&self) -> usize {
        self.layer_dims[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.layer_dims.last().unwrap()
    }

    pub fn weights(&self) -> &[Matrix] {
        &self.weights
    }

    pub fn thresholds(&self) -> &[Vec<f64>] {
        &self.thresholds
    }

    pub fn activations(&self) -> &[Vec<Activation>] {
        &self.activations
    }

    /// Mutable access to one affine map's parameters, for in-place value
    /// updates such as gradient steps. Shapes cannot change through the
    /// returned references.
    ///
    /// # Panics
    ///
    /// Panics if `map_index >= depth() - 1`.
    pub fn map_params_mut(&mut self, map_index: usize) -> (&mut Matrix, &mut [f64]) {
        (
            &mut self.weights[map_index],
            self.thresholds[map_index].as_mut_slice(),
        )
    }

    pub fn parameter_count(&self) -> usize {
        self.weights
            .iter()
            .map(|w| w.rows() * w.cols())
            .sum::<usize>()
            + self.thresholds.iter().map(Vec::len).sum::<usize>()
    }

    /// Dimension of the `k`-th layer, one-based.
    pub fn layer_space(&self, k: LayerIndex) -> Result<usize, MlpError> {
        let idx = k.get();
        if idx > self.depth() {
            return Err(MlpError::LayerOutOfRange {
                index: idx,
                depth: self.depth(),
            });
        }
        Ok(self.layer_dims[idx - 1])
    }

    /// Evaluates the network on one input vector.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>, MlpError> {
        if x.len() != self.input_dim() {
            return Err(MlpError::InputDimMismatch {
                expected: self.input_dim(),
                actual: x.len(),
            });
        }
        let mut a = x.to_vec();
        for i in 0..self.weights.len() {
            a = self.apply_map(i, &a);
        }
        Ok(a)
    }

    /// Evaluates the network on every row of `xs`. Row `i` of the result is
    /// exactly `forward` applied to row `i`; both paths share the same
    /// arithmetic.
    pub fn forward_batch(&self, xs: &Matrix) -> Result<Matrix, MlpError> {
        if xs.cols() != self.input_dim() {
            return Err(MlpError::BatchWidthMismatch {
                expected: self.input_dim(),
                actual: xs.cols(),
            });
        }
        let mut data = Vec::with_capacity(xs.rows() * self.output_dim());
        for row in xs.iter_rows() {
            let mut a = row.to_vec();
            for i in 0..self.weights.len() {
                a = self.apply_map(i, &a);
            }
            data.extend_from_slice(&a);
        }
        Ok(Matrix::from_flat(xs.rows(), self.output_dim(), data).expect("row width is fixed"))
    }

    fn apply_map(&self, i: usize, a: &[f64]) -> Vec<f64> {
        let w = &self.weights[i];
        let th = &self.thresholds[i];
        let acts = &self.activations[i];
        let mut out = Vec::with_capacity(w.rows());
        for j in 0..w.rows() {
            let mut z = 0.0;
            for (wk, ak) in w.row(j).iter().zip(a) {
                z += wk * ak;
            }
            z -= th[j];
            out.push(acts[j].apply(z));
        }
        out
    }

    /// True when every neuron of the final connecting map is a sigmoid.
    pub fn final_map_all_sigmoid(&self) -> bool {
        self.activations
            .last()
            .is_some_and(|acts| acts.iter().all(|a| *a == Activation::Sigmoid))
    }

    /// True when the connecting map `i` (zero-based) is an identity ReLU
    /// layer: identity weights, zero thresholds, ReLU everywhere. These are
    /// exactly the layers produced by depth extension.
    pub fn is_extension_map(&self, i: usize) -> bool {
        self.weights[i].is_identity()
            && self.thresholds[i].iter().all(|t| *t == 0.0)
            && self.activations[i].iter().all(|a| *a == Activation::Relu)
    }

    /// True when every output coordinate is guaranteed to lie in `[0, 1]`:
    /// the final map is all-sigmoid, or it is a chain of identity ReLU
    /// extension maps over an all-sigmoid map. Identity ReLU layers pass
    /// sigmoid outputs through unchanged, so the guarantee survives them.
    pub fn output_in_unit_interval(&self) -> bool {
        let mut i = self.weights.len();
        while i > 0 {
            i -= 1;
            if self.activations[i].iter().all(|a| *a == Activation::Sigmoid) {
                return true;
            }
            if !self.is_extension_map(i) {
                return false;
            }
        }
        false
    }
}
