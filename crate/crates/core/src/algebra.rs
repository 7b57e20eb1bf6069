//! Weight-level composition of networks.
//!
//! Every operation here is a pure function from networks to a new network;
//! operands are never mutated. The constructions work directly on weight
//! matrices and threshold vectors, so the results are exact: the composed
//! network reproduces the stated closed form up to ordinary floating-point
//! rounding, with no retraining involved.
//!
//! Two stacking schemes cover all combining operations:
//!
//! * shared input - the operands read the same input space; their first
//!   weight matrices are stacked vertically and every later map becomes a
//!   diagonal block. Used by [`sum`], [`conjunction`], and [`o_product`].
//! * concatenated input - the operands read disjoint slices of a combined
//!   input space; every map, including the first, becomes a diagonal block.
//!   Used by [`i_product`].
//!
//! The sum/product family then appends one sigmoid output neuron whose row
//! is `lambda (1, ..., 1)`; the threshold of that neuron decides the logic.
//! With operand outputs near `{0, 1}` and a threshold of `0.5 lambda` the
//! new neuron fires when at least one operand fires (soft OR); a threshold
//! of `(m - 0.5) lambda` over `m` operands requires all of them (soft AND).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::activation::Activation;
use crate::matrix::Matrix;
use crate::mlp::Mlp;

/// Gain `lambda` on the combining output neuron. Larger values push the
/// soft logic closer to hard boolean behaviour; the default of `20` keeps
/// `sigma(0.5 lambda)` within `5e-5` of saturation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sharpness(f64);

impl Sharpness {
    pub const DEFAULT: f64 = 20.0;

    pub fn new(lambda: f64) -> Result<Self, AlgebraError> {
        if lambda.is_finite() && lambda > 0.0 {
            Ok(Sharpness(lambda))
        } else {
            Err(AlgebraError::InvalidSharpness { value: lambda })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Sharpness {
    fn default() -> Self {
        Sharpness(Self::DEFAULT)
    }
}

/// Why a composition was rejected.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraError {
    /// Fewer operands than the operation supports.
    TooFewOperands { required: usize, actual: usize },
    /// Operand depth differs from the first operand's depth.
    DepthMismatch {
        operand: usize,
        expected: usize,
        actual: usize,
    },
    /// Operand input dimension differs from the first operand's.
    InputDimMismatch {
        operand: usize,
        expected: usize,
        actual: usize,
    },
    /// Operand output layer is not one-dimensional.
    NonScalarOutput { operand: usize, output_dim: usize },
    /// The final connecting map must be all-sigmoid (complement negates it).
    FinalMapNotSigmoid { operand: usize },
    /// Operand outputs are not guaranteed to lie in `[0, 1]`.
    OutputNotUnitRange { operand: usize },
    /// Complement needs at least three layers.
    TooShallow { depth: usize, min: usize },
    /// One-based component index outside `1..=n_L`.
    ComponentOutOfRange { index: usize, output_dim: usize },
    /// `lambda` must be finite and positive.
    InvalidSharpness { value: f64 },
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::TooFewOperands { required, actual } => {
                write!(f, "operation needs at least {required} operand(s), got {actual}")
            }
            AlgebraError::DepthMismatch {
                operand,
                expected,
                actual,
            } => write!(
                f,
                "operand {operand} has {actual} layers, expected {expected}; align depths first"
            ),
            AlgebraError::InputDimMismatch {
                operand,
                expected,
                actual,
            } => write!(
                f,
                "operand {operand} has input dimension {actual}, expected {expected}"
            ),
            AlgebraError::NonScalarOutput {
                operand,
                output_dim,
            } => write!(
                f,
                "operand {operand} has output dimension {output_dim}, expected 1"
            ),
            AlgebraError::FinalMapNotSigmoid { operand } => {
                write!(f, "operand {operand} must end in a sigmoid layer")
            }
            AlgebraError::OutputNotUnitRange { operand } => write!(
                f,
                "operand {operand} output is not guaranteed to lie in [0, 1]"
            ),
            AlgebraError::TooShallow { depth, min } => {
                write!(f, "network has {depth} layers, operation needs at least {min}")
            }
            AlgebraError::ComponentOutOfRange { index, output_dim } => write!(
                f,
                "component index {index} out of range for output dimension {output_dim}"
            ),
            AlgebraError::InvalidSharpness { value } => {
                write!(f, "sharpness must be finite and positive, got {value}")
            }
        }
    }
}

impl core::error::Error for AlgebraError {}

/// Shape summary of one composition, for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct ComposeReport {
    pub operation: &'static str,
    pub operand_dims: Vec<Vec<usize>>,
    pub result_dims: Vec<usize>,
    pub lambda: Option<f64>,
}

impl ComposeReport {
    pub fn describe(
        operation: &'static str,
        operands: &[&Mlp],
        result: &Mlp,
        lambda: Option<Sharpness>,
    ) -> Self {
        ComposeReport {
            operation,
            operand_dims: operands.iter().map(|n| n.layer_dims().to_vec()).collect(),
            result_dims: result.layer_dims().to_vec(),
            lambda: lambda.map(Sharpness::value),
        }
    }
}

impl fmt::Display for ComposeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.operation)?;
        for (i, dims) in self.operand_dims.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{dims:?}")?;
        }
        write!(f, ") -> {:?}", self.result_dims)?;
        if let Some(lambda) = self.lambda {
            write!(f, " [lambda = {lambda}]")?;
        }
        Ok(())
    }
}

/// Negates the final weight matrix and threshold vector, turning an output
/// `sigma(z)` into `sigma(-z) = 1 - sigma(z)` coordinate-wise.
pub fn complement(net: &Mlp) -> Result<Mlp, AlgebraError> {
    if net.depth() < 3 {
        return Err(AlgebraError::TooShallow {
            depth: net.depth(),
            min: 3,
        });
    }
    if !net.final_map_all_sigmoid() {
        return Err(AlgebraError::FinalMapNotSigmoid { operand: 1 });
    }
    let mut weights = net.weights().to_vec();
    let mut thresholds = net.thresholds().to_vec();
    let last = weights.len() - 1;
    weights[last] = weights[last].neg();
    for t in &mut thresholds[last] {
        *t = -*t;
    }
    Ok(Mlp::from_parts_unchecked(
        net.layer_dims().to_vec(),
        weights,
        thresholds,
        net.activations().to_vec(),
    ))
}

/// Soft OR of two networks over a shared input:
/// `sigma(lambda (n1(x) + n2(x)) - 0.5 lambda)`.
pub fn sum(n1: &Mlp, n2: &Mlp, lambda: Sharpness) -> Result<Mlp, AlgebraError> {
    multi_sum_impl(&[n1, n2], lambda)
}

/// Soft OR over `m >= 1` networks with a shared input:
/// `sigma(lambda sum_i n_i(x) - 0.5 lambda)`.
pub fn multi_sum(nets: &[Mlp], lambda: Sharpness) -> Result<Mlp, AlgebraError> {
    let refs: Vec<&Mlp> = nets.iter().collect();
    multi_sum_impl(&refs, lambda)
}

fn multi_sum_impl(nets: &[&Mlp], lambda: Sharpness) -> Result<Mlp, AlgebraError> {
    check_combinable(nets, 1, true)?;
    let parts = stack_shared_input(nets);
    Ok(append_logic_head(parts, nets.len(), lambda, 0.5 * lambda.value()))
}

/// `n1 + complement(n2)`: fires unless `n1` is off and `n2` is on. Note the
/// OR reading: a point outside both operands still fires, because the
/// complement of `n2` does. For the set-difference semantics use
/// [`set_difference`].
pub fn difference(n1: &Mlp, n2: &Mlp, lambda: Sharpness) -> Result<Mlp, AlgebraError> {
    let n2c = complement(n2)?;
    sum(n1, &n2c, lambda)
}

/// Soft AND of two networks over a shared input:
/// `sigma(lambda (n1(x) + n2(x)) - 1.5 lambda)`.
pub fn conjunction(n1: &Mlp, n2: &Mlp, lambda: Sharpness) -> Result<Mlp, AlgebraError> {
    let nets = [n1, n2];
    check_combinable(&nets, 2, true)?;
    let parts = stack_shared_input(&nets);
    Ok(append_logic_head(parts, 2, lambda, 1.5 * lambda.value()))
}

/// `conjunction(n1, complement(n2))`: fires iff `n1` fires and `n2` does
/// not. This is the construction that carves an annulus out of two disks.
pub fn set_difference(n1: &Mlp, n2: &Mlp, lambda: Sharpness) -> Result<Mlp, AlgebraError> {
    let n2c = complement(n2)?;
    conjunction(n1, &n2c, lambda)
}

/// Soft AND across a Cartesian product of input spaces: the result consumes
/// the concatenation `x1 (+) x2` and computes
/// `sigma(lambda (n1(x1) + n2(x2)) - 1.5 lambda)`.
pub fn i_product(n1: &Mlp, n2: &Mlp, lambda: Sharpness) -> Result<Mlp, AlgebraError> {
    multi_i_product_impl(&[n1, n2], lambda)
}

/// Soft AND over `m >= 1` networks with concatenated inputs:
/// `sigma(lambda sum_i n_i(x_i) - (m - 0.5) lambda)`.
///
/// The final threshold grows with the operand count; a fixed `1.5 lambda`
/// would fire as soon as any two operands do.
pub fn multi_i_product(nets: &[Mlp], lambda: Sharpness) -> Result<Mlp, AlgebraError> {
    let refs: Vec<&Mlp> = nets.iter().collect();
    multi_i_product_impl(&refs, lambda)
}

fn multi_i_product_impl(nets: &[&Mlp], lambda: Sharpness) -> Result<Mlp, AlgebraError> {
    let threshold = (nets.len() as f64 - 0.5) * lambda.value();
    multi_i_product_with_threshold_impl(nets, lambda, threshold)
}

/// As [`multi_i_product`] but with an explicit final threshold, exposing
/// the semantic knob directly: `threshold = (m - 0.5) lambda` gives m-way
/// AND, `0.5 lambda` gives m-way OR over disjoint input slices, and
/// intermediate values give k-of-m voting.
pub fn multi_i_product_with_threshold(
    nets: &[Mlp],
    lambda: Sharpness,
    threshold: f64,
) -> Result<Mlp, AlgebraError> {
    let refs: Vec<&Mlp> = nets.iter().collect();
    multi_i_product_with_threshold_impl(&refs, lambda, threshold)
}

fn multi_i_product_with_threshold_impl(
    nets: &[&Mlp],
    lambda: Sharpness,
    threshold: f64,
) -> Result<Mlp, AlgebraError> {
    check_combinable(nets, 1, false)?;
    let parts = stack_concat_input(nets);
    Ok(append_logic_head(parts, nets.len(), lambda, threshold))
}

/// Extracts output coordinate `index` (one-based) as a standalone scalar
/// network: all maps are kept except the final one, which is replaced by
/// the single matching row.
pub fn component(net: &Mlp, index: usize) -> Result<Mlp, AlgebraError> {
    let n_out = net.output_dim();
    if index == 0 || index > n_out {
        return Err(AlgebraError::ComponentOutOfRange {
            index,
            output_dim: n_out,
        });
    }
    let row = index - 1;
    let last = net.weights().len() - 1;
    let mut weights: Vec<Matrix> = net.weights()[..last].to_vec();
    let mut thresholds: Vec<Vec<f64>> = net.thresholds()[..last].to_vec();
    let mut activations: Vec<Vec<Activation>> = net.activations()[..last].to_vec();
    weights.push(
        Matrix::from_rows(&[net.weights()[last].row(row).to_vec()]).expect("one row is never ragged"),
    );
    thresholds.push(vec![net.thresholds()[last][row]]);
    activations.push(vec![net.activations()[last][row]]);

    let mut dims = net.layer_dims().to_vec();
    *dims.last_mut().unwrap() = 1;
    Ok(Mlp::from_parts_unchecked(dims, weights, thresholds, activations))
}

/// Pairs two scalar networks over a shared input into one two-output
/// network computing exactly `(n1(x), n2(x))`. No combining neuron is
/// added, so the depth does not change.
pub fn o_product(n1: &Mlp, n2: &Mlp) -> Result<Mlp, AlgebraError> {
    multi_o_product_impl(&[n1, n2])
}

/// Stacks `m >= 2` scalar networks over a shared input into one m-output
/// network with `result(x)[i] = n_i(x)`; the argmax of the result is a
/// multi-label classifier built from per-label characteristic networks.
pub fn multi_o_product(nets: &[Mlp]) -> Result<Mlp, AlgebraError> {
    let refs: Vec<&Mlp> = nets.iter().collect();
    multi_o_product_impl(&refs)
}

fn multi_o_product_impl(nets: &[&Mlp]) -> Result<Mlp, AlgebraError> {
    if nets.len() < 2 {
        return Err(AlgebraError::TooFewOperands {
            required: 2,
            actual: nets.len(),
        });
    }
    for (i, net) in nets.iter().enumerate() {
        if net.depth() != nets[0].depth() {
            return Err(AlgebraError::DepthMismatch {
                operand: i + 1,
                expected: nets[0].depth(),
                actual: net.depth(),
            });
        }
        if net.input_dim() != nets[0].input_dim() {
            return Err(AlgebraError::InputDimMismatch {
                operand: i + 1,
                expected: nets[0].input_dim(),
                actual: net.input_dim(),
            });
        }
        if net.output_dim() != 1 {
            return Err(AlgebraError::NonScalarOutput {
                operand: i + 1,
                output_dim: net.output_dim(),
            });
        }
    }
    let parts = stack_shared_input(nets);
    Ok(Mlp::from_parts_unchecked(
        parts.dims,
        parts.weights,
        parts.thresholds,
        parts.activations,
    ))
}

/// Appends an identity ReLU layer of the output dimension: identity
/// weights, zero thresholds. Because the operand's outputs lie in `[0, 1]`,
/// ReLU acts as the identity and the extended network is pointwise equal to
/// the original while being one layer deeper.
pub fn identical_extension(net: &Mlp) -> Result<Mlp, AlgebraError> {
    if !net.output_in_unit_interval() {
        return Err(AlgebraError::OutputNotUnitRange { operand: 1 });
    }
    let n_out = net.output_dim();
    let mut dims = net.layer_dims().to_vec();
    dims.push(n_out);
    let mut weights = net.weights().to_vec();
    weights.push(Matrix::identity(n_out));
    let mut thresholds = net.thresholds().to_vec();
    thresholds.push(vec![0.0; n_out]);
    let mut activations = net.activations().to_vec();
    activations.push(vec![Activation::Relu; n_out]);
    Ok(Mlp::from_parts_unchecked(dims, weights, thresholds, activations))
}

/// Extends the shallower network until both have the same number of
/// layers. Equal-depth inputs are returned unchanged. Both results are
/// pointwise identical to the corresponding inputs.
pub fn align_depths(n1: &Mlp, n2: &Mlp) -> Result<(Mlp, Mlp), AlgebraError> {
    for (i, net) in [n1, n2].iter().enumerate() {
        if !net.output_in_unit_interval() {
            return Err(AlgebraError::OutputNotUnitRange { operand: i + 1 });
        }
    }
    let mut a = n1.clone();
    let mut b = n2.clone();
    while a.depth() < b.depth() {
        a = identical_extension(&a)?;
    }
    while b.depth() < a.depth() {
        b = identical_extension(&b)?;
    }
    Ok((a, b))
}

struct StackedParts {
    dims: Vec<usize>,
    weights: Vec<Matrix>,
    thresholds: Vec<Vec<f64>>,
    activations: Vec<Vec<Activation>>,
}

/// Preconditions shared by the sum and product families. `shared_input`
/// additionally demands equal input dimensions.
fn check_combinable(
    nets: &[&Mlp],
    required: usize,
    shared_input: bool,
) -> Result<(), AlgebraError> {
    if nets.len() < required {
        return Err(AlgebraError::TooFewOperands {
            required,
            actual: nets.len(),
        });
    }
    for (i, net) in nets.iter().enumerate() {
        if net.depth() != nets[0].depth() {
            return Err(AlgebraError::DepthMismatch {
                operand: i + 1,
                expected: nets[0].depth(),
                actual: net.depth(),
            });
        }
        if shared_input && net.input_dim() != nets[0].input_dim() {
            return Err(AlgebraError::InputDimMismatch {
                operand: i + 1,
                expected: nets[0].input_dim(),
                actual: net.input_dim(),
            });
        }
        if net.output_dim() != 1 {
            return Err(AlgebraError::NonScalarOutput {
                operand: i + 1,
                output_dim: net.output_dim(),
            });
        }
        if !net.output_in_unit_interval() {
            return Err(AlgebraError::OutputNotUnitRange { operand: i + 1 });
        }
    }
    Ok(())
}

/// Stacks operands over one shared input space: first maps stacked
/// vertically, every later map block-diagonal, thresholds and activations
/// concatenated layer by layer.
fn stack_shared_input(nets: &[&Mlp]) -> StackedParts {
    let maps = nets[0].weights().len();
    let mut dims = Vec::with_capacity(maps + 1);
    dims.push(nets[0].input_dim());
    for k in 1..=maps {
        dims.push(nets.iter().map(|n| n.layer_dims()[k]).sum());
    }

    let mut weights = Vec::with_capacity(maps);
    let first: Vec<&Matrix> = nets.iter().map(|n| &n.weights()[0]).collect();
    weights.push(Matrix::vstack(&first));
    for k in 1..maps {
        let blocks: Vec<&Matrix> = nets.iter().map(|n| &n.weights()[k]).collect();
        weights.push(Matrix::block_diag(&blocks));
    }

    StackedParts {
        dims,
        weights,
        thresholds: concat_per_map(nets, maps, |n, k| &n.thresholds()[k]),
        activations: concat_per_map(nets, maps, |n, k| &n.activations()[k]),
    }
}

/// Stacks operands over disjoint slices of a concatenated input space:
/// every map, including the first, becomes block-diagonal.
fn stack_concat_input(nets: &[&Mlp]) -> StackedParts {
    let maps = nets[0].weights().len();
    let mut dims = Vec::with_capacity(maps + 1);
    for k in 0..=maps {
        dims.push(nets.iter().map(|n| n.layer_dims()[k]).sum());
    }

    let mut weights = Vec::with_capacity(maps);
    for k in 0..maps {
        let blocks: Vec<&Matrix> = nets.iter().map(|n| &n.weights()[k]).collect();
        weights.push(Matrix::block_diag(&blocks));
    }

    StackedParts {
        dims,
        weights,
        thresholds: concat_per_map(nets, maps, |n, k| &n.thresholds()[k]),
        activations: concat_per_map(nets, maps, |n, k| &n.activations()[k]),
    }
}

fn concat_per_map<T: Clone>(
    nets: &[&Mlp],
    maps: usize,
    f: impl Fn(&Mlp, usize) -> &Vec<T>,
) -> Vec<Vec<T>> {
    (0..maps)
        .map(|k| {
            let mut out = Vec::new();
            for net in nets {
                out.extend_from_slice(f(net, k));
            }
            out
        })
        .collect()
}

/// Appends the combining output neuron: weight row `lambda (1, ..., 1)`
/// over the `m` stacked scalar outputs, the given threshold, sigmoid
/// activation.
fn append_logic_head(mut parts: StackedParts, m: usize, lambda: Sharpness, threshold: f64) -> Mlp {
    parts.dims.push(1);
    parts
        .weights
        .push(Matrix::from_fn(1, m, |_, _| lambda.value()));
    parts.thresholds.push(vec![threshold]);
    parts.activations.push(vec![Activation::Sigmoid]);
    Mlp::from_parts_unchecked(parts.dims, parts.weights, parts.thresholds, parts.activations)
}
