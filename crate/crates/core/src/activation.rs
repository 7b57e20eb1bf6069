//! Pointwise activation functions.

use core::fmt;

/// The logistic sigmoid `1 / (1 + e^{-z})`.
///
/// Saturates to exactly `0.0` below `z = -500` and to exactly `1.0` above
/// `z = 500` so that `e^{-z}` can never overflow. Within `[-500, 500]` the
/// plain formula is used unchanged.
pub fn sigmoid(z: f64) -> f64 {
    if z < -SATURATION_CUTOFF {
        0.0
    } else if z > SATURATION_CUTOFF {
        1.0
    } else {
        1.0 / (1.0 + libm::exp(-z))
    }
}

/// `max(0, z)`.
pub fn relu(z: f64) -> f64 {
    if z > 0.0 {
        z
    } else {
        0.0
    }
}

const SATURATION_CUTOFF: f64 = 500.0;

/// Activation applied by a single neuron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Activation {
    Sigmoid,
    Relu,
}

impl Activation {
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Sigmoid => sigmoid(z),
            Activation::Relu => relu(z),
        }
    }

    /// Derivative with respect to the pre-activation `z`, expressed through
    /// the already-computed output `y = apply(z)`.
    ///
    /// For the sigmoid this is `y (1 - y)`. For ReLU the subgradient at
    /// `z = 0` is taken as `0`.
    pub fn derivative_from_output(self, z: f64, y: f64) -> f64 {
        match self {
            Activation::Sigmoid => y * (1.0 - y),
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Sigmoid => "sigmoid",
            Activation::Relu => "relu",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "sigmoid" => Some(Activation::Sigmoid),
            "relu" => Some(Activation::Relu),
            _ => None,
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
