//! Exact weight-level algebra on multilayer perceptrons.
//!
//! This crate represents feed-forward networks explicitly - layer
//! dimensions, weight matrices, subtracted thresholds, per-neuron
//! activation tags - and composes them at the parameter level: complement,
//! soft OR/AND over shared or concatenated inputs, output pairing,
//! component extraction, and exact depth extension. Composed networks
//! reproduce their closed forms without any retraining.
//!
//! The crate is `no_std` (with `alloc`) so the algebra can run anywhere;
//! dataset synthesis, training, and file formats live in the companion
//! `mlpalg` crate.

#![no_std]

extern crate alloc;

pub mod activation;
pub mod algebra;
pub mod matrix;
pub mod mlp;

pub use activation::{relu, sigmoid, Activation};
pub use algebra::{AlgebraError, ComposeReport, Sharpness};
pub use matrix::Matrix;
pub use mlp::{LayerIndex, Mlp, MlpError, Violation};
