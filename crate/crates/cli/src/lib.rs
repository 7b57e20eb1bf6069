//! Std companion to `mlpalg-core`: geometric shapes and samplers, SGD
//! training of characteristic nets, evaluation rules, the on-disk network
//! format, demo pipelines, and the `mlpalg` command-line interface.

pub mod cli;
pub mod dataset;
pub mod demo;
pub mod error;
pub mod eval;
pub mod netfile;
pub mod sample;
pub mod seeds;
pub mod shape;
pub mod theorem;
pub mod train;
