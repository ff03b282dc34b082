//! Gaussianization transforms and Gaussian-sampling few-shot classification.
//!
//! The crate has four layers:
//!
//! - [`transforms`]: element-wise transforms (Tukey ladder, log, Box-Cox,
//!   Yeo-Johnson, Log-Tukey) with maximum-likelihood lambda fitting.
//! - [`stats`]: how Gaussian-like a sample is — moments, skewness,
//!   Wasserstein-1 distance to the moment-matched Gaussian, KDE curves —
//!   plus multivariate Gaussian estimation and sampling.
//! - [`data`]: feature-file ingestion, the bundled Iris columns, and seeded
//!   synthetic generators.
//! - [`fewshot`]: N-way-K-shot episodes, the Gaussian Sampling trainer, the
//!   distribution-calibration baseline, and the multi-trial protocol.
//!
//! Everything is deterministic given explicit seeds; no hidden global RNG.

// `!(x > 0.0)` style guards are deliberate: unlike `x <= 0.0` they also
// reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod fewshot;
pub mod stats;
pub mod transforms;

pub use transforms::{PowerFamily, Transform, TransformError};
