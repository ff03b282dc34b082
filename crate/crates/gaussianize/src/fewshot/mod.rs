//! Episodic few-shot classification: episode sampling, the Gaussian
//! Sampling trainer, the distribution-calibration baseline, a multinomial
//! logistic-regression classifier and the multi-trial evaluation protocol.

mod calibration;
mod classifier;
mod episode;
mod gaussian_sampling;
mod trials;

pub use calibration::{train_distribution_calibration, BaseClassStats, DcConfig};
pub use classifier::{
    evaluate, multinomial_gradients, multinomial_loss, train_logistic_regression,
    ClassifierConfig, LinearClassifier, TrainedModel,
};
pub use episode::sample_episode;
pub use gaussian_sampling::{train_gaussian_sampling, GsConfig};
pub use trials::{run_trials, task_seed, Method, RunOptions, TrialReport};

use ndarray::Array2;
use thiserror::Error;

use crate::data::DataError;
use crate::stats::StatsError;
use crate::transforms::TransformError;

#[derive(Debug, Error)]
pub enum FewshotError {
    #[error("insufficient data: class '{class}' has {available} rows, episode needs {needed}")]
    InsufficientData {
        class: String,
        needed: usize,
        available: usize,
    },
    #[error("insufficient data: {needed} {split} classes required, dataset has {available}")]
    InsufficientClasses {
        split: &'static str,
        needed: usize,
        available: usize,
    },
    #[error("classifier diverged: training loss became non-finite")]
    ClassifierDivergence,
    #[error("degenerate labels: at least two classes are required")]
    DegenerateLabels,
    #[error("dimension mismatch: {0}")]
    MismatchedDimensions(String),
    #[error("invalid episode spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Shape of one N-way-K-shot task plus the sampling budget `p`.
///
/// `p` is interpreted per class by the Gaussian Sampling trainer (`N * p`
/// points in total) and per support point by the distribution-calibration
/// baseline (`N * K * p` in total). `p = 0` trains on the support set alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpisodeSpec {
    n_way: usize,
    k_shot: usize,
    q_query: usize,
    p: usize,
}

impl EpisodeSpec {
    pub fn new(n_way: usize, k_shot: usize, q_query: usize, p: usize) -> Result<Self, FewshotError> {
        if n_way < 2 {
            return Err(FewshotError::InvalidSpec(format!(
                "n_way must be at least 2, got {n_way}"
            )));
        }
        if k_shot < 1 || q_query < 1 {
            return Err(FewshotError::InvalidSpec(format!(
                "k_shot and q_query must be positive, got {k_shot} and {q_query}"
            )));
        }
        Ok(EpisodeSpec {
            n_way,
            k_shot,
            q_query,
            p,
        })
    }

    /// The standard benchmark shape: 5-way, 5-shot, 15 queries, p = 150.
    pub fn five_way_five_shot() -> Self {
        EpisodeSpec {
            n_way: 5,
            k_shot: 5,
            q_query: 15,
            p: 150,
        }
    }

    pub fn n_way(&self) -> usize {
        self.n_way
    }

    pub fn k_shot(&self) -> usize {
        self.k_shot
    }

    pub fn q_query(&self) -> usize {
        self.q_query
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn with_p(mut self, p: usize) -> Self {
        self.p = p;
        self
    }
}

/// Feature rows paired with episode-local labels in `0..n_way`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledFeatures {
    pub features: Array2<f64>,
    pub labels: Vec<usize>,
}

impl LabeledFeatures {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// One N-way-K-shot task. Labels are episode-local; `class_ids` maps them
/// back to dataset classes. Support and query never share a dataset row.
#[derive(Debug, Clone, PartialEq)]
pub struct Episode {
    pub support: LabeledFeatures,
    pub query: LabeledFeatures,
    pub class_ids: Vec<usize>,
}

/// A trained classifier together with the sampled-point count the trainer
/// actually drew, for budget accounting.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: TrainedModel,
    /// Instrumented count of Gaussian-sampled training points (excludes the
    /// support set itself).
    pub sampled_points: usize,
}
