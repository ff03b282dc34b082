//! The distribution-calibration baseline: each transformed support point is
//! calibrated against the statistics of the nearest base classes, and `p`
//! points are sampled around every one of the `N * K` support points.

use ndarray::{Array2, ArrayView1, Axis};
use rand::Rng;

use crate::data::{FeatureDataset, Split};
use crate::stats::{estimate_classwise_gaussian, sample_mvg, MultivariateGaussian};
use crate::transforms::Transform;

use super::classifier::{train_logistic_regression, TrainedModel};
use super::gaussian_sampling::transform_rows;
use super::{ClassifierConfig, EpisodeSpec, FewshotError, LabeledFeatures, TrainOutcome};

/// Per-class mean and covariance of the transformed base-class features.
#[derive(Debug, Clone)]
pub struct BaseClassStats {
    stats: Vec<MultivariateGaussian>,
    transform: Transform,
}

impl BaseClassStats {
    /// Estimates one Gaussian per base class after applying `transform` to
    /// that class's rows.
    pub fn from_dataset(
        dataset: &FeatureDataset,
        transform: Transform,
    ) -> Result<Self, FewshotError> {
        let base = dataset.classes_in(Split::Base);
        if base.is_empty() {
            return Err(FewshotError::InsufficientClasses {
                split: "base",
                needed: 1,
                available: 0,
            });
        }
        let mut stats = Vec::with_capacity(base.len());
        for class in base {
            let rows = dataset.rows_of_class(class);
            let selected = dataset.features().select(Axis(0), rows);
            let transformed = transform_rows(&selected, transform)?;
            stats.push(estimate_classwise_gaussian(transformed.view())?);
        }
        Ok(BaseClassStats { stats, transform })
    }

    pub fn len(&self) -> usize {
        self.stats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stats.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.stats[0].dim()
    }

    pub fn transform(&self) -> Transform {
        self.transform
    }

    pub fn class_stats(&self) -> &[MultivariateGaussian] {
        &self.stats
    }
}

/// Calibration settings, reconstructed from the cited prior method: average
/// the support point with its `k_neighbors` nearest base-class means, use
/// the averaged neighbor covariance plus `alpha` on the diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcConfig {
    pub k_neighbors: usize,
    pub alpha: f64,
    pub classifier: ClassifierConfig,
}

impl Default for DcConfig {
    fn default() -> Self {
        DcConfig {
            k_neighbors: 2,
            alpha: 0.21,
            classifier: ClassifierConfig::default(),
        }
    }
}

pub fn train_distribution_calibration<R: Rng + ?Sized>(
    support: &LabeledFeatures,
    base: &BaseClassStats,
    spec: &EpisodeSpec,
    config: &DcConfig,
    rng: &mut R,
) -> Result<TrainOutcome, FewshotError> {
    if config.k_neighbors == 0 || config.k_neighbors > base.len() {
        return Err(FewshotError::InvalidSpec(format!(
            "k_neighbors must be in 1..={}, got {}",
            base.len(),
            config.k_neighbors
        )));
    }
    if !(config.alpha >= 0.0) {
        return Err(FewshotError::InvalidSpec(format!(
            "alpha must be non-negative, got {}",
            config.alpha
        )));
    }
    let dim = support.features.ncols();
    if base.dim() != dim {
        return Err(FewshotError::MismatchedDimensions(format!(
            "support dimension {dim} vs base statistics dimension {}",
            base.dim()
        )));
    }

    let transform = base.transform();
    let transformed = transform_rows(&support.features, transform)?;

    let mut training_rows = vec![transformed.clone()];
    let mut training_labels = support.labels.clone();
    let mut sampled_points = 0usize;

    if spec.p() > 0 {
        for (point, &label) in transformed.rows().into_iter().zip(&support.labels) {
            let calibrated = calibrate(point, base, config)?;
            let drawn = sample_mvg(&calibrated, spec.p(), 0.0, rng)?;
            sampled_points += drawn.samples.nrows();
            training_labels.extend(std::iter::repeat_n(label, drawn.samples.nrows()));
            training_rows.push(drawn.samples);
        }
    }

    let total_rows: usize = training_rows.iter().map(Array2::nrows).sum();
    let mut features = Array2::zeros((total_rows, dim));
    let mut offset = 0;
    for block in &training_rows {
        features
            .slice_mut(ndarray::s![offset..offset + block.nrows(), ..])
            .assign(block);
        offset += block.nrows();
    }

    let classifier = train_logistic_regression(
        features.view(),
        &training_labels,
        spec.n_way(),
        &config.classifier,
    )?;
    Ok(TrainOutcome {
        model: TrainedModel {
            classifier,
            transform,
        },
        sampled_points,
    })
}

/// Calibrated mean and covariance for one transformed support point:
/// nearest `k` base classes by Euclidean distance between the point and the
/// base means; mean = (point + sum of neighbor means) / (k + 1);
/// covariance = average neighbor covariance + alpha * I.
fn calibrate(
    point: ArrayView1<'_, f64>,
    base: &BaseClassStats,
    config: &DcConfig,
) -> Result<MultivariateGaussian, FewshotError> {
    let mut order: Vec<(f64, usize)> = base
        .class_stats()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let d2: f64 = g
                .mean()
                .iter()
                .zip(point.iter())
                .map(|(m, x)| (m - x) * (m - x))
                .sum();
            (d2, i)
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let nearest = &order[..config.k_neighbors];

    let dim = point.len();
    let mut mean = point.to_owned();
    let mut covariance = Array2::zeros((dim, dim));
    for &(_, idx) in nearest {
        let g = &base.class_stats()[idx];
        mean += g.mean();
        covariance += g.covariance();
    }
    mean /= (config.k_neighbors + 1) as f64;
    covariance /= config.k_neighbors as f64;
    for i in 0..dim {
        covariance[(i, i)] += config.alpha;
    }
    Ok(MultivariateGaussian::new(mean, covariance)?)
}
