//! The Gaussian Sampling trainer: transform the support set, estimate one
//! Gaussian per class, draw `p` points per class (`N * p` in total — a
//! factor K fewer than sampling per support point), then fit the linear
//! classifier on sampled plus support features.

use ndarray::{Array2, Axis};
use rand::Rng;

use crate::stats::{estimate_classwise_gaussian, sample_mvg};
use crate::transforms::Transform;

use super::classifier::{train_logistic_regression, TrainedModel};
use super::{ClassifierConfig, EpisodeSpec, FewshotError, LabeledFeatures, TrainOutcome};

/// Gaussian Sampling settings. `regularization` is added to every classwise
/// covariance diagonal before sampling; with K-shot support the raw estimate
/// has rank at most K - 1, so some ridge is needed for sampling to be
/// well-posed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GsConfig {
    pub regularization: f64,
    pub classifier: ClassifierConfig,
}

impl Default for GsConfig {
    fn default() -> Self {
        GsConfig {
            regularization: 0.1,
            classifier: ClassifierConfig::default(),
        }
    }
}

pub fn train_gaussian_sampling<R: Rng + ?Sized>(
    support: &LabeledFeatures,
    spec: &EpisodeSpec,
    transform: Transform,
    config: &GsConfig,
    rng: &mut R,
) -> Result<TrainOutcome, FewshotError> {
    if !(config.regularization >= 0.0) {
        return Err(FewshotError::InvalidSpec(format!(
            "regularization must be non-negative, got {}",
            config.regularization
        )));
    }
    let n_way = spec.n_way();
    let dim = support.features.ncols();
    let transformed = transform_rows(&support.features, transform)?;

    let mut training_rows = vec![transformed.clone()];
    let mut training_labels = support.labels.clone();
    let mut sampled_points = 0usize;

    for class in 0..n_way {
        let member_rows: Vec<usize> = support
            .labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == class).then_some(i))
            .collect();
        if member_rows.is_empty() {
            return Err(FewshotError::InsufficientData {
                class: format!("episode class {class}"),
                needed: 1,
                available: 0,
            });
        }
        if spec.p() == 0 {
            continue;
        }
        let class_features = transformed.select(Axis(0), &member_rows);
        let gaussian = estimate_classwise_gaussian(class_features.view())?;
        let drawn = sample_mvg(&gaussian, spec.p(), config.regularization, rng)?;
        sampled_points += drawn.samples.nrows();
        training_labels.extend(std::iter::repeat_n(class, drawn.samples.nrows()));
        training_rows.push(drawn.samples);
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

    let classifier =
        train_logistic_regression(features.view(), &training_labels, n_way, &config.classifier)?;
    Ok(TrainOutcome {
        model: TrainedModel {
            classifier,
            transform,
        },
        sampled_points,
    })
}

pub(super) fn transform_rows(
    features: &Array2<f64>,
    transform: Transform,
) -> Result<Array2<f64>, FewshotError> {
    let mut out = features.clone();
    for mut row in out.rows_mut() {
        let transformed = transform.apply_all(row.as_slice().expect("row-major layout"))?;
        for (target, value) in row.iter_mut().zip(transformed) {
            *target = value;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array1;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    use crate::fewshot::evaluate;

    /// Two well-separated Gaussian blobs in 8 dimensions, K rows each.
    fn separable_support(k: usize, rng: &mut ChaCha8Rng) -> LabeledFeatures {
        let dim = 8;
        let mut features = Array2::zeros((2 * k, dim));
        let mut labels = Vec::new();
        for i in 0..2 * k {
            let class = i / k;
            let center = if class == 0 { 2.0 } else { 30.0 };
            for j in 0..dim {
                let z: f64 = StandardNormal.sample(rng);
                features[(i, j)] = center + 0.3 * z.abs();
            }
            labels.push(class);
        }
        LabeledFeatures { features, labels }
    }

    #[test]
    fn p_zero_trains_on_support_alone() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let support = separable_support(5, &mut rng);
        let spec = EpisodeSpec::new(2, 5, 1, 0).unwrap();
        let out = train_gaussian_sampling(
            &support,
            &spec,
            Transform::log_tukey(),
            &GsConfig::default(),
            &mut rng,
        )
        .unwrap();
        assert_eq!(out.sampled_points, 0);
    }

    #[test]
    fn budget_is_n_times_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let support = separable_support(5, &mut rng);
        let spec = EpisodeSpec::new(2, 5, 1, 37).unwrap();
        let out = train_gaussian_sampling(
            &support,
            &spec,
            Transform::log_tukey(),
            &GsConfig::default(),
            &mut rng,
        )
        .unwrap();
        assert_eq!(out.sampled_points, 2 * 37);
    }

    #[test]
    fn separable_episode_is_classified_perfectly() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let support = separable_support(5, &mut rng);
        let query = separable_support(20, &mut rng);
        let spec = EpisodeSpec::new(2, 5, 20, 100).unwrap();
        let out = train_gaussian_sampling(
            &support,
            &spec,
            Transform::log_tukey(),
            &GsConfig::default(),
            &mut rng,
        )
        .unwrap();
        let acc = evaluate(&out.model, &query).unwrap();
        assert_eq!(acc, 1.0, "separable blobs must classify perfectly");

        // nearest-class-mean oracle agrees on every query row
        let transformed = transform_rows(&query.features, Transform::log_tukey()).unwrap();
        let support_t = transform_rows(&support.features, Transform::log_tukey()).unwrap();
        let mean0 = mean_of(&support_t, &support.labels, 0);
        let mean1 = mean_of(&support_t, &support.labels, 1);
        for (row, &label) in transformed.rows().into_iter().zip(&query.labels) {
            let d0: f64 = row.iter().zip(&mean0).map(|(a, b)| (a - b).powi(2)).sum();
            let d1: f64 = row.iter().zip(&mean1).map(|(a, b)| (a - b).powi(2)).sum();
            let oracle = if d0 <= d1 { 0 } else { 1 };
            assert_eq!(oracle, label);
        }
    }

    fn mean_of(features: &Array2<f64>, labels: &[usize], class: usize) -> Array1<f64> {
        let rows: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == class).then_some(i))
            .collect();
        let selected = features.select(Axis(0), &rows);
        selected.mean_axis(Axis(0)).unwrap()
    }

    #[test]
    fn transform_errors_propagate() {
        let features = Array2::from_shape_vec((4, 1), vec![1.0, -1.0, 2.0, 3.0]).unwrap();
        let support = LabeledFeatures {
            features,
            labels: vec![0, 0, 1, 1],
        };
        let spec = EpisodeSpec::new(2, 2, 1, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let err = train_gaussian_sampling(
            &support,
            &spec,
            Transform::log_tukey(),
            &GsConfig::default(),
            &mut rng,
        )
        .unwrap_err();
        assert!(matches!(err, FewshotError::Transform(_)));
    }
}
