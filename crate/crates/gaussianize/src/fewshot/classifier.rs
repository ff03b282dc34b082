//! Multinomial logistic regression trained by full-batch gradient descent,
//! plus query-set evaluation.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::transforms::Transform;

use super::{FewshotError, LabeledFeatures};

/// Gradient-descent settings. The defaults converge on every training set
/// this crate produces (at most a few thousand points) and are fully
/// deterministic together with the zero initialization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2_penalty: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            learning_rate: 0.5,
            epochs: 300,
            l2_penalty: 1e-3,
        }
    }
}

/// Linear scores `W x + b` over the episode's classes.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearClassifier {
    weights: Array2<f64>,
    bias: Array1<f64>,
}

impl LinearClassifier {
    pub fn new(weights: Array2<f64>, bias: Array1<f64>) -> Result<Self, FewshotError> {
        if weights.nrows() != bias.len() {
            return Err(FewshotError::MismatchedDimensions(format!(
                "{} weight rows vs {} bias entries",
                weights.nrows(),
                bias.len()
            )));
        }
        if weights.iter().chain(bias.iter()).any(|v| !v.is_finite()) {
            return Err(FewshotError::ClassifierDivergence);
        }
        Ok(LinearClassifier { weights, bias })
    }

    pub fn n_classes(&self) -> usize {
        self.weights.nrows()
    }

    pub fn dim(&self) -> usize {
        self.weights.ncols()
    }

    pub fn scores(&self, x: ArrayView1<'_, f64>) -> Array1<f64> {
        self.weights.dot(&x) + &self.bias
    }

    /// Argmax class; ties go to the lowest class index.
    pub fn predict(&self, x: ArrayView1<'_, f64>) -> usize {
        let scores = self.scores(x);
        let mut best = 0;
        for i in 1..scores.len() {
            if scores[i] > scores[best] {
                best = i;
            }
        }
        best
    }
}

/// A classifier bound to the transform its training data went through, so
/// query features are guaranteed to be transformed the same way.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    pub classifier: LinearClassifier,
    pub transform: Transform,
}

/// L2-regularized multinomial cross-entropy of `(weights, bias)` on the
/// given data. The penalty applies to weights only.
pub fn multinomial_loss(
    weights: &Array2<f64>,
    bias: &Array1<f64>,
    features: ArrayView2<'_, f64>,
    labels: &[usize],
    l2_penalty: f64,
) -> f64 {
    let n = features.nrows() as f64;
    let logits = features.dot(&weights.t()) + bias;
    let mut loss = 0.0;
    for (row, &label) in logits.rows().into_iter().zip(labels) {
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let log_sum: f64 = row.iter().map(|&z| (z - max).exp()).sum::<f64>().ln() + max;
        loss += log_sum - row[label];
    }
    loss / n + 0.5 * l2_penalty * weights.iter().map(|w| w * w).sum::<f64>()
}

/// Gradient of [`multinomial_loss`] with respect to weights and bias.
pub fn multinomial_gradients(
    weights: &Array2<f64>,
    bias: &Array1<f64>,
    features: ArrayView2<'_, f64>,
    labels: &[usize],
    l2_penalty: f64,
) -> (Array2<f64>, Array1<f64>) {
    let (_, grad_w, grad_b) = loss_and_gradients(weights, bias, features, labels, l2_penalty);
    (grad_w, grad_b)
}

// Loss and gradients from one shared logits pass; the training loop leans
// on this so an accepted step costs the same two matrix products as plain
// gradient descent.
fn loss_and_gradients(
    weights: &Array2<f64>,
    bias: &Array1<f64>,
    features: ArrayView2<'_, f64>,
    labels: &[usize],
    l2_penalty: f64,
) -> (f64, Array2<f64>, Array1<f64>) {
    let n = features.nrows() as f64;
    let mut probs = features.dot(&weights.t()) + bias;
    let mut loss = 0.0;
    for (mut row, &label) in probs.rows_mut().into_iter().zip(labels) {
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for z in row.iter_mut() {
            *z = (*z - max).exp();
            sum += *z;
        }
        loss += sum.ln() + max - (row[label].ln() + max);
        for z in row.iter_mut() {
            *z /= sum;
        }
        row[label] -= 1.0;
    }
    loss = loss / n + 0.5 * l2_penalty * weights.iter().map(|w| w * w).sum::<f64>();
    probs /= n;
    let grad_w = probs.t().dot(&features) + &(l2_penalty * weights);
    let grad_b = probs.sum_axis(Axis(0));
    (loss, grad_w, grad_b)
}

/// Trains from zero initialization by full-batch gradient descent.
///
/// The step size starts at `config.learning_rate` and is halved whenever a
/// step would increase the loss, so the loss sequence is non-increasing and
/// the result deterministic in `(features, labels, config)`. `labels` must
/// contain at least two distinct values, each below `n_classes`.
pub fn train_logistic_regression(
    features: ArrayView2<'_, f64>,
    labels: &[usize],
    n_classes: usize,
    config: &ClassifierConfig,
) -> Result<LinearClassifier, FewshotError> {
    if features.nrows() != labels.len() {
        return Err(FewshotError::MismatchedDimensions(format!(
            "{} feature rows vs {} labels",
            features.nrows(),
            labels.len()
        )));
    }
    if features.iter().any(|v| !v.is_finite()) {
        return Err(FewshotError::ClassifierDivergence);
    }
    let mut seen = vec![false; n_classes];
    for &label in labels {
        if label >= n_classes {
            return Err(FewshotError::MismatchedDimensions(format!(
                "label {label} out of range for {n_classes} classes"
            )));
        }
        seen[label] = true;
    }
    if seen.iter().filter(|&&s| s).count() < 2 {
        return Err(FewshotError::DegenerateLabels);
    }

    let dim = features.ncols();
    let mut weights = Array2::zeros((n_classes, dim));
    let mut bias = Array1::zeros(n_classes);
    let (mut current_loss, mut grad_w, mut grad_b) =
        loss_and_gradients(&weights, &bias, features, labels, config.l2_penalty);
    if !current_loss.is_finite() {
        return Err(FewshotError::ClassifierDivergence);
    }
    let mut learning_rate = config.learning_rate;

    'epochs: for _ in 0..config.epochs {
        loop {
            let mut next_weights = weights.clone();
            next_weights.scaled_add(-learning_rate, &grad_w);
            let mut next_bias = bias.clone();
            next_bias.scaled_add(-learning_rate, &grad_b);
            let (next_loss, next_grad_w, next_grad_b) = loss_and_gradients(
                &next_weights,
                &next_bias,
                features,
                labels,
                config.l2_penalty,
            );
            if next_loss.is_finite() && next_loss <= current_loss {
                weights = next_weights;
                bias = next_bias;
                current_loss = next_loss;
                grad_w = next_grad_w;
                grad_b = next_grad_b;
                break;
            }
            learning_rate *= 0.5;
            if learning_rate < 1e-18 {
                // no descent possible at any step size: stationary point
                break 'epochs;
            }
        }
    }

    if !current_loss.is_finite() {
        return Err(FewshotError::ClassifierDivergence);
    }
    LinearClassifier::new(weights, bias)
}

/// Accuracy of `model` on a query set: each query feature goes through the
/// model's transform, then argmax scoring.
pub fn evaluate(model: &TrainedModel, query: &LabeledFeatures) -> Result<f64, FewshotError> {
    if query.is_empty() {
        return Err(FewshotError::MismatchedDimensions(
            "query set is empty".into(),
        ));
    }
    if query.features.ncols() != model.classifier.dim() {
        return Err(FewshotError::MismatchedDimensions(format!(
            "query dimension {} vs classifier dimension {}",
            query.features.ncols(),
            model.classifier.dim()
        )));
    }
    let mut correct = 0usize;
    for (row, &label) in query.features.rows().into_iter().zip(&query.labels) {
        let transformed = model
            .transform
            .apply_all(row.as_slice().expect("row-major layout"))?;
        let x = Array1::from_vec(transformed);
        if model.classifier.predict(x.view()) == label {
            correct += 1;
        }
    }
    Ok(correct as f64 / query.labels.len() as f64)
}
