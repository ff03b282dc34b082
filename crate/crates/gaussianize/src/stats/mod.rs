//! Distributional measurement and multivariate Gaussian sampling.
//!
//! Everything here is pure computation: moments and skewness, the 1-D
//! Wasserstein distance to a moment-matched Gaussian, kernel density curves,
//! and Cholesky-based sampling from (possibly rank-deficient) covariance
//! estimates.

mod kde;
mod mvg;
mod normal;
mod wasserstein;

pub use kde::{gaussian_curve, kde_curve, silverman_bandwidth, DensityCurve};
pub use mvg::{estimate_classwise_gaussian, sample_mvg, MultivariateGaussian, MvgSamples};
pub use normal::{gaussian_pdf, gaussian_quantile};
pub use wasserstein::wasserstein1_to_gaussian;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("empty input")]
    EmptyInput,
    #[error("invalid Gaussian reference: sigma must be positive, got {sigma}")]
    InvalidReference { sigma: f64 },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("covariance not factorizable even at jitter {last_jitter}")]
    SingularCovariance { last_jitter: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Mean, sample standard deviation and adjusted Fisher-Pearson skewness of a
/// sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub mean: f64,
    pub std_dev: f64,
    pub skewness: f64,
    pub n: usize,
}

impl MomentSummary {
    /// The Gaussian with the same mean and variance as the sample, the
    /// reference every diagnostic in this crate compares against.
    pub fn matched_gaussian(&self) -> Result<GaussianRef, StatsError> {
        GaussianRef::new(self.mean, self.std_dev)
    }
}

/// A 1-D Gaussian reference `Normal(mu, sigma^2)` with `sigma > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianRef {
    mu: f64,
    sigma: f64,
}

impl GaussianRef {
    pub fn new(mu: f64, sigma: f64) -> Result<Self, StatsError> {
        if !(sigma > 0.0) || !sigma.is_finite() || !mu.is_finite() {
            return Err(StatsError::InvalidReference { sigma });
        }
        Ok(GaussianRef { mu, sigma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Computes mean, sample (n-1) standard deviation and adjusted
/// Fisher-Pearson skewness. A single observation has zero spread and zero
/// skewness by convention; so does any sample with zero variance.
pub fn moments(xs: &[f64]) -> Result<MomentSummary, StatsError> {
    if xs.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let n = xs.len();
    let nf = n as f64;
    let mean = xs.iter().sum::<f64>() / nf;
    if n == 1 {
        return Ok(MomentSummary {
            mean,
            std_dev: 0.0,
            skewness: 0.0,
            n,
        });
    }
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    for &x in xs {
        let d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    let std_dev = (m2 / (nf - 1.0)).sqrt();
    m2 /= nf;
    m3 /= nf;
    let skewness = if n < 3 || m2 <= 0.0 {
        0.0
    } else {
        let g1 = m3 / m2.powf(1.5);
        g1 * (nf * (nf - 1.0)).sqrt() / (nf - 2.0)
    };
    Ok(MomentSummary {
        mean,
        std_dev,
        skewness,
        n,
    })
}
