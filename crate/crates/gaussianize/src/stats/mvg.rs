//! Multivariate Gaussian estimation and sampling.
//!
//! Covariances estimated from K-shot support sets have rank at most K - 1,
//! so the sampler escalates a diagonal jitter until the Cholesky
//! factorization succeeds and reports the jitter it settled on.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::StatsError;

/// Jitter escalation schedule: first attempt adds nothing, then powers of
/// ten from `JITTER_START` up to and including `JITTER_MAX`.
pub const JITTER_START: f64 = 1e-6;
pub const JITTER_MAX: f64 = 1e-2;

/// Mean vector and symmetric covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivariateGaussian {
    mean: Array1<f64>,
    covariance: Array2<f64>,
}

impl MultivariateGaussian {
    /// Builds a distribution, symmetrizing the covariance as
    /// `(S + S^T) / 2`. Rejects shape mismatches, asymmetry beyond 1e-9 and
    /// negative diagonal entries.
    pub fn new(mean: Array1<f64>, covariance: Array2<f64>) -> Result<Self, StatsError> {
        let d = mean.len();
        if covariance.nrows() != d || covariance.ncols() != d {
            return Err(StatsError::DimensionMismatch(format!(
                "mean has dimension {d} but covariance is {}x{}",
                covariance.nrows(),
                covariance.ncols()
            )));
        }
        let mut max_gap = 0.0_f64;
        for i in 0..d {
            for j in (i + 1)..d {
                max_gap = max_gap.max((covariance[(i, j)] - covariance[(j, i)]).abs());
            }
        }
        if max_gap >= 1e-9 {
            return Err(StatsError::DomainError(format!(
                "covariance is asymmetric by {max_gap}"
            )));
        }
        let symmetrized = 0.5 * (&covariance + &covariance.t());
        if let Some(i) = (0..d).find(|&i| symmetrized[(i, i)] < 0.0) {
            return Err(StatsError::DomainError(format!(
                "covariance diagonal entry {i} is negative: {}",
                symmetrized[(i, i)]
            )));
        }
        Ok(MultivariateGaussian {
            mean,
            covariance: symmetrized,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &Array1<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &Array2<f64> {
        &self.covariance
    }
}

/// Samples drawn from a covariance that may have needed jitter to factorize.
#[derive(Debug, Clone)]
pub struct MvgSamples {
    /// One sample per row.
    pub samples: Array2<f64>,
    /// Diagonal jitter that made the factorization succeed (0 when none was
    /// needed); excludes any caller-supplied regularization.
    pub jitter: f64,
}

/// Column-wise mean and sample covariance (denominator n - 1) of `rows`,
/// symmetrized. A single row yields a zero covariance.
pub fn estimate_classwise_gaussian(
    rows: ArrayView2<'_, f64>,
) -> Result<MultivariateGaussian, StatsError> {
    let n = rows.nrows();
    let d = rows.ncols();
    if n == 0 || d == 0 {
        return Err(StatsError::EmptyInput);
    }
    let mean = rows.mean_axis(Axis(0)).expect("n >= 1");
    let mut covariance = Array2::zeros((d, d));
    if n >= 2 {
        let centered = &rows - &mean.view().insert_axis(Axis(0));
        covariance = centered.t().dot(&centered) / (n as f64 - 1.0);
        covariance = 0.5 * (&covariance + &covariance.t());
    }
    MultivariateGaussian::new(mean, covariance)
}

/// Draws `count` vectors from `Normal(mean, covariance + regularization * I)`
/// via Cholesky factorization. When the factorization fails the jitter
/// schedule kicks in; past [`JITTER_MAX`] the covariance is declared
/// singular. Deterministic for a fixed `rng`.
pub fn sample_mvg<R: Rng + ?Sized>(
    gaussian: &MultivariateGaussian,
    count: usize,
    regularization: f64,
    rng: &mut R,
) -> Result<MvgSamples, StatsError> {
    if count == 0 {
        return Err(StatsError::DomainError("count must be positive".into()));
    }
    if !(regularization >= 0.0) {
        return Err(StatsError::DomainError(format!(
            "regularization must be non-negative, got {regularization}"
        )));
    }
    let d = gaussian.dim();
    let mut base = gaussian.covariance.clone();
    if regularization > 0.0 {
        for i in 0..d {
            base[(i, i)] += regularization;
        }
    }

    let mut jitter = 0.0;
    let factor = loop {
        let mut attempt = base.clone();
        if jitter > 0.0 {
            for i in 0..d {
                attempt[(i, i)] += jitter;
            }
        }
        if let Some(l) = cholesky(&attempt) {
            break l;
        }
        jitter = if jitter == 0.0 {
            JITTER_START
        } else {
            jitter * 10.0
        };
        if jitter > JITTER_MAX {
            return Err(StatsError::SingularCovariance { last_jitter: JITTER_MAX });
        }
    };

    let mut samples = Array2::zeros((count, d));
    let mut z = vec![0.0; d];
    for mut row in samples.rows_mut() {
        for value in z.iter_mut() {
            *value = StandardNormal.sample(rng);
        }
        for i in 0..d {
            let mut acc = gaussian.mean[i];
            for k in 0..=i {
                acc += factor[(i, k)] * z[k];
            }
            row[i] = acc;
        }
    }
    Ok(MvgSamples { samples, jitter })
}

/// Lower-triangular Cholesky factor of a symmetric matrix, or `None` when
/// the matrix is not positive definite.
fn cholesky(matrix: &Array2<f64>) -> Option<Array2<f64>> {
    let d = matrix.nrows();
    let mut l = Array2::<f64>::zeros((d, d));
    for i in 0..d {
        for j in 0..=i {
            let mut sum = matrix[(i, j)];
            for k in 0..j {
                sum -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return None;
                }
                l[(i, i)] = sum.sqrt();
            } else {
                l[(i, j)] = sum / l[(j, j)];
            }
        }
    }
    Some(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identical_rows_give_zero_covariance() {
        let rows = array![[1.0, 2.0], [1.0, 2.0]];
        let g = estimate_classwise_gaussian(rows.view()).unwrap();
        assert_eq!(g.mean(), &array![1.0, 2.0]);
        assert_eq!(g.covariance(), &Array2::zeros((2, 2)));
    }

    #[test]
    fn two_point_variance() {
        let rows = array![[0.0, 0.0], [2.0, 0.0]];
        let g = estimate_classwise_gaussian(rows.view()).unwrap();
        assert_eq!(g.mean(), &array![1.0, 0.0]);
        assert_eq!(g.covariance(), &array![[2.0, 0.0], [0.0, 0.0]]);
    }

    #[test]
    fn single_row_is_a_point_mass() {
        let rows = array![[3.0, -1.0, 4.0]];
        let g = estimate_classwise_gaussian(rows.view()).unwrap();
        assert_eq!(g.mean(), &array![3.0, -1.0, 4.0]);
        assert_eq!(g.covariance(), &Array2::zeros((3, 3)));
    }

    #[test]
    fn one_dimensional_sanity() {
        let g = MultivariateGaussian::new(array![0.0], array![[1.0]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let out = sample_mvg(&g, 100_000, 0.0, &mut rng).unwrap();
        assert_eq!(out.jitter, 0.0);
        let xs: Vec<f64> = out.samples.column(0).to_vec();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let std = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!(mean.abs() < 0.02, "mean = {mean}");
        assert!((std - 1.0).abs() < 0.02, "std = {std}");
    }

    #[test]
    fn round_trips_a_known_three_dimensional_gaussian() {
        let mean = array![1.0, -2.0, 0.5];
        let cov = array![[2.0, 0.6, 0.2], [0.6, 1.5, -0.3], [0.2, -0.3, 0.8]];
        let g = MultivariateGaussian::new(mean.clone(), cov.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let out = sample_mvg(&g, 100_000, 0.0, &mut rng).unwrap();
        let est = estimate_classwise_gaussian(out.samples.view()).unwrap();

        let diff = est.covariance() - &cov;
        let rel = frob(&diff) / frob(&cov);
        assert!(rel < 0.05, "relative Frobenius error {rel}");
        for i in 0..3 {
            assert_abs_diff_eq!(est.mean()[i], mean[i], epsilon = 0.03);
        }
    }

    #[test]
    fn rank_deficient_five_shot_covariance_samples_with_small_jitter() {
        // 5 support vectors in 64 dimensions: rank <= 4 < 64.
        let d = 64;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut support = Array2::zeros((5, d));
        for mut row in support.rows_mut() {
            for v in row.iter_mut() {
                *v = StandardNormal.sample(&mut rng);
            }
        }
        let g = estimate_classwise_gaussian(support.view()).unwrap();
        let out = sample_mvg(&g, 100, 0.0, &mut rng).unwrap();
        assert!(out.jitter > 0.0 && out.jitter <= 1e-4, "jitter = {}", out.jitter);
        assert_eq!(out.samples.nrows(), 100);
    }

    #[test]
    fn zero_covariance_collapses_to_the_mean() {
        let d = 4;
        let mean = array![5.0, -1.0, 0.0, 2.5];
        let g = MultivariateGaussian::new(mean.clone(), Array2::zeros((d, d))).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let out = sample_mvg(&g, 1, 0.0, &mut rng).unwrap();
        let tol = 1e-2 * (d as f64).sqrt();
        for i in 0..d {
            assert!(
                (out.samples[(0, i)] - mean[i]).abs() <= tol,
                "component {i}: {} vs {}",
                out.samples[(0, i)],
                mean[i]
            );
        }
    }

    #[test]
    fn regularization_is_reported_separately_from_jitter() {
        let g = MultivariateGaussian::new(array![0.0, 0.0], Array2::zeros((2, 2))).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        // with explicit regularization no jitter is needed
        let out = sample_mvg(&g, 10, 0.5, &mut rng).unwrap();
        assert_eq!(out.jitter, 0.0);
    }

    #[test]
    fn impossible_covariance_is_singular() {
        // a diagonal of -1 cannot be rescued by 1e-2 jitter
        let g = MultivariateGaussian {
            mean: array![0.0, 0.0],
            covariance: array![[-1.0, 0.0], [0.0, -1.0]],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        assert!(matches!(
            sample_mvg(&g, 1, 0.0, &mut rng),
            Err(StatsError::SingularCovariance { .. })
        ));
    }

    #[test]
    fn constructor_validates_shape_and_symmetry() {
        assert!(MultivariateGaussian::new(array![0.0], Array2::zeros((2, 2))).is_err());
        let asym = array![[1.0, 0.5], [0.2, 1.0]];
        assert!(MultivariateGaussian::new(array![0.0, 0.0], asym).is_err());
        let neg_diag = array![[-0.5, 0.0], [0.0, 1.0]];
        assert!(MultivariateGaussian::new(array![0.0, 0.0], neg_diag).is_err());
        // small asymmetry below the tolerance is symmetrized away
        let nearly = array![[1.0, 0.5 + 1e-12], [0.5, 1.0]];
        let g = MultivariateGaussian::new(array![0.0, 0.0], nearly).unwrap();
        assert_eq!(g.covariance()[(0, 1)], g.covariance()[(1, 0)]);
    }

    #[test]
    fn deterministic_for_a_fixed_seed() {
        let g = MultivariateGaussian::new(array![1.0, 2.0], array![[1.0, 0.3], [0.3, 2.0]])
            .unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(99);
        let mut b = ChaCha8Rng::seed_from_u64(99);
        let one = sample_mvg(&g, 50, 0.1, &mut a).unwrap();
        let two = sample_mvg(&g, 50, 0.1, &mut b).unwrap();
        assert_eq!(one.samples, two.samples);
    }

    fn frob(m: &Array2<f64>) -> f64 {
        m.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}
