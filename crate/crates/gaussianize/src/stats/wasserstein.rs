//! 1-D Wasserstein-1 distance between a sample and a Gaussian reference.

use super::normal::gaussian_quantile;
use super::{GaussianRef, StatsError};

/// Wasserstein-1 distance between the empirical distribution of `xs` and
/// `Normal(mu, sigma^2)`, by quantile coupling: the sorted sample is matched
/// against the Gaussian quantiles at the midpoint grid `(i - 0.5) / n`.
///
/// Deterministic for fixed input — no sampling is involved.
pub fn wasserstein1_to_gaussian(xs: &[f64], reference: &GaussianRef) -> Result<f64, StatsError> {
    if xs.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let mut sorted = xs.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut total = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let p = (i as f64 + 0.5) / n;
        total += (x - gaussian_quantile(p, reference)?).abs();
    }
    Ok(total / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn draws(mu: f64, sigma: f64, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(mu, sigma).unwrap();
        (0..n).map(|_| normal.sample(&mut rng)).collect()
    }

    /// Monte-Carlo two-sample oracle: order statistics of the sample against
    /// an equally sized Gaussian draw.
    fn two_sample_oracle(xs: &[f64], reference: &GaussianRef, seed: u64) -> f64 {
        let mut a = xs.to_vec();
        a.sort_unstable_by(f64::total_cmp);
        let mut b = draws(reference.mu(), reference.sigma(), xs.len(), seed);
        b.sort_unstable_by(f64::total_cmp);
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .sum::<f64>()
            / xs.len() as f64
    }

    #[test]
    fn distance_to_itself_is_sampling_noise() {
        let xs = draws(0.0, 1.0, 10_000, 7);
        let g = GaussianRef::new(0.0, 1.0).unwrap();
        let w = wasserstein1_to_gaussian(&xs, &g).unwrap();
        assert!(w < 0.02, "w = {w}");
    }

    #[test]
    fn unit_mean_shift_costs_one() {
        let xs = draws(1.0, 1.0, 10_000, 8);
        let g = GaussianRef::new(0.0, 1.0).unwrap();
        let w = wasserstein1_to_gaussian(&xs, &g).unwrap();
        assert!((w - 1.0).abs() < 0.03, "w = {w}");
        let mc = two_sample_oracle(&xs, &g, 9);
        assert!((w - mc).abs() / mc < 0.1, "quantile {w} vs monte-carlo {mc}");
    }

    #[test]
    fn translation_covariant() {
        let xs = draws(0.3, 1.4, 2_000, 10);
        let g = GaussianRef::new(0.1, 1.4).unwrap();
        let base = wasserstein1_to_gaussian(&xs, &g).unwrap();
        let shift = 12.125;
        let moved: Vec<f64> = xs.iter().map(|x| x + shift).collect();
        let g2 = GaussianRef::new(0.1 + shift, 1.4).unwrap();
        let after = wasserstein1_to_gaussian(&moved, &g2).unwrap();
        assert!((base - after).abs() < 1e-12, "{base} vs {after}");
    }

    #[test]
    fn zero_exactly_when_sample_sits_on_the_quantiles() {
        let g = GaussianRef::new(2.0, 3.0).unwrap();
        let n = 64;
        let quantiles: Vec<f64> = (0..n)
            .map(|i| gaussian_quantile((i as f64 + 0.5) / n as f64, &g).unwrap())
            .collect();
        assert_eq!(wasserstein1_to_gaussian(&quantiles, &g).unwrap(), 0.0);
        // and perturbing any point moves it strictly above zero
        let mut bumped = quantiles;
        bumped[10] += 0.5;
        assert!(wasserstein1_to_gaussian(&bumped, &g).unwrap() > 0.0);
    }

    #[test]
    fn empty_input_is_rejected() {
        let g = GaussianRef::new(0.0, 1.0).unwrap();
        assert!(matches!(
            wasserstein1_to_gaussian(&[], &g),
            Err(StatsError::EmptyInput)
        ));
    }
}
