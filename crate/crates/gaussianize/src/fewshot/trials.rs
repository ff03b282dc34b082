//! Multi-trial episodic evaluation: T trials of M tasks each, every task on
//! its own RNG stream derived from `(master_seed, trial, task)` so reports
//! reproduce bit-for-bit and tasks can run in parallel.

use rayon::prelude::*;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::FeatureDataset;
use crate::transforms::Transform;

use super::calibration::{train_distribution_calibration, BaseClassStats, DcConfig};
use super::classifier::evaluate;
use super::episode::sample_episode;
use super::gaussian_sampling::{train_gaussian_sampling, GsConfig};
use super::{EpisodeSpec, FewshotError};

/// Which trainer a trial run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Per-class sampling in Log-Tukey space (N * p points).
    GaussianSampling,
    /// Per-support-point calibrated sampling in Tukey space (N * K * p).
    DistributionCalibration,
    /// Classifier on the transformed support set alone.
    NoSampling,
}

/// Settings shared across all tasks of a run. `transform = None` picks the
/// method's own default: Log-Tukey for Gaussian Sampling, Tukey square root
/// for the calibration baseline and for no-sampling runs.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub transform: Option<Transform>,
    pub gs: GsConfig,
    pub dc: DcConfig,
}

impl RunOptions {
    fn transform_for(&self, method: Method) -> Transform {
        self.transform.unwrap_or(match method {
            Method::GaussianSampling => Transform::log_tukey(),
            Method::DistributionCalibration | Method::NoSampling => Transform::tukey_sqrt(),
        })
    }
}

/// Per-trial accuracies plus their mean and a normal-approximation 95%
/// confidence half-width across trials.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub per_trial: Vec<f64>,
    pub tasks_per_trial: usize,
    pub mean: f64,
    pub ci95_half_width: f64,
}

impl TrialReport {
    fn from_accuracies(task_accuracy: &[f64], n_trials: usize, tasks_per_trial: usize) -> Self {
        let per_trial: Vec<f64> = (0..n_trials)
            .map(|t| {
                let slice = &task_accuracy[t * tasks_per_trial..(t + 1) * tasks_per_trial];
                slice.iter().sum::<f64>() / tasks_per_trial as f64
            })
            .collect();
        let mean = per_trial.iter().sum::<f64>() / n_trials as f64;
        let ci95_half_width = if n_trials < 2 {
            0.0
        } else {
            let var = per_trial.iter().map(|a| (a - mean).powi(2)).sum::<f64>()
                / (n_trials as f64 - 1.0);
            1.96 * (var / n_trials as f64).sqrt()
        };
        TrialReport {
            per_trial,
            tasks_per_trial,
            mean,
            ci95_half_width,
        }
    }
}

// RNG stream tags: episodes share a stream across methods so that
// comparison runs see identical tasks; training draws live on their own.
const STREAM_EPISODE: u64 = 0;
const STREAM_TRAINING: u64 = 1;

/// Stable seed for `(master_seed, trial, task, stream)`, SplitMix64-style
/// mixing so neighboring tasks get unrelated streams. The master seed is
/// mixed on its own first; otherwise `(master, trial)` pairs like (1, 1)
/// and (2, 0) would alias.
pub fn task_seed(master_seed: u64, trial: u64, task: u64, stream: u64) -> u64 {
    let mut x = splitmix(master_seed);
    for word in [trial, task, stream] {
        x = splitmix(x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(word));
    }
    x
}

fn splitmix(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Runs `n_trials * tasks_per_trial` episodes of `method` and aggregates
/// per-trial accuracies. Tasks execute in parallel; results are indexed by
/// task, so the report is independent of scheduling order and bit-identical
/// across re-runs with the same `master_seed`.
pub fn run_trials(
    dataset: &FeatureDataset,
    spec: &EpisodeSpec,
    method: Method,
    n_trials: usize,
    tasks_per_trial: usize,
    master_seed: u64,
    options: &RunOptions,
) -> Result<TrialReport, FewshotError> {
    if n_trials == 0 || tasks_per_trial == 0 {
        return Err(FewshotError::InvalidSpec(
            "n_trials and tasks_per_trial must be positive".into(),
        ));
    }
    let transform = options.transform_for(method);
    let base_stats = match method {
        Method::DistributionCalibration => Some(BaseClassStats::from_dataset(dataset, transform)?),
        _ => None,
    };

    let total = n_trials * tasks_per_trial;
    let task_accuracy: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|index| {
            let trial = (index / tasks_per_trial) as u64;
            let task = (index % tasks_per_trial) as u64;
            let mut episode_rng =
                ChaCha8Rng::seed_from_u64(task_seed(master_seed, trial, task, STREAM_EPISODE));
            let episode = sample_episode(dataset, spec, &mut episode_rng)?;
            let mut train_rng =
                ChaCha8Rng::seed_from_u64(task_seed(master_seed, trial, task, STREAM_TRAINING));
            let outcome = match method {
                Method::GaussianSampling => train_gaussian_sampling(
                    &episode.support,
                    spec,
                    transform,
                    &options.gs,
                    &mut train_rng,
                )?,
                Method::DistributionCalibration => train_distribution_calibration(
                    &episode.support,
                    base_stats.as_ref().expect("built above"),
                    spec,
                    &options.dc,
                    &mut train_rng,
                )?,
                Method::NoSampling => train_gaussian_sampling(
                    &episode.support,
                    &spec.with_p(0),
                    transform,
                    &options.gs,
                    &mut train_rng,
                )?,
            };
            evaluate(&outcome.model, &episode.query)
        })
        .collect::<Result<_, _>>()?;

    Ok(TrialReport::from_accuracies(
        &task_accuracy,
        n_trials,
        tasks_per_trial,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{ClassMixtureSpec, Generated, SyntheticSpec};

    fn dataset(seed: u64) -> FeatureDataset {
        let mut spec = ClassMixtureSpec::skewed(seed);
        spec.n_classes = 12;
        spec.dim = 16;
        spec.samples_per_class = 24;
        spec.n_base = 4;
        match crate::data::generate(&SyntheticSpec::GaussianMixtureClasses(spec)).unwrap() {
            Generated::Dataset(d) => d,
            _ => unreachable!(),
        }
    }

    #[test]
    fn single_task_report_is_that_episode() {
        let ds = dataset(61);
        let spec = EpisodeSpec::new(5, 5, 5, 20).unwrap();
        let report = run_trials(
            &ds,
            &spec,
            Method::GaussianSampling,
            1,
            1,
            7,
            &RunOptions::default(),
        )
        .unwrap();
        assert_eq!(report.per_trial.len(), 1);
        assert_eq!(report.mean, report.per_trial[0]);
        assert_eq!(report.ci95_half_width, 0.0);
    }

    #[test]
    fn reports_are_bit_identical_across_runs() {
        let ds = dataset(62);
        let spec = EpisodeSpec::new(5, 5, 5, 15).unwrap();
        for method in [
            Method::GaussianSampling,
            Method::DistributionCalibration,
            Method::NoSampling,
        ] {
            let one = run_trials(&ds, &spec, method, 2, 4, 99, &RunOptions::default()).unwrap();
            let two = run_trials(&ds, &spec, method, 2, 4, 99, &RunOptions::default()).unwrap();
            assert_eq!(one, two, "{method:?}");
        }
    }

    #[test]
    fn trial_rows_and_average_have_the_expected_shape() {
        let ds = dataset(63);
        let spec = EpisodeSpec::new(5, 5, 5, 10).unwrap();
        let report = run_trials(
            &ds,
            &spec,
            Method::NoSampling,
            5,
            4,
            3,
            &RunOptions::default(),
        )
        .unwrap();
        assert_eq!(report.per_trial.len(), 5);
        assert_eq!(report.tasks_per_trial, 4);
        let mean = report.per_trial.iter().sum::<f64>() / 5.0;
        assert!((report.mean - mean).abs() < 1e-15);
        assert!(report.per_trial.iter().all(|a| (0.0..=1.0).contains(a)));
    }

    #[test]
    fn task_seed_separates_streams() {
        let a = task_seed(1, 0, 0, 0);
        let b = task_seed(1, 0, 0, 1);
        let c = task_seed(1, 0, 1, 0);
        let d = task_seed(1, 1, 0, 0);
        let e = task_seed(2, 0, 0, 0);
        let all = [a, b, c, d, e];
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                assert_ne!(all[i], all[j], "seeds {i} and {j} collide");
            }
        }
    }

    #[test]
    fn zero_counts_are_rejected() {
        let ds = dataset(64);
        let spec = EpisodeSpec::new(5, 5, 5, 0).unwrap();
        assert!(run_trials(
            &ds,
            &spec,
            Method::NoSampling,
            0,
            1,
            1,
            &RunOptions::default()
        )
        .is_err());
    }
}
