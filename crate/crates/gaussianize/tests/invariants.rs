//! Cross-module invariants that tie transforms, stats and the few-shot
//! trainers together.

use gaussianize::data::{generate, ClassMixtureSpec, Generated, SyntheticSpec};
use gaussianize::fewshot::{
    evaluate, run_trials, sample_episode, train_distribution_calibration,
    train_gaussian_sampling, BaseClassStats, DcConfig, EpisodeSpec, GsConfig, Method, RunOptions,
};
use gaussianize::stats::moments;
use gaussianize::transforms::Transform;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn exponential_draws(n: usize, seed: u64) -> Vec<f64> {
    match generate(&SyntheticSpec::Exponential {
        mean: 0.5,
        count: n,
        seed,
    })
    .unwrap()
    {
        Generated::Scalars(xs) => xs,
        _ => unreachable!(),
    }
}

fn skewed_dataset(seed: u64) -> gaussianize::data::FeatureDataset {
    match generate(&SyntheticSpec::GaussianMixtureClasses(ClassMixtureSpec::skewed(seed))).unwrap()
    {
        Generated::Dataset(d) => d,
        _ => unreachable!(),
    }
}

#[test]
fn log_tukey_reduces_exponential_skew_below_tukey() {
    let xs = exponential_draws(10_000, 42);
    let tukey = Transform::tukey_sqrt().apply_all(&xs).unwrap();
    let log_tukey = Transform::log_tukey().apply_all(&xs).unwrap();
    let skew_tukey = moments(&tukey).unwrap().skewness;
    let skew_log_tukey = moments(&log_tukey).unwrap().skewness;
    assert!(
        skew_log_tukey.abs() < skew_tukey.abs(),
        "log-tukey |skew| {} should be below tukey |skew| {}",
        skew_log_tukey.abs(),
        skew_tukey.abs()
    );
}

#[test]
fn sampling_budgets_differ_by_exactly_k() {
    let dataset = skewed_dataset(7);
    let spec = EpisodeSpec::new(5, 5, 15, 40).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let episode = sample_episode(&dataset, &spec, &mut rng).unwrap();

    let gs = train_gaussian_sampling(
        &episode.support,
        &spec,
        Transform::log_tukey(),
        &GsConfig::default(),
        &mut ChaCha8Rng::seed_from_u64(2),
    )
    .unwrap();
    let base = BaseClassStats::from_dataset(&dataset, Transform::tukey_sqrt()).unwrap();
    let dc = train_distribution_calibration(
        &episode.support,
        &base,
        &spec,
        &DcConfig::default(),
        &mut ChaCha8Rng::seed_from_u64(3),
    )
    .unwrap();

    assert_eq!(gs.sampled_points, spec.n_way() * spec.p());
    assert_eq!(
        dc.sampled_points,
        spec.n_way() * spec.k_shot() * spec.p()
    );
    assert_eq!(dc.sampled_points / gs.sampled_points, spec.k_shot());
}

#[test]
fn sampling_never_hurts_a_separable_problem() {
    let dataset = match generate(&SyntheticSpec::GaussianMixtureClasses(
        ClassMixtureSpec::separable(11),
    ))
    .unwrap()
    {
        Generated::Dataset(d) => d,
        _ => unreachable!(),
    };
    let base = EpisodeSpec::new(5, 5, 15, 0).unwrap();
    let with_sampling = run_trials(
        &dataset,
        &base.with_p(100),
        Method::GaussianSampling,
        1,
        20,
        5,
        &RunOptions::default(),
    )
    .unwrap();
    let without_sampling = run_trials(
        &dataset,
        &base,
        Method::GaussianSampling,
        1,
        20,
        5,
        &RunOptions::default(),
    )
    .unwrap();
    assert!(
        with_sampling.mean >= without_sampling.mean - 0.02,
        "p=100 accuracy {} fell more than 0.02 below p=0 accuracy {}",
        with_sampling.mean,
        without_sampling.mean
    );
}

#[test]
fn query_goes_through_the_training_transform() {
    // the model carries its transform, so an identity-trained and a
    // log-tukey-trained model see different query geometry
    let dataset = skewed_dataset(13);
    let spec = EpisodeSpec::new(5, 5, 15, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let episode = sample_episode(&dataset, &spec, &mut rng).unwrap();
    let trained = train_gaussian_sampling(
        &episode.support,
        &spec,
        Transform::log_tukey(),
        &GsConfig::default(),
        &mut ChaCha8Rng::seed_from_u64(5),
    )
    .unwrap();
    assert_eq!(trained.model.transform, Transform::log_tukey());
    let accuracy = evaluate(&trained.model, &episode.query).unwrap();
    assert!((0.0..=1.0).contains(&accuracy));
}
