//! `fewshot`: episodic trial runs. Comparison mode evaluates the
//! distribution-calibration baseline ("without GS") and Gaussian Sampling
//! ("with GS") on identical episode streams, so the difference column
//! isolates the method effect; a p-grid sweeps the sampling budget and
//! emits one summary row per p.

use std::path::PathBuf;

use gaussianize::data::{generate, load_features, FeatureDataset, Generated, SyntheticSpec};
use gaussianize::fewshot::{
    run_trials, DcConfig, EpisodeSpec, GsConfig, Method, RunOptions, TrialReport,
};
use gaussianize::transforms::Transform;

use crate::args::{SyntheticArg, TransformArg};
use crate::error::CliError;
use crate::table::{fmt4, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Gs,
    Dc,
    None,
    Compare,
}

pub struct FewshotParams {
    pub method: MethodArg,
    pub n_way: usize,
    pub k_shot: usize,
    pub q_query: usize,
    pub p: usize,
    pub p_grid: Option<Vec<usize>>,
    pub transform: Option<TransformArg>,
    pub alpha: f64,
    pub k_neighbors: usize,
    pub regularization: f64,
    pub trials: usize,
    pub tasks: usize,
    pub features: Option<PathBuf>,
    pub splits: Option<PathBuf>,
    pub synthetic: Option<SyntheticArg>,
    pub seed: u64,
}

pub fn run(params: &FewshotParams) -> Result<Table, CliError> {
    let dataset = load_dataset(params)?;
    let spec = EpisodeSpec::new(params.n_way, params.k_shot, params.q_query, params.p)?;
    let options = build_options(params)?;

    if let Some(grid) = &params.p_grid {
        validate_grid(grid)?;
        run_p_sweep(params, &dataset, spec, &options, grid)
    } else {
        run_single_p(params, &dataset, spec, &options)
    }
}

fn load_dataset(params: &FewshotParams) -> Result<FeatureDataset, CliError> {
    match (&params.features, &params.splits, &params.synthetic) {
        (Some(features), Some(splits), None) => Ok(load_features(features, splits)?),
        (None, None, Some(synthetic)) => {
            let spec = synthetic.to_spec(params.seed).map_err(CliError::Config)?;
            match generate(&SyntheticSpec::GaussianMixtureClasses(spec))? {
                Generated::Dataset(d) => Ok(d),
                Generated::Scalars(_) => unreachable!("class spec"),
            }
        }
        (Some(_), None, None) | (None, Some(_), None) => Err(CliError::Config(
            "--features and --splits must be given together".into(),
        )),
        (None, None, None) => Err(CliError::Config(
            "give either --features/--splits or --synthetic".into(),
        )),
        _ => Err(CliError::Config(
            "--synthetic conflicts with --features/--splits".into(),
        )),
    }
}

fn build_options(params: &FewshotParams) -> Result<RunOptions, CliError> {
    let transform: Option<Transform> = match params.transform {
        None => None,
        Some(TransformArg::Fixed(t)) => Some(t),
        Some(TransformArg::FitBoxCox) | Some(TransformArg::FitYeoJohnson) => {
            return Err(CliError::Config(
                "fewshot needs an explicit lambda, e.g. boxcox:0.5".into(),
            ))
        }
    };
    Ok(RunOptions {
        transform,
        gs: GsConfig {
            regularization: params.regularization,
            ..Default::default()
        },
        dc: DcConfig {
            k_neighbors: params.k_neighbors,
            alpha: params.alpha,
            ..Default::default()
        },
    })
}

fn validate_grid(grid: &[usize]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Config("empty p grid".into()));
    }
    if grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config(
            "p grid must be strictly increasing positive integers".into(),
        ));
    }
    Ok(())
}

fn trials(
    params: &FewshotParams,
    dataset: &FeatureDataset,
    spec: EpisodeSpec,
    options: &RunOptions,
    method: Method,
) -> Result<TrialReport, CliError> {
    Ok(run_trials(
        dataset,
        &spec,
        method,
        params.trials,
        params.tasks,
        params.seed,
        options,
    )?)
}

fn run_single_p(
    params: &FewshotParams,
    dataset: &FeatureDataset,
    spec: EpisodeSpec,
    options: &RunOptions,
) -> Result<Table, CliError> {
    match params.method {
        MethodArg::Compare => {
            let without = trials(params, dataset, spec, options, Method::DistributionCalibration)?;
            let with = trials(params, dataset, spec, options, Method::GaussianSampling)?;
            let mut table = Table::new(vec!["trial", "without_gs", "with_gs", "difference"]);
            for (i, (a, b)) in without.per_trial.iter().zip(&with.per_trial).enumerate() {
                table.push_row(vec![
                    (i + 1).to_string(),
                    fmt4(*a),
                    fmt4(*b),
                    fmt4(b - a),
                ]);
            }
            table.push_row(vec![
                "Avg".to_string(),
                fmt4(without.mean),
                fmt4(with.mean),
                fmt4(with.mean - without.mean),
            ]);
            Ok(table)
        }
        single => {
            let report = trials(params, dataset, spec, options, to_method(single))?;
            let mut table = Table::new(vec!["trial", "accuracy"]);
            for (i, accuracy) in report.per_trial.iter().enumerate() {
                table.push_row(vec![(i + 1).to_string(), fmt4(*accuracy)]);
            }
            table.push_row(vec!["Avg".to_string(), fmt4(report.mean)]);
            Ok(table)
        }
    }
}

fn run_p_sweep(
    params: &FewshotParams,
    dataset: &FeatureDataset,
    spec: EpisodeSpec,
    options: &RunOptions,
    grid: &[usize],
) -> Result<Table, CliError> {
    match params.method {
        MethodArg::Compare => {
            let mut table = Table::new(vec!["p", "without_gs", "with_gs", "difference"]);
            for &p in grid {
                let spec = spec.with_p(p);
                let without =
                    trials(params, dataset, spec, options, Method::DistributionCalibration)?;
                let with = trials(params, dataset, spec, options, Method::GaussianSampling)?;
                table.push_row(vec![
                    p.to_string(),
                    fmt4(without.mean),
                    fmt4(with.mean),
                    fmt4(with.mean - without.mean),
                ]);
            }
            Ok(table)
        }
        single => {
            let method = to_method(single);
            let mut table = Table::new(vec!["p", "accuracy"]);
            for &p in grid {
                let report = trials(params, dataset, spec.with_p(p), options, method)?;
                table.push_row(vec![p.to_string(), fmt4(report.mean)]);
            }
            Ok(table)
        }
    }
}

fn to_method(arg: MethodArg) -> Method {
    match arg {
        MethodArg::Gs => Method::GaussianSampling,
        MethodArg::Dc => Method::DistributionCalibration,
        MethodArg::None => Method::NoSampling,
        MethodArg::Compare => unreachable!("handled by the caller"),
    }
}
