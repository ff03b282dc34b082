//! `eval`: the transform-comparison table. For each source x transform,
//! reports the mean and standard deviation of the transformed data and its
//! Wasserstein-1 distance to the moment-matched Gaussian, marking each
//! source's minimum-distance row.

use gaussianize::stats::{moments, wasserstein1_to_gaussian};

use crate::args::{SourceArg, TransformArg};
use crate::error::CliError;
use crate::sources::{materialize, resolve_transform};
use crate::table::{fmt4, Table};

const TRANSFORMS: [(&str, TransformArg); 5] = [
    ("None", TransformArg::Fixed(gaussianize::Transform::Identity)),
    (
        "Tukey",
        TransformArg::Fixed(gaussianize::Transform::Tukey { lambda: 0.5 }),
    ),
    ("Box-Cox", TransformArg::FitBoxCox),
    ("Yeo-Johnson", TransformArg::FitYeoJohnson),
    (
        "Log-Tukey",
        TransformArg::Fixed(gaussianize::Transform::LogTukey { epsilon: 1e-4 }),
    ),
];

struct EvalRow {
    source: String,
    transform: &'static str,
    mean: f64,
    std_dev: f64,
    wasserstein: f64,
}

/// One measured row per source x transform, in table order.
fn evaluate_sources(n: usize, seed: u64) -> Result<Vec<EvalRow>, CliError> {
    let sources = [
        SourceArg::Uniform { low: 0.0, high: 1.0 },
        SourceArg::Exponential { mean: 0.5 },
        SourceArg::Iris { feature: 0 },
    ];
    let mut rows = Vec::new();
    for (i, source) in sources.iter().enumerate() {
        // distinct stream per random source
        let xs = materialize(source, n, seed.wrapping_add(i as u64))?;
        for (name, arg) in TRANSFORMS {
            let transform = resolve_transform(arg, &xs)?;
            let transformed = transform.apply_all(&xs)?;
            let summary = moments(&transformed)?;
            let reference = summary.matched_gaussian()?;
            let wasserstein = wasserstein1_to_gaussian(&transformed, &reference)?;
            rows.push(EvalRow {
                source: source.label(),
                transform: name,
                mean: summary.mean,
                std_dev: summary.std_dev,
                wasserstein,
            });
        }
    }
    Ok(rows)
}

pub fn run(n: usize, seed: u64) -> Result<Table, CliError> {
    let rows = evaluate_sources(n, seed)?;
    let mut table = Table::new(vec![
        "source",
        "transform",
        "mean",
        "std_dev",
        "wasserstein",
        "is_min",
    ]);
    for group in rows.chunks(TRANSFORMS.len()) {
        let min_index = group
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.wasserstein.total_cmp(&b.1.wasserstein))
            .map(|(i, _)| i)
            .expect("non-empty group");
        for (i, row) in group.iter().enumerate() {
            table.push_row(vec![
                row.source.clone(),
                row.transform.to_string(),
                fmt4(row.mean),
                fmt4(row.std_dev),
                fmt4(row.wasserstein),
                (i == min_index).to_string(),
            ]);
        }
    }
    Ok(table)
}
