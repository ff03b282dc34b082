//! `density`: KDE of the transformed source plus the exact density of its
//! moment-matched Gaussian, both on the KDE grid, written as two two-column
//! CSV files `<out>.kde.csv` and `<out>.gaussian.csv`.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use gaussianize::stats::{gaussian_curve, kde_curve, moments};

use crate::args::{SourceArg, TransformArg};
use crate::error::CliError;
use crate::sources::{materialize, resolve_transform};

pub struct DensityOutput {
    pub kde_path: PathBuf,
    pub gaussian_path: PathBuf,
}

pub fn run(
    source: &SourceArg,
    transform_arg: TransformArg,
    n: usize,
    seed: u64,
    grid: usize,
    out_prefix: &Path,
) -> Result<DensityOutput, CliError> {
    let xs = materialize(source, n, seed)?;
    let transform = resolve_transform(transform_arg, &xs)?;
    let transformed = transform.apply_all(&xs)?;

    let kde = kde_curve(&transformed, grid)?;
    let summary = moments(&transformed)?;
    let reference = summary.matched_gaussian()?;
    let gaussian = gaussian_curve(&reference, &kde.xs);

    let kde_path = suffixed(out_prefix, "kde.csv");
    let gaussian_path = suffixed(out_prefix, "gaussian.csv");
    kde.write_csv(&mut BufWriter::new(File::create(&kde_path)?))?;
    gaussian.write_csv(&mut BufWriter::new(File::create(&gaussian_path)?))?;
    Ok(DensityOutput {
        kde_path,
        gaussian_path,
    })
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_os_string();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}
