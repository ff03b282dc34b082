//! Materializing scalar sources and resolving fit-deferred transforms.

use gaussianize::data::{generate, iris_feature, Generated, SyntheticSpec};
use gaussianize::transforms::{fit_lambda, PowerFamily, Transform};

use crate::args::{SourceArg, TransformArg};
use crate::error::CliError;

/// Draws (or looks up) the scalar sample a source describes. Random sources
/// honor `seed` and `n`; Iris columns are fixed and ignore both.
pub fn materialize(source: &SourceArg, n: usize, seed: u64) -> Result<Vec<f64>, CliError> {
    let spec = match *source {
        SourceArg::Uniform { low, high } => SyntheticSpec::Uniform {
            low,
            high,
            count: n,
            seed,
        },
        SourceArg::Exponential { mean } => SyntheticSpec::Exponential {
            mean,
            count: n,
            seed,
        },
        SourceArg::Iris { feature } => {
            if feature >= 4 {
                return Err(CliError::Config(format!(
                    "iris feature index must be 0..=3, got {feature}"
                )));
            }
            return Ok(iris_feature(feature)?);
        }
    };
    match generate(&spec)? {
        Generated::Scalars(xs) => Ok(xs),
        Generated::Dataset(_) => unreachable!("scalar spec"),
    }
}

/// Resolves a transform argument against concrete data, running the
/// maximum-likelihood lambda fit when the argument deferred it.
pub fn resolve_transform(arg: TransformArg, xs: &[f64]) -> Result<Transform, CliError> {
    Ok(match arg {
        TransformArg::Fixed(t) => t,
        TransformArg::FitBoxCox => Transform::BoxCox {
            lambda: fit_lambda(xs, PowerFamily::BoxCox)?,
        },
        TransformArg::FitYeoJohnson => Transform::YeoJohnson {
            lambda: fit_lambda(xs, PowerFamily::YeoJohnson)?,
        },
    })
}
