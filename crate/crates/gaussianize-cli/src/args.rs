//! Flag-value parsing for transforms, sources and synthetic dataset specs.

use std::str::FromStr;

use gaussianize::data::{ClassMixtureSpec, ClassNoise};
use gaussianize::transforms::{Transform, DEFAULT_LOG_TUKEY_EPSILON, DEFAULT_TUKEY_LAMBDA};

/// A transform choice; Box-Cox and Yeo-Johnson may defer lambda to a
/// maximum-likelihood fit on the data at hand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformArg {
    Fixed(Transform),
    FitBoxCox,
    FitYeoJohnson,
}

impl FromStr for TransformArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let parse = |p: &str| -> Result<f64, String> {
            p.parse::<f64>()
                .map_err(|e| format!("bad parameter '{p}' for transform '{name}': {e}"))
        };
        match name.to_ascii_lowercase().as_str() {
            "none" | "identity" => Ok(TransformArg::Fixed(Transform::Identity)),
            "log" => Ok(TransformArg::Fixed(Transform::Log)),
            "tukey" => Ok(TransformArg::Fixed(Transform::Tukey {
                lambda: match param {
                    Some(p) => parse(p)?,
                    None => DEFAULT_TUKEY_LAMBDA,
                },
            })),
            "boxcox" | "box-cox" => Ok(match param {
                Some(p) => TransformArg::Fixed(Transform::BoxCox { lambda: parse(p)? }),
                None => TransformArg::FitBoxCox,
            }),
            "yeojohnson" | "yeo-johnson" => Ok(match param {
                Some(p) => TransformArg::Fixed(Transform::YeoJohnson { lambda: parse(p)? }),
                None => TransformArg::FitYeoJohnson,
            }),
            "logtukey" | "log-tukey" => Ok(TransformArg::Fixed(Transform::LogTukey {
                epsilon: match param {
                    Some(p) => parse(p)?,
                    None => DEFAULT_LOG_TUKEY_EPSILON,
                },
            })),
            other => Err(format!(
                "unknown transform '{other}' (expected none, tukey[:l], log, \
                 boxcox[:l], yeojohnson[:l] or logtukey[:eps])"
            )),
        }
    }
}

/// A scalar data source for `eval` and `density`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceArg {
    Uniform { low: f64, high: f64 },
    Exponential { mean: f64 },
    Iris { feature: usize },
}

impl SourceArg {
    pub fn label(&self) -> String {
        match self {
            SourceArg::Uniform { low, high } => format!("Uni({low},{high})"),
            SourceArg::Exponential { mean } => format!("Exp({mean})"),
            SourceArg::Iris { feature } => format!("Iris f{feature}"),
        }
    }
}

impl FromStr for SourceArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        match name.to_ascii_lowercase().as_str() {
            "uniform" | "uni" => {
                let (low, high) = match param {
                    None => (0.0, 1.0),
                    Some(p) => {
                        let (a, b) = p
                            .split_once(',')
                            .ok_or_else(|| format!("uniform wants 'low,high', got '{p}'"))?;
                        (
                            a.parse().map_err(|e| format!("bad uniform low '{a}': {e}"))?,
                            b.parse().map_err(|e| format!("bad uniform high '{b}': {e}"))?,
                        )
                    }
                };
                Ok(SourceArg::Uniform { low, high })
            }
            "exponential" | "exp" => {
                let mean = match param {
                    None => 0.5,
                    Some(p) => p.parse().map_err(|e| format!("bad exponential mean '{p}': {e}"))?,
                };
                Ok(SourceArg::Exponential { mean })
            }
            "iris" => {
                let feature = match param {
                    None => 0,
                    Some(p) => p.parse().map_err(|e| format!("bad iris feature '{p}': {e}"))?,
                };
                Ok(SourceArg::Iris { feature })
            }
            other => Err(format!(
                "unknown source '{other}' (expected uniform[:low,high], exponential[:mean] \
                 or iris[:feature])"
            )),
        }
    }
}

/// `--synthetic` value: a preset name optionally followed by `key=value`
/// overrides, e.g. `skewed,classes=30,dim=32,sigma=0.8`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticArg {
    preset: Preset,
    overrides: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Preset {
    Skewed,
    Separable,
}

impl FromStr for SyntheticArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(',');
        let preset = match parts.next().map(str::trim) {
            Some("skewed") => Preset::Skewed,
            Some("separable") => Preset::Separable,
            Some(other) => {
                return Err(format!(
                    "unknown synthetic preset '{other}' (expected skewed or separable)"
                ))
            }
            None => return Err("empty synthetic spec".into()),
        };
        let mut overrides = Vec::new();
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got '{part}'"))?;
            overrides.push((key.trim().to_string(), value.trim().to_string()));
        }
        Ok(SyntheticArg { preset, overrides })
    }
}

impl SyntheticArg {
    /// Resolves to a concrete dataset spec; `default_seed` applies unless a
    /// `seed=` override is present.
    pub fn to_spec(&self, default_seed: u64) -> Result<ClassMixtureSpec, String> {
        let mut spec = match self.preset {
            Preset::Skewed => ClassMixtureSpec::skewed(default_seed),
            Preset::Separable => ClassMixtureSpec::separable(default_seed),
        };
        for (key, value) in &self.overrides {
            let as_usize =
                || -> Result<usize, String> { value.parse().map_err(|e| format!("{key}: {e}")) };
            let as_f64 =
                || -> Result<f64, String> { value.parse().map_err(|e| format!("{key}: {e}")) };
            match key.as_str() {
                "classes" => spec.n_classes = as_usize()?,
                "dim" => spec.dim = as_usize()?,
                "per-class" | "per_class" => spec.samples_per_class = as_usize()?,
                "base" => spec.n_base = as_usize()?,
                "validation" => spec.n_validation = as_usize()?,
                "scale" => spec.mean_scale = as_f64()?,
                "sigma" => {
                    let sigma = as_f64()?;
                    spec.noise = match spec.noise {
                        ClassNoise::LogNormal { .. } => ClassNoise::LogNormal { sigma },
                        ClassNoise::HalfNormal { .. } => ClassNoise::HalfNormal { sigma },
                    };
                }
                "seed" => spec.seed = value.parse().map_err(|e| format!("{key}: {e}"))?,
                other => return Err(format!("unknown synthetic key '{other}'")),
            }
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_strings_round_trip() {
        assert_eq!(
            "none".parse::<TransformArg>().unwrap(),
            TransformArg::Fixed(Transform::Identity)
        );
        assert_eq!(
            "tukey".parse::<TransformArg>().unwrap(),
            TransformArg::Fixed(Transform::Tukey { lambda: 0.5 })
        );
        assert_eq!(
            "tukey:0.3".parse::<TransformArg>().unwrap(),
            TransformArg::Fixed(Transform::Tukey { lambda: 0.3 })
        );
        assert_eq!(
            "boxcox".parse::<TransformArg>().unwrap(),
            TransformArg::FitBoxCox
        );
        assert_eq!(
            "boxcox:0.25".parse::<TransformArg>().unwrap(),
            TransformArg::Fixed(Transform::BoxCox { lambda: 0.25 })
        );
        assert_eq!(
            "log-tukey:1e-3".parse::<TransformArg>().unwrap(),
            TransformArg::Fixed(Transform::LogTukey { epsilon: 1e-3 })
        );
        assert!("quantile".parse::<TransformArg>().is_err());
        assert!("tukey:abc".parse::<TransformArg>().is_err());
    }

    #[test]
    fn source_strings_parse_with_defaults() {
        assert_eq!(
            "uniform".parse::<SourceArg>().unwrap(),
            SourceArg::Uniform { low: 0.0, high: 1.0 }
        );
        assert_eq!(
            "exp".parse::<SourceArg>().unwrap(),
            SourceArg::Exponential { mean: 0.5 }
        );
        assert_eq!(
            "exponential:0.25".parse::<SourceArg>().unwrap(),
            SourceArg::Exponential { mean: 0.25 }
        );
        assert_eq!(
            "iris:2".parse::<SourceArg>().unwrap(),
            SourceArg::Iris { feature: 2 }
        );
        assert!("cauchy".parse::<SourceArg>().is_err());
    }

    #[test]
    fn synthetic_presets_and_overrides() {
        let arg: SyntheticArg = "skewed,classes=30,sigma=0.8,seed=9".parse().unwrap();
        let spec = arg.to_spec(42).unwrap();
        assert_eq!(spec.n_classes, 30);
        assert_eq!(spec.seed, 9);
        assert_eq!(spec.noise, ClassNoise::LogNormal { sigma: 0.8 });

        let arg: SyntheticArg = "separable".parse().unwrap();
        let spec = arg.to_spec(7).unwrap();
        assert_eq!(spec.seed, 7);
        assert_eq!(spec.mean_scale, 50.0);

        assert!("gaussian".parse::<SyntheticArg>().is_err());
        assert!("skewed,classes".parse::<SyntheticArg>().is_err());
        let arg: SyntheticArg = "skewed,mystery=1".parse().unwrap();
        assert!(arg.to_spec(1).is_err());
    }
}
