//! Element-wise Gaussianization transforms.
//!
//! The family covers the Tukey ladder of powers, the plain logarithm, the
//! Box-Cox and Yeo-Johnson power transforms, and the Log-Tukey transform
//! `log(sqrt(x) + eps + 1)`, which composes a square root with a logarithm so
//! that positively skewed data is compressed twice. Box-Cox and Yeo-Johnson
//! carry a shape parameter that can be fitted by profile maximum likelihood.

use thiserror::Error;

/// Default `eps` for [`Transform::LogTukey`]; keeps `log` away from zero at
/// `x = 0` without visibly moving anything else.
pub const DEFAULT_LOG_TUKEY_EPSILON: f64 = 1e-4;

/// Default exponent for [`Transform::Tukey`] (the square-root rung).
pub const DEFAULT_TUKEY_LAMBDA: f64 = 0.5;

/// Search interval for [`fit_lambda`]. Optima of practical data fall well
/// inside; widen here if a dataset ever pins the boundary.
pub const LAMBDA_SEARCH_RANGE: (f64, f64) = (-5.0, 5.0);

/// Absolute tolerance on the fitted lambda.
pub const LAMBDA_SEARCH_TOL: f64 = 1e-5;

/// An element-wise transform together with its parameters.
///
/// Each variant is strictly increasing on its accepted input domain (Tukey
/// with `lambda > 0`; negative exponents follow the plain power formula and
/// reverse order, matching the ladder definition).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform {
    /// Leaves values untouched.
    Identity,
    /// Tukey ladder of powers: `x^lambda`, or `log(x)` at `lambda = 0`.
    Tukey { lambda: f64 },
    /// Natural logarithm, `x > 0`.
    Log,
    /// Box-Cox: `(x^lambda - 1) / lambda`, or `log(x)` at `lambda = 0`; `x > 0`.
    BoxCox { lambda: f64 },
    /// Yeo-Johnson: the Box-Cox extension that accepts any real input.
    YeoJohnson { lambda: f64 },
    /// Log-Tukey: `log(sqrt(x) + epsilon + 1)`, `x >= 0`.
    LogTukey { epsilon: f64 },
}

/// Parameterized families accepted by [`fit_lambda`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerFamily {
    BoxCox,
    YeoJohnson,
}

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("{transform}: value {value} outside domain{}", fmt_index(.index))]
    DomainError {
        transform: &'static str,
        value: f64,
        index: Option<usize>,
    },
    #[error("invalid transform parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("empty input")]
    EmptyInput,
}

fn fmt_index(index: &Option<usize>) -> String {
    match index {
        Some(i) => format!(" (element {i})"),
        None => String::new(),
    }
}

impl Transform {
    /// The square-root rung, the conventional fixed choice.
    pub fn tukey_sqrt() -> Self {
        Transform::Tukey {
            lambda: DEFAULT_TUKEY_LAMBDA,
        }
    }

    /// Log-Tukey with the default epsilon.
    pub fn log_tukey() -> Self {
        Transform::LogTukey {
            epsilon: DEFAULT_LOG_TUKEY_EPSILON,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Transform::Identity => "identity",
            Transform::Tukey { .. } => "tukey",
            Transform::Log => "log",
            Transform::BoxCox { .. } => "box-cox",
            Transform::YeoJohnson { .. } => "yeo-johnson",
            Transform::LogTukey { .. } => "log-tukey",
        }
    }

    /// Checks the parameter invariants (finite lambda, positive epsilon).
    pub fn validate(&self) -> Result<(), TransformError> {
        match *self {
            Transform::Tukey { lambda }
            | Transform::BoxCox { lambda }
            | Transform::YeoJohnson { lambda } => {
                if !lambda.is_finite() {
                    return Err(TransformError::InvalidParameter(format!(
                        "{}: lambda must be finite, got {lambda}",
                        self.name()
                    )));
                }
            }
            Transform::LogTukey { epsilon } => {
                if !(epsilon > 0.0) || !epsilon.is_finite() {
                    return Err(TransformError::InvalidParameter(format!(
                        "log-tukey: epsilon must be a positive finite value, got {epsilon}"
                    )));
                }
            }
            Transform::Identity | Transform::Log => {}
        }
        Ok(())
    }

    /// Transforms a single value.
    pub fn apply(&self, x: f64) -> Result<f64, TransformError> {
        self.validate()?;
        self.apply_at(x, None)
    }

    /// Transforms a sequence, preserving length and order. The error names
    /// the first offending element.
    pub fn apply_all(&self, xs: &[f64]) -> Result<Vec<f64>, TransformError> {
        self.validate()?;
        xs.iter()
            .enumerate()
            .map(|(i, &x)| self.apply_at(x, Some(i)))
            .collect()
    }

    fn apply_at(&self, x: f64, index: Option<usize>) -> Result<f64, TransformError> {
        let domain_err = |value: f64| TransformError::DomainError {
            transform: self.name(),
            value,
            index,
        };
        match *self {
            Transform::Identity => Ok(x),
            Transform::Log => {
                if x > 0.0 {
                    Ok(x.ln())
                } else {
                    Err(domain_err(x))
                }
            }
            Transform::Tukey { lambda } => {
                if lambda == 0.0 {
                    return if x > 0.0 { Ok(x.ln()) } else { Err(domain_err(x)) };
                }
                // sqrt is kept bit-identical with the Log-Tukey inner step,
                // and accepts x = 0 (0^0.5 = 0).
                if lambda == 0.5 {
                    return if x >= 0.0 { Ok(x.sqrt()) } else { Err(domain_err(x)) };
                }
                if lambda.fract() == 0.0 {
                    if lambda < 0.0 && x == 0.0 {
                        return Err(domain_err(x));
                    }
                    return Ok(x.powi(lambda as i32));
                }
                if x > 0.0 {
                    Ok(x.powf(lambda))
                } else {
                    Err(domain_err(x))
                }
            }
            Transform::BoxCox { lambda } => {
                if !(x > 0.0) {
                    return Err(domain_err(x));
                }
                if lambda == 0.0 {
                    Ok(x.ln())
                } else {
                    // (x^l - 1)/l via expm1 keeps precision as l -> 0.
                    Ok((lambda * x.ln()).exp_m1() / lambda)
                }
            }
            Transform::YeoJohnson { lambda } => {
                if x.is_nan() {
                    return Err(domain_err(x));
                }
                if x >= 0.0 {
                    if lambda == 0.0 {
                        Ok(x.ln_1p())
                    } else {
                        Ok((lambda * x.ln_1p()).exp_m1() / lambda)
                    }
                } else if lambda == 2.0 {
                    Ok(-(-x).ln_1p())
                } else {
                    Ok(-((2.0 - lambda) * (-x).ln_1p()).exp_m1() / (2.0 - lambda))
                }
            }
            Transform::LogTukey { epsilon } => {
                if x >= 0.0 {
                    Ok((x.sqrt() + epsilon + 1.0).ln())
                } else {
                    Err(domain_err(x))
                }
            }
        }
    }
}

/// Fits the shape parameter of `family` to `xs` by maximizing the profile
/// Gaussian log-likelihood of the transformed data (Jacobian included) over
/// [`LAMBDA_SEARCH_RANGE`], using golden-section search to
/// [`LAMBDA_SEARCH_TOL`].
pub fn fit_lambda(xs: &[f64], family: PowerFamily) -> Result<f64, TransformError> {
    let (lo, hi) = LAMBDA_SEARCH_RANGE;
    fit_lambda_in(xs, family, lo, hi)
}

/// [`fit_lambda`] with caller-chosen search bounds, for data whose optimum
/// sits outside the default interval.
pub fn fit_lambda_in(
    xs: &[f64],
    family: PowerFamily,
    lo: f64,
    hi: f64,
) -> Result<f64, TransformError> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(TransformError::InvalidParameter(format!(
            "lambda search interval [{lo}, {hi}] is not a finite range"
        )));
    }
    if xs.is_empty() {
        return Err(TransformError::EmptyInput);
    }
    if family == PowerFamily::BoxCox {
        if let Some((i, &bad)) = xs.iter().enumerate().find(|(_, &x)| !(x > 0.0)) {
            return Err(TransformError::DomainError {
                transform: "box-cox",
                value: bad,
                index: Some(i),
            });
        }
    }
    if let Some((i, &bad)) = xs.iter().enumerate().find(|(_, &x)| !x.is_finite()) {
        return Err(TransformError::DomainError {
            transform: match family {
                PowerFamily::BoxCox => "box-cox",
                PowerFamily::YeoJohnson => "yeo-johnson",
            },
            value: bad,
            index: Some(i),
        });
    }
    let first = xs[0];
    if xs.iter().all(|&x| x == first) {
        return Err(TransformError::DegenerateInput(
            "cannot fit lambda on constant data".into(),
        ));
    }

    // The data-dependent part of the log-Jacobian, independent of lambda.
    let jacobian_sum: f64 = match family {
        PowerFamily::BoxCox => xs.iter().map(|&x| x.ln()).sum(),
        PowerFamily::YeoJohnson => xs
            .iter()
            .map(|&x| x.signum() * x.abs().ln_1p())
            .sum(),
    };

    let n = xs.len() as f64;
    let log_likelihood = |lambda: f64| -> f64 {
        let transform = match family {
            PowerFamily::BoxCox => Transform::BoxCox { lambda },
            PowerFamily::YeoJohnson => Transform::YeoJohnson { lambda },
        };
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for &x in xs {
            // Domain was validated above; the scalar apply cannot fail here.
            let t = transform.apply_at(x, None).expect("validated domain");
            sum += t;
            sum_sq += t * t;
        }
        let mean = sum / n;
        let variance = (sum_sq / n - mean * mean).max(0.0);
        if variance < f64::MIN_POSITIVE {
            // Transformed values collapsed below f64 resolution; treat the
            // likelihood as unbounded-below so the search stays away.
            return f64::NEG_INFINITY;
        }
        -0.5 * n * variance.ln() + (lambda - 1.0) * jacobian_sum
    };

    Ok(golden_section_max(log_likelihood, lo, hi, LAMBDA_SEARCH_TOL))
}

/// Golden-section search for the maximum of a unimodal function on [a, b].
fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
