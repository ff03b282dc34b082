//! CLI error classification onto the fixed exit-code scheme:
//! 2 = configuration, 3 = computation, 4 = data.

use gaussianize::data::DataError;
use gaussianize::fewshot::FewshotError;
use gaussianize::stats::StatsError;
use gaussianize::transforms::TransformError;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Compute(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute(_) => 3,
            CliError::Data(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Compute(m) | CliError::Data(m) => m,
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        CliError::Compute(e.to_string())
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        CliError::Compute(e.to_string())
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        match e {
            DataError::InvalidSpec(_) => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<FewshotError> for CliError {
    fn from(e: FewshotError) -> Self {
        match e {
            FewshotError::InsufficientData { .. } | FewshotError::InsufficientClasses { .. } => {
                CliError::Data(e.to_string())
            }
            FewshotError::InvalidSpec(_) => CliError::Config(e.to_string()),
            FewshotError::Data(inner) => inner.into(),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(format!("i/o error: {e}"))
    }
}
