//! Dataset ingestion, bundled Iris measurements and synthetic generators.

mod io;
mod iris;
mod synthetic;

pub use io::{load_features, save_features};
pub use iris::{iris_feature, IRIS};
pub use synthetic::{
    generate, ClassMixtureSpec, ClassNoise, Generated, SyntheticSpec,
};

use ndarray::{Array2, ArrayView1, ArrayView2};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("parse error at line {line}, field {field}: {message}")]
    ParseError {
        line: usize,
        field: usize,
        message: String,
    },
    #[error("split error: {0}")]
    SplitError(String),
    #[error("validation error at row {row}: {message}")]
    ValidationError { row: usize, message: String },
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("index {index} out of range (len {len})")]
    IndexError { index: usize, len: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which partition a class belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Base,
    Validation,
    Novel,
}

impl Split {
    pub fn as_str(&self) -> &'static str {
        match self {
            Split::Base => "base",
            Split::Validation => "validation",
            Split::Novel => "novel",
        }
    }
}

impl std::str::FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "base" => Ok(Split::Base),
            "validation" => Ok(Split::Validation),
            "novel" => Ok(Split::Novel),
            other => Err(format!(
                "unknown split '{other}' (expected base, validation or novel)"
            )),
        }
    }
}

/// Labeled feature vectors with a per-class base/validation/novel split.
///
/// Construction validates everything once; afterwards the dataset is
/// immutable and freely shareable across threads. Each class belongs to
/// exactly one partition by construction.
#[derive(Debug, Clone)]
pub struct FeatureDataset {
    features: Array2<f64>,
    labels: Vec<usize>,
    class_names: Vec<String>,
    splits: Vec<Split>,
    non_negative: bool,
    rows_by_class: Vec<Vec<usize>>,
}

impl FeatureDataset {
    /// Validates shapes, finiteness and (when flagged) non-negativity, then
    /// indexes rows by class. `labels[i]` indexes into `class_names`, and
    /// `splits` assigns one partition per class.
    pub fn new(
        features: Array2<f64>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        splits: Vec<Split>,
        non_negative: bool,
    ) -> Result<Self, DataError> {
        if labels.len() != features.nrows() {
            return Err(DataError::ValidationError {
                row: 0,
                message: format!(
                    "{} labels for {} feature rows",
                    labels.len(),
                    features.nrows()
                ),
            });
        }
        if splits.len() != class_names.len() {
            return Err(DataError::SplitError(format!(
                "{} split assignments for {} classes",
                splits.len(),
                class_names.len()
            )));
        }
        for (row, feature_row) in features.rows().into_iter().enumerate() {
            for &value in feature_row.iter() {
                if !value.is_finite() {
                    return Err(DataError::ValidationError {
                        row: row + 1,
                        message: format!("non-finite feature value {value}"),
                    });
                }
                if non_negative && value < 0.0 {
                    return Err(DataError::ValidationError {
                        row: row + 1,
                        message: format!(
                            "negative value {value} in a dataset flagged non_negative"
                        ),
                    });
                }
            }
        }
        let mut rows_by_class = vec![Vec::new(); class_names.len()];
        for (row, &label) in labels.iter().enumerate() {
            if label >= class_names.len() {
                return Err(DataError::ValidationError {
                    row: row + 1,
                    message: format!("label index {label} out of range"),
                });
            }
            rows_by_class[label].push(row);
        }
        Ok(FeatureDataset {
            features,
            labels,
            class_names,
            splits,
            non_negative,
            rows_by_class,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.features.nrows()
    }

    pub fn dim(&self) -> usize {
        self.features.ncols()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn non_negative(&self) -> bool {
        self.non_negative
    }

    pub fn features(&self) -> ArrayView2<'_, f64> {
        self.features.view()
    }

    pub fn feature_row(&self, row: usize) -> ArrayView1<'_, f64> {
        self.features.row(row)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_name(&self, class: usize) -> &str {
        &self.class_names[class]
    }

    pub fn split_of(&self, class: usize) -> Split {
        self.splits[class]
    }

    /// Class indices in `split`, ascending.
    pub fn classes_in(&self, split: Split) -> Vec<usize> {
        (0..self.class_names.len())
            .filter(|&c| self.splits[c] == split)
            .collect()
    }

    /// Row indices of all samples in `class`, in file/generation order.
    pub fn rows_of_class(&self, class: usize) -> &[usize] {
        &self.rows_by_class[class]
    }
}
