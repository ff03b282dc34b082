//! Feature-file and split-manifest reading and writing.
//!
//! Feature files are UTF-8 CSV: optional `#` directive lines (currently just
//! `# non_negative`), then a header `label,f0,...,f{d-1}`, then one row per
//! sample. The split manifest assigns every class to exactly one partition,
//! one `class_name,{base|validation|novel}` line per class.
//!
//! `save_features` is the canonical writer: loading its output and saving it
//! again reproduces the bytes exactly.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use ndarray::Array2;

use super::{DataError, FeatureDataset, Split};

pub fn load_features(
    features_path: &Path,
    split_path: &Path,
) -> Result<FeatureDataset, DataError> {
    let text = fs::read_to_string(features_path)?;
    let mut lines = text.lines().enumerate().peekable();

    let mut non_negative = false;
    while let Some((_, line)) = lines.peek() {
        let trimmed = line.trim();
        if let Some(directive) = trimmed.strip_prefix('#') {
            if directive.trim() == "non_negative" {
                non_negative = true;
            }
            lines.next();
        } else {
            break;
        }
    }

    let (header_line_no, header) = lines
        .next()
        .ok_or_else(|| DataError::ParseError {
            line: 1,
            field: 1,
            message: "missing header line".into(),
        })?;
    let header_fields: Vec<&str> = header.trim_end().split(',').collect();
    if header_fields.first() != Some(&"label") || header_fields.len() < 2 {
        return Err(DataError::ParseError {
            line: header_line_no + 1,
            field: 1,
            message: "header must be 'label,f0,...'".into(),
        });
    }
    let dim = header_fields.len() - 1;

    let mut class_names: Vec<String> = Vec::new();
    let mut class_index: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut values = Vec::new();
    let mut data_row = 0usize;

    for (line_no, line) in lines {
        let trimmed = line.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        data_row += 1;
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != dim + 1 {
            return Err(DataError::ParseError {
                line: line_no + 1,
                field: fields.len(),
                message: format!("expected {} fields, found {}", dim + 1, fields.len()),
            });
        }
        let name = fields[0].to_string();
        let label = *class_index.entry(name.clone()).or_insert_with(|| {
            class_names.push(name);
            class_names.len() - 1
        });
        labels.push(label);
        for (i, raw) in fields[1..].iter().enumerate() {
            let value: f64 = raw.trim().parse().map_err(|e| DataError::ParseError {
                line: line_no + 1,
                field: i + 2,
                message: format!("'{raw}': {e}"),
            })?;
            if !value.is_finite() {
                return Err(DataError::ValidationError {
                    row: data_row,
                    message: format!("non-finite value '{raw}' in feature {i}"),
                });
            }
            values.push(value);
        }
    }
    if data_row == 0 {
        return Err(DataError::ParseError {
            line: header_line_no + 2,
            field: 1,
            message: "no data rows".into(),
        });
    }
    let features = Array2::from_shape_vec((data_row, dim), values)
        .expect("row-major construction matches counted rows");

    let splits = load_split_manifest(split_path, &class_names)?;
    FeatureDataset::new(features, labels, class_names, splits, non_negative)
}

fn load_split_manifest(path: &Path, class_names: &[String]) -> Result<Vec<Split>, DataError> {
    let text = fs::read_to_string(path)?;
    let mut assigned: HashMap<&str, Split> = HashMap::new();
    for (line_no, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (name, split_word) = trimmed.split_once(',').ok_or_else(|| DataError::ParseError {
            line: line_no + 1,
            field: 1,
            message: "expected 'class_name,split'".into(),
        })?;
        let split: Split = split_word
            .trim()
            .parse()
            .map_err(|message| DataError::SplitError(format!("line {}: {message}", line_no + 1)))?;
        if assigned.insert(name.trim(), split).is_some() {
            return Err(DataError::SplitError(format!(
                "class '{}' assigned to more than one partition",
                name.trim()
            )));
        }
    }
    let mut splits = Vec::with_capacity(class_names.len());
    for name in class_names {
        let split = assigned.remove(name.as_str()).ok_or_else(|| {
            DataError::SplitError(format!("class '{name}' missing from the split manifest"))
        })?;
        splits.push(split);
    }
    if let Some(orphan) = assigned.keys().next() {
        return Err(DataError::SplitError(format!(
            "class '{orphan}' in the split manifest has no feature rows"
        )));
    }
    Ok(splits)
}

/// Writes the canonical representation of `dataset`: directives, header and
/// rows in stored order, floats in shortest round-trip form, split manifest
/// in class order.
pub fn save_features(
    dataset: &FeatureDataset,
    features_path: &Path,
    split_path: &Path,
) -> Result<(), DataError> {
    let mut out = String::new();
    if dataset.non_negative() {
        out.push_str("# non_negative\n");
    }
    out.push_str("label");
    for j in 0..dataset.dim() {
        out.push_str(&format!(",f{j}"));
    }
    out.push('\n');
    for (row, &label) in dataset.labels().iter().enumerate() {
        out.push_str(dataset.class_name(label));
        for &value in dataset.feature_row(row).iter() {
            out.push_str(&format!(",{value}"));
        }
        out.push('\n');
    }
    let mut file = fs::File::create(features_path)?;
    file.write_all(out.as_bytes())?;

    let mut manifest = String::new();
    for class in 0..dataset.n_classes() {
        manifest.push_str(&format!(
            "{},{}\n",
            dataset.class_name(class),
            dataset.split_of(class).as_str()
        ));
    }
    let mut file = fs::File::create(split_path)?;
    file.write_all(manifest.as_bytes())?;
    Ok(())
}
