//! Tabular data profiling: the data properties that can be measured rather
//! than asked of the expert.

mod ingest;
mod stats;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{AttributeType, Level};
use crate::engine::Thresholds;
use crate::problem::Distribution;

pub use ingest::{ingest, IngestOptions, Table};
pub use stats::{
    class_balance_ok, infer_type, jarque_bera, mean, normality, parse_number, pearson,
    scale_homogeneity, std_dev, JB_CRITICAL_05, NORMALITY_MIN_N,
};

/// Pearson |r| at or above which two attributes are flagged as correlated.
pub const CORRELATION_FLAG: f64 = 0.9;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ProfileError {
    #[error("input is empty")]
    EmptyInput,
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: expected {expected} fields, found {found}")]
    Ragged {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("label column `{0}` not found")]
    UnknownLabel(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NumericStats {
    pub mean: f64,
    pub standard_deviation: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ColumnProfile {
    pub name: String,
    /// Absent when every value is null.
    pub inferred_type: Option<AttributeType>,
    pub null_count: usize,
    pub null_fraction: f64,
    pub distinct_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<NumericStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normality: Option<Distribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorrelatedPair {
    pub left: String,
    pub right: String,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProfileReport {
    pub row_count: usize,
    pub columns: Vec<ColumnProfile>,
    pub volume_bucket: Level,
    pub missing_level: Level,
    /// Types of the feature columns (the label column is left out).
    pub data_types: BTreeSet<AttributeType>,
    pub scales_similar: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_balance_ok: Option<bool>,
    pub distribution: Distribution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_column: Option<String>,
    #[serde(default)]
    pub correlated_pairs: Vec<CorrelatedPair>,
    /// Informational only; volume is judged on row count.
    pub memory_footprint_bytes: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

impl ProfileReport {
    /// Report for a table with no rows and no columns.
    pub fn empty() -> Self {
        ProfileReport {
            row_count: 0,
            columns: Vec::new(),
            volume_bucket: Level::Low,
            missing_level: Level::None,
            data_types: BTreeSet::new(),
            scales_similar: true,
            class_balance_ok: None,
            distribution: Distribution::Unknown,
            label_column: None,
            correlated_pairs: Vec::new(),
            memory_footprint_bytes: 0,
            diagnostics: Vec::new(),
        }
    }

    pub fn correlated(&self) -> bool {
        !self.correlated_pairs.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<&ColumnProfile> {
        self.columns.iter().find(|c| c.name == name)
    }
}

fn numbers(values: &[Option<&str>]) -> Vec<f64> {
    values
        .iter()
        .flatten()
        .filter_map(|v| parse_number(v))
        .collect()
}

fn column_profile(name: &str, values: &[Option<&str>]) -> ColumnProfile {
    let rows = values.len();
    let present: Vec<&str> = values.iter().flatten().copied().collect();
    let null_count = rows - present.len();
    let inferred_type = infer_type(values);
    let (stats, normality) = if inferred_type == Some(AttributeType::Numerical) {
        let xs = numbers(values);
        let stats = NumericStats {
            mean: mean(&xs),
            standard_deviation: std_dev(&xs),
            min: xs.iter().copied().fold(f64::INFINITY, f64::min),
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        };
        (Some(stats), Some(stats::normality(&xs)))
    } else {
        (None, None)
    };
    ColumnProfile {
        name: name.to_string(),
        inferred_type,
        null_count,
        null_fraction: if rows == 0 {
            0.0
        } else {
            null_count as f64 / rows as f64
        },
        distinct_count: present.iter().collect::<BTreeSet<_>>().len(),
        stats,
        normality,
    }
}

/// Per-column null fractions and the dataset missing level (worst column).
pub fn missing_stats(table: &Table, thresholds: &Thresholds) -> (Vec<f64>, Level) {
    let rows = table.rows.len();
    let fractions: Vec<f64> = (0..table.columns.len())
        .map(|i| {
            let nulls = table.column(i).filter(Option::is_none).count();
            if rows == 0 {
                0.0
            } else {
                nulls as f64 / rows as f64
            }
        })
        .collect();
    let worst = fractions.iter().copied().fold(0.0, f64::max);
    (fractions, thresholds.missing_level(worst))
}

pub fn profile(table: &Table, label: Option<&str>) -> Result<ProfileReport, ProfileError> {
    profile_with(table, label, &Thresholds::default())
}

pub fn profile_with(
    table: &Table,
    label: Option<&str>,
    thresholds: &Thresholds,
) -> Result<ProfileReport, ProfileError> {
    let label_idx = label
        .map(|l| {
            table
                .column_index(l)
                .ok_or_else(|| ProfileError::UnknownLabel(l.to_string()))
        })
        .transpose()?;

    let cells: Vec<Vec<Option<&str>>> = (0..table.columns.len())
        .map(|i| table.column(i).collect())
        .collect();
    let columns: Vec<ColumnProfile> = table
        .columns
        .iter()
        .zip(&cells)
        .map(|(name, values)| column_profile(name, values))
        .collect();

    let mut diagnostics = Vec::new();
    for c in columns.iter().filter(|c| c.inferred_type.is_none()) {
        diagnostics.push(format!("column `{}` has no values; type unknown", c.name));
    }

    let features: Vec<usize> = (0..columns.len())
        .filter(|i| Some(*i) != label_idx)
        .collect();
    let numeric: Vec<usize> = features
        .iter()
        .copied()
        .filter(|i| columns[*i].inferred_type == Some(AttributeType::Numerical))
        .collect();

    let data_types = features
        .iter()
        .filter_map(|i| columns[*i].inferred_type)
        .collect();
    let std_devs: Vec<f64> = numeric
        .iter()
        .filter_map(|i| columns[*i].stats.as_ref().map(|s| s.standard_deviation))
        .collect();
    let distribution = if !numeric.is_empty()
        && numeric
            .iter()
            .all(|i| columns[*i].normality == Some(Distribution::Normal))
    {
        Distribution::Normal
    } else {
        Distribution::Unknown
    };

    let class_balance = label_idx.map(|i| {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for v in cells[i].iter().flatten() {
            *counts.entry(v.trim()).or_default() += 1;
        }
        class_balance_ok(&counts.into_values().collect::<Vec<_>>())
    });

    let mut correlated_pairs = Vec::new();
    for (a, &i) in numeric.iter().enumerate() {
        for &j in &numeric[a + 1..] {
            let pairs: Vec<(f64, f64)> = cells[i]
                .iter()
                .zip(&cells[j])
                .filter_map(|(x, y)| Some((parse_number((*x)?)?, parse_number((*y)?)?)))
                .collect();
            if let Some(r) = pearson(&pairs) {
                if r.abs() >= CORRELATION_FLAG {
                    correlated_pairs.push(CorrelatedPair {
                        left: columns[i].name.clone(),
                        right: columns[j].name.clone(),
                        r,
                    });
                }
            }
        }
    }

    let (_, missing_level) = missing_stats(table, thresholds);
    Ok(ProfileReport {
        row_count: table.rows.len(),
        volume_bucket: thresholds.volume_bucket(table.rows.len() as u64),
        missing_level,
        data_types,
        scales_similar: scale_homogeneity(&std_devs),
        class_balance_ok: class_balance,
        distribution,
        label_column: label.map(str::to_string),
        correlated_pairs,
        memory_footprint_bytes: table.footprint_bytes(),
        diagnostics,
        columns,
    })
}
