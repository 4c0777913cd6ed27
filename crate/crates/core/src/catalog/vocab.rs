//! Linguistic scales, weight grades and the typed value vocabularies used
//! by selection criteria.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::CatalogError;

/// Qualitative magnitude label. Which labels are legal, and what rank they
/// carry, depends on the [`Scale`] a value lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    None,
    Low,
    Medium,
    High,
    #[serde(rename = "Very High")]
    VeryHigh,
    Partial,
}

impl Level {
    pub fn label(self) -> &'static str {
        match self {
            Level::None => "None",
            Level::Low => "Low",
            Level::Medium => "Medium",
            Level::High => "High",
            Level::VeryHigh => "Very High",
            Level::Partial => "Partial",
        }
    }

    pub fn from_label(label: &str) -> Option<Level> {
        Some(match label {
            "None" => Level::None,
            "Low" => Level::Low,
            "Medium" => Level::Medium,
            "High" => Level::High,
            "Very High" | "VeryHigh" => Level::VeryHigh,
            "Partial" => Level::Partial,
            _ => return None,
        })
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// An ordered label scale. Ranks start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    /// Low < Medium < High < Very High
    Canonical,
    /// None < Low < Medium < High
    NoneBased,
    /// Low < Medium < High
    ThreeLevel,
    /// None < Partial < High
    Parallelism,
}

impl Scale {
    pub fn levels(self) -> &'static [Level] {
        match self {
            Scale::Canonical => &[Level::Low, Level::Medium, Level::High, Level::VeryHigh],
            Scale::NoneBased => &[Level::None, Level::Low, Level::Medium, Level::High],
            Scale::ThreeLevel => &[Level::Low, Level::Medium, Level::High],
            Scale::Parallelism => &[Level::None, Level::Partial, Level::High],
        }
    }

    pub fn level_count(self) -> u8 {
        self.levels().len() as u8
    }

    pub fn rank_of(self, level: Level) -> Option<u8> {
        self.levels()
            .iter()
            .position(|l| *l == level)
            .map(|p| p as u8 + 1)
    }

    pub fn level_at(self, rank: u8) -> Option<Level> {
        if rank == 0 {
            return None;
        }
        self.levels().get(rank as usize - 1).copied()
    }

    pub fn contains(self, level: Level) -> bool {
        self.rank_of(level).is_some()
    }
}

/// A label bound to the scale it was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LinguisticValue {
    scale: Scale,
    level: Level,
}

impl LinguisticValue {
    pub fn new(scale: Scale, level: Level) -> Result<Self, CatalogError> {
        if scale.contains(level) {
            Ok(LinguisticValue { scale, level })
        } else {
            Err(CatalogError::UnknownLabel {
                label: level.label().to_string(),
                scale,
            })
        }
    }

    pub fn parse(scale: Scale, label: &str) -> Result<Self, CatalogError> {
        let level = Level::from_label(label).ok_or_else(|| CatalogError::UnknownLabel {
            label: label.to_string(),
            scale,
        })?;
        Self::new(scale, level)
    }

    /// Shorthand for values on the canonical Low..Very High scale.
    pub fn canonical(level: Level) -> Result<Self, CatalogError> {
        Self::new(Scale::Canonical, level)
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn rank(&self) -> u8 {
        self.scale
            .rank_of(self.level)
            .expect("constructor guarantees membership")
    }
}

impl fmt::Display for LinguisticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.level.label())
    }
}

/// Rank of a linguistic value on its own scale.
pub fn rank(v: &LinguisticValue) -> u8 {
    v.rank()
}

/// Severity of failing a criterion, from A (no remedy) to D (cheap fix).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WeightGrade {
    A,
    #[serde(rename = "A-B")]
    AB,
    B,
    #[serde(rename = "B-C")]
    BC,
    C,
    D,
}

impl WeightGrade {
    pub const ALL: [WeightGrade; 6] = [
        WeightGrade::A,
        WeightGrade::AB,
        WeightGrade::B,
        WeightGrade::BC,
        WeightGrade::C,
        WeightGrade::D,
    ];

    pub fn label(self) -> &'static str {
        match self {
            WeightGrade::A => "A",
            WeightGrade::AB => "A-B",
            WeightGrade::B => "B",
            WeightGrade::BC => "B-C",
            WeightGrade::C => "C",
            WeightGrade::D => "D",
        }
    }

    /// Grades A and A-B name intrinsic model properties that preprocessing
    /// cannot repair.
    pub fn is_remediable(self) -> bool {
        !matches!(self, WeightGrade::A | WeightGrade::AB)
    }
}

impl fmt::Display for WeightGrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Default numeric weight of a grade: doubling per full grade, mixed grades
/// at the arithmetic mean of their neighbours.
pub fn grade_weight(g: WeightGrade) -> f64 {
    match g {
        WeightGrade::A => 8.0,
        WeightGrade::AB => 6.0,
        WeightGrade::B => 4.0,
        WeightGrade::BC => 3.0,
        WeightGrade::C => 2.0,
        WeightGrade::D => 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TrainingType {
    Supervised,
    Unsupervised,
    Reinforcement,
}

impl TrainingType {
    pub fn label(self) -> &'static str {
        match self {
            TrainingType::Supervised => "Supervised",
            TrainingType::Unsupervised => "Unsupervised",
            TrainingType::Reinforcement => "Reinforcement",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AttributeType {
    Categorical,
    Numerical,
    #[serde(alias = "Text")]
    Textual,
}

impl AttributeType {
    pub const ALL: [AttributeType; 3] = [
        AttributeType::Categorical,
        AttributeType::Numerical,
        AttributeType::Textual,
    ];

    pub fn label(self) -> &'static str {
        match self {
            AttributeType::Categorical => "Categorical",
            AttributeType::Numerical => "Numerical",
            AttributeType::Textual => "Textual",
        }
    }
}

impl fmt::Display for AttributeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Accuracy ranges of the catalog. Each bucket carries a representative
/// fraction so it can be divided by a required accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AccuracyBucket {
    AtMost80,
    From80To90,
    AtLeast90,
}

impl AccuracyBucket {
    pub const ALL: [AccuracyBucket; 3] = [
        AccuracyBucket::AtMost80,
        AccuracyBucket::From80To90,
        AccuracyBucket::AtLeast90,
    ];

    pub fn label(self) -> &'static str {
        match self {
            AccuracyBucket::AtMost80 => "<=80%",
            AccuracyBucket::From80To90 => "[80%,90%]",
            AccuracyBucket::AtLeast90 => ">=90%",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.label() == s)
    }

    pub fn representative(self) -> f64 {
        match self {
            AccuracyBucket::AtMost80 => 0.75,
            AccuracyBucket::From80To90 => 0.85,
            AccuracyBucket::AtLeast90 => 0.95,
        }
    }
}
