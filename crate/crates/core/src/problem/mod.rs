//! ML project model: the domain problem, domain-expert requirements with
//! care levels, and data properties.
//!
//! Projects are values. Every mutating operation consumes the project and
//! returns the next version.

mod file;
mod mapping;
mod overrides;
mod synonyms;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{AttributeType, Level, Scale};
use crate::profiler::ProfileReport;

pub use file::{deserialize_project, serialize_project, ProjectDocument, PROJECT_SCHEMA_VERSION};
pub use mapping::{requirement_mapping, MappingTarget};
pub use overrides::{apply_override, apply_overrides, parse_override, Override, OverrideError};
pub use synonyms::derive_computational_requirement;

#[derive(Debug, Error, PartialEq)]
pub enum ProblemError {
    #[error("{location}: {message}")]
    OutOfRange { location: String, message: String },
    #[error("{location}: duplicate value for requirement `{requirement}`")]
    Duplicate {
        location: String,
        requirement: RequirementType,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported project schema version {0}")]
    SchemaVersion(u32),
    #[error("no mapping for domain term `{0}`")]
    NoMapping(String),
}

/// How much the domain expert cares about a requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CareLevel {
    Not,
    Could,
    Should,
    Must,
}

impl CareLevel {
    pub const ALL: [CareLevel; 4] = [
        CareLevel::Not,
        CareLevel::Could,
        CareLevel::Should,
        CareLevel::Must,
    ];

    pub fn numeric(self) -> f64 {
        match self {
            CareLevel::Not => 0.0,
            CareLevel::Could => 1.0 / 3.0,
            CareLevel::Should => 2.0 / 3.0,
            CareLevel::Must => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CareLevel::Not => "Not",
            CareLevel::Could => "Could",
            CareLevel::Should => "Should",
            CareLevel::Must => "Must",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.label() == s)
    }
}

/// Every requirement a project can state, domain-level and data-level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RequirementType {
    Accuracy,
    Explainability,
    Interpretability,
    Adaptability,
    CostCpu,
    CostData,
    DecisionSpeed,
    Labeling,
    Volume,
    MissingValues,
    DataType,
    Seasonality,
    Representativity,
    Homogeneity,
    Distribution,
}

impl RequirementType {
    pub const DOMAIN: [RequirementType; 7] = [
        RequirementType::Accuracy,
        RequirementType::Explainability,
        RequirementType::Interpretability,
        RequirementType::Adaptability,
        RequirementType::CostCpu,
        RequirementType::CostData,
        RequirementType::DecisionSpeed,
    ];

    pub const DATA: [RequirementType; 8] = [
        RequirementType::Labeling,
        RequirementType::Volume,
        RequirementType::MissingValues,
        RequirementType::DataType,
        RequirementType::Seasonality,
        RequirementType::Representativity,
        RequirementType::Homogeneity,
        RequirementType::Distribution,
    ];

    pub fn id(self) -> &'static str {
        match self {
            RequirementType::Accuracy => "accuracy",
            RequirementType::Explainability => "explainability",
            RequirementType::Interpretability => "interpretability",
            RequirementType::Adaptability => "adaptability",
            RequirementType::CostCpu => "costCpu",
            RequirementType::CostData => "costData",
            RequirementType::DecisionSpeed => "decisionSpeed",
            RequirementType::Labeling => "labeling",
            RequirementType::Volume => "volume",
            RequirementType::MissingValues => "missingValues",
            RequirementType::DataType => "dataType",
            RequirementType::Seasonality => "seasonality",
            RequirementType::Representativity => "representativity",
            RequirementType::Homogeneity => "homogeneity",
            RequirementType::Distribution => "distribution",
        }
    }

    pub fn from_id(s: &str) -> Option<Self> {
        Self::DOMAIN
            .into_iter()
            .chain(Self::DATA)
            .find(|r| r.id() == s)
    }

    pub fn is_data_property(self) -> bool {
        Self::DATA.contains(&self)
    }
}

impl fmt::Display for RequirementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeedMetric {
    Max,
    Avg,
    P95,
}

/// Response-time budget for a single decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionSpeed {
    pub metric: SpeedMetric,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "camelCase")]
pub enum DomainValue {
    /// Minimum acceptable accuracy as a fraction in (0, 1].
    Accuracy(f64),
    Explainability(bool),
    Interpretability(bool),
    Adaptability(bool),
    /// Computation budget on the Low..Very High scale.
    CostCpu(Level),
    /// Data acquisition and storage budget on the Low..Very High scale.
    CostData(Level),
    DecisionSpeed(DecisionSpeed),
}

impl DomainValue {
    pub fn requirement_type(&self) -> RequirementType {
        match self {
            DomainValue::Accuracy(_) => RequirementType::Accuracy,
            DomainValue::Explainability(_) => RequirementType::Explainability,
            DomainValue::Interpretability(_) => RequirementType::Interpretability,
            DomainValue::Adaptability(_) => RequirementType::Adaptability,
            DomainValue::CostCpu(_) => RequirementType::CostCpu,
            DomainValue::CostData(_) => RequirementType::CostData,
            DomainValue::DecisionSpeed(_) => RequirementType::DecisionSpeed,
        }
    }

    fn check(&self) -> Result<(), String> {
        match self {
            DomainValue::Accuracy(a) if !(a.is_finite() && *a > 0.0 && *a <= 1.0) => {
                Err(format!("accuracy level {a} outside (0, 1]"))
            }
            DomainValue::CostCpu(l) | DomainValue::CostData(l)
                if !Scale::Canonical.contains(*l) =>
            {
                Err(format!("cost budget `{l}` not on the Low..Very High scale"))
            }
            DomainValue::DecisionSpeed(s) if !(s.millis.is_finite() && s.millis >= 0.0) => {
                Err(format!(
                    "response time {} ms is not a non-negative duration",
                    s.millis
                ))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainRequirementValue {
    #[serde(flatten)]
    pub value: DomainValue,
    pub care: CareLevel,
}

impl DomainRequirementValue {
    pub fn new(value: DomainValue, care: CareLevel) -> Self {
        DomainRequirementValue { value, care }
    }

    pub fn requirement_type(&self) -> RequirementType {
        self.value.requirement_type()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Labeling {
    Labeled,
    Unlabeled,
    ToBeLabeled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Distribution {
    Normal,
    Unknown,
}

/// Outcome of the two homogeneity checks. `classes_comparable` stays unset
/// when no label column was available to check class sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Homogeneity {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes_comparable: Option<bool>,
    pub scales_similar: bool,
}

impl Homogeneity {
    pub fn failed_checks(&self) -> u8 {
        u8::from(self.classes_comparable == Some(false)) + u8::from(!self.scales_similar)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "camelCase")]
pub enum DataValue {
    Labeling(Labeling),
    /// Row-count bucket on the Low/Medium/High scale.
    Volume(Level),
    /// Worst per-column missing level on the None..High scale.
    MissingValues(Level),
    DataType(BTreeSet<AttributeType>),
    Seasonality(bool),
    Representativity(Level),
    Homogeneity(Homogeneity),
    Distribution(Distribution),
}

impl DataValue {
    pub fn requirement_type(&self) -> RequirementType {
        match self {
            DataValue::Labeling(_) => RequirementType::Labeling,
            DataValue::Volume(_) => RequirementType::Volume,
            DataValue::MissingValues(_) => RequirementType::MissingValues,
            DataValue::DataType(_) => RequirementType::DataType,
            DataValue::Seasonality(_) => RequirementType::Seasonality,
            DataValue::Representativity(_) => RequirementType::Representativity,
            DataValue::Homogeneity(_) => RequirementType::Homogeneity,
            DataValue::Distribution(_) => RequirementType::Distribution,
        }
    }

    fn check(&self) -> Result<(), String> {
        match self {
            DataValue::Volume(l) | DataValue::Representativity(l)
                if !Scale::ThreeLevel.contains(*l) =>
            {
                Err(format!("`{l}` not on the Low/Medium/High scale"))
            }
            DataValue::MissingValues(l) if !Scale::NoneBased.contains(*l) => {
                Err(format!("`{l}` not on the None/Low/Medium/High scale"))
            }
            DataValue::DataType(types) if types.is_empty() => {
                Err("data type set is empty".to_string())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Expert,
    Profiled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataPropertyValue {
    #[serde(flatten)]
    pub value: DataValue,
    pub provenance: Provenance,
}

impl DataPropertyValue {
    pub fn expert(value: DataValue) -> Self {
        DataPropertyValue {
            value,
            provenance: Provenance::Expert,
        }
    }

    pub fn profiled(value: DataValue) -> Self {
        DataPropertyValue {
            value,
            provenance: Provenance::Profiled,
        }
    }

    pub fn requirement_type(&self) -> RequirementType {
        self.value.requirement_type()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Requirement {
    Domain(DomainRequirementValue),
    Data(DataPropertyValue),
}

impl Requirement {
    pub fn requirement_type(&self) -> RequirementType {
        match self {
            Requirement::Domain(d) => d.requirement_type(),
            Requirement::Data(d) => d.requirement_type(),
        }
    }

    pub fn check(&self) -> Result<(), ProblemError> {
        let res = match self {
            Requirement::Domain(d) => d.value.check(),
            Requirement::Data(d) => d.value.check(),
        };
        res.map_err(|message| ProblemError::OutOfRange {
            location: self.requirement_type().id().to_string(),
            message,
        })
    }
}

impl From<DomainRequirementValue> for Requirement {
    fn from(v: DomainRequirementValue) -> Self {
        Requirement::Domain(v)
    }
}

impl From<DataPropertyValue> for Requirement {
    fn from(v: DataPropertyValue) -> Self {
        Requirement::Data(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MLProblem {
    pub id: String,
    pub description: String,
    pub domain_requirements: Vec<DomainRequirementValue>,
    pub data_properties: Vec<DataPropertyValue>,
    pub dataset_ref: Option<String>,
}

/// Starts a project from its free-form problem statement.
pub fn new_project(description: &str) -> MLProblem {
    MLProblem {
        id: uuid::Uuid::new_v4().to_string(),
        description: description.to_string(),
        domain_requirements: Vec::new(),
        data_properties: Vec::new(),
        dataset_ref: None,
    }
}

/// Replaces any previous value of the same requirement type with `r`.
pub fn set_requirement(
    mut p: MLProblem,
    r: impl Into<Requirement>,
) -> Result<MLProblem, ProblemError> {
    let r = r.into();
    r.check()?;
    match r {
        Requirement::Domain(d) => {
            let t = d.requirement_type();
            match p
                .domain_requirements
                .iter_mut()
                .find(|x| x.requirement_type() == t)
            {
                Some(slot) => *slot = d,
                None => p.domain_requirements.push(d),
            }
        }
        Requirement::Data(d) => {
            let t = d.requirement_type();
            match p
                .data_properties
                .iter_mut()
                .find(|x| x.requirement_type() == t)
            {
                Some(slot) => *slot = d,
                None => p.data_properties.push(d),
            }
        }
    }
    Ok(p)
}

impl MLProblem {
    pub fn domain(&self, t: RequirementType) -> Option<&DomainRequirementValue> {
        self.domain_requirements
            .iter()
            .find(|d| d.requirement_type() == t)
    }

    pub fn data(&self, t: RequirementType) -> Option<&DataPropertyValue> {
        self.data_properties
            .iter()
            .find(|d| d.requirement_type() == t)
    }

    /// Checks per-value ranges and the one-value-per-type rule.
    pub fn validate(&self) -> Result<(), ProblemError> {
        let mut seen = BTreeSet::new();
        for (i, d) in self.domain_requirements.iter().enumerate() {
            let location = format!("domainRequirements[{i}]");
            d.value
                .check()
                .map_err(|message| ProblemError::OutOfRange {
                    location: location.clone(),
                    message,
                })?;
            if !seen.insert(d.requirement_type()) {
                return Err(ProblemError::Duplicate {
                    location,
                    requirement: d.requirement_type(),
                });
            }
        }
        for (i, d) in self.data_properties.iter().enumerate() {
            let location = format!("dataProperties[{i}]");
            d.value
                .check()
                .map_err(|message| ProblemError::OutOfRange {
                    location: location.clone(),
                    message,
                })?;
            if !seen.insert(d.requirement_type()) {
                return Err(ProblemError::Duplicate {
                    location,
                    requirement: d.requirement_type(),
                });
            }
        }
        Ok(())
    }
}

/// Folds measured data properties into the project. Values supplied by the
/// expert are never replaced; earlier profiled values are refreshed.
pub fn merge_profile(mut p: MLProblem, report: &ProfileReport) -> MLProblem {
    let mut measured = vec![
        DataValue::Volume(report.volume_bucket),
        DataValue::MissingValues(report.missing_level),
        DataValue::Homogeneity(Homogeneity {
            classes_comparable: report.class_balance_ok,
            scales_similar: report.scales_similar,
        }),
        DataValue::Distribution(report.distribution),
    ];
    if !report.data_types.is_empty() {
        measured.push(DataValue::DataType(report.data_types.clone()));
    }
    for value in measured {
        let t = value.requirement_type();
        match p
            .data_properties
            .iter_mut()
            .find(|d| d.requirement_type() == t)
        {
            Some(existing) if existing.provenance == Provenance::Expert => {}
            Some(existing) => *existing = DataPropertyValue::profiled(value),
            None => p.data_properties.push(DataPropertyValue::profiled(value)),
        }
    }
    p
}
