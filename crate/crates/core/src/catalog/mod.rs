//! Selection criteria vocabulary and the repository of algorithm-family
//! profiles.
//!
//! A [`Catalog`] is immutable once loaded. Editing produces a new value;
//! callers that share one across threads wrap it in an `Arc`.

mod criteria;
mod file;
mod validate;
mod vocab;

use std::collections::BTreeMap;

use thiserror::Error;

pub use criteria::{
    Criterion, CriterionInfo, CriterionValue, RangeKind, ValueDomain, REQUIRED_CRITERIA,
};
pub use file::{
    load_catalog, seed_catalog, serialize_catalog, CatalogDocument, CriterionRecord, FamilyRecord,
    SEED_CATALOG_JSON,
};
pub use validate::{validate_catalog, Violation, ViolationKind};
pub use vocab::{
    grade_weight, rank, AccuracyBucket, AttributeType, Level, LinguisticValue, Scale, TrainingType,
    WeightGrade,
};

pub const CATALOG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{location}: unknown criterion id `{id}`")]
    UnknownCriterion { location: String, id: String },
    #[error("{location}: value `{value}` outside range of criterion `{criterion}`")]
    ValueOutOfRange {
        location: String,
        criterion: Criterion,
        value: String,
    },
    #[error("{location}: {message}")]
    Malformed { location: String, message: String },
    #[error("unknown label `{label}` for scale {scale:?}")]
    UnknownLabel { label: String, scale: Scale },
    #[error("catalog failed validation:\n{}", render_violations(.0))]
    Invalid(Vec<Violation>),
}

fn render_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| format!("  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Table row describing one criterion as the catalog file declares it.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionCriterion {
    pub id: Criterion,
    pub name: String,
    pub grade: WeightGrade,
    pub range_kind: RangeKind,
    pub allowed_values: Vec<CriterionValue>,
}

impl SelectionCriterion {
    /// The reference definition shipped with the crate.
    pub fn builtin(id: Criterion) -> Self {
        let info = id.info();
        SelectionCriterion {
            id,
            name: info.name.to_string(),
            grade: info.grade,
            range_kind: info.domain.range_kind(),
            allowed_values: info.domain.values(),
        }
    }
}

/// Values a family takes for one criterion. Members of a family may differ,
/// so more than one value is allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionValueSet(Vec<CriterionValue>);

impl CriterionValueSet {
    pub fn new(values: Vec<CriterionValue>) -> Self {
        CriterionValueSet(values)
    }

    pub fn single(value: CriterionValue) -> Self {
        CriterionValueSet(vec![value])
    }

    pub fn values(&self) -> &[CriterionValue] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn levels(&self) -> impl Iterator<Item = Level> + '_ {
        self.0.iter().filter_map(|v| match v {
            CriterionValue::Level(l) => Some(*l),
            _ => None,
        })
    }

    pub fn flags(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().filter_map(|v| match v {
            CriterionValue::Flag(b) => Some(*b),
            _ => None,
        })
    }

    pub fn training_types(&self) -> impl Iterator<Item = TrainingType> + '_ {
        self.0.iter().filter_map(|v| match v {
            CriterionValue::Training(t) => Some(*t),
            _ => None,
        })
    }

    pub fn attribute_types(&self) -> impl Iterator<Item = AttributeType> + '_ {
        self.0.iter().filter_map(|v| match v {
            CriterionValue::Attribute(a) => Some(*a),
            _ => None,
        })
    }

    pub fn accuracy_buckets(&self) -> impl Iterator<Item = AccuracyBucket> + '_ {
        self.0.iter().filter_map(|v| match v {
            CriterionValue::Accuracy(b) => Some(*b),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmFamilyProfile {
    pub id: String,
    pub name: String,
    pub description: String,
    pub criterion_values: BTreeMap<Criterion, CriterionValueSet>,
}

impl AlgorithmFamilyProfile {
    pub fn values(&self, criterion: Criterion) -> Option<&CriterionValueSet> {
        self.criterion_values.get(&criterion)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub schema_version: u32,
    pub criteria: Vec<SelectionCriterion>,
    pub families: Vec<AlgorithmFamilyProfile>,
}

impl Catalog {
    /// Catalog holding the reference criteria and no families.
    pub fn with_builtin_criteria() -> Self {
        Catalog {
            schema_version: CATALOG_SCHEMA_VERSION,
            criteria: Criterion::ALL
                .into_iter()
                .map(SelectionCriterion::builtin)
                .collect(),
            families: Vec::new(),
        }
    }

    pub fn family(&self, id: &str) -> Option<&AlgorithmFamilyProfile> {
        self.families.iter().find(|f| f.id == id)
    }

    pub fn criterion(&self, id: Criterion) -> Option<&SelectionCriterion> {
        self.criteria.iter().find(|c| c.id == id)
    }

    /// Returns a new catalog where `family` replaces the family of the same
    /// id, or is appended when absent.
    pub fn with_family(&self, family: AlgorithmFamilyProfile) -> Catalog {
        let mut next = self.clone();
        match next.families.iter_mut().find(|f| f.id == family.id) {
            Some(slot) => *slot = family,
            None => next.families.push(family),
        }
        next
    }
}
