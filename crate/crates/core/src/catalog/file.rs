//! Catalog file format: a JSON document with a `criteria` block and a
//! `families` block. Criterion values are written with their display labels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    validate_catalog, AlgorithmFamilyProfile, Catalog, CatalogError, Criterion, CriterionValueSet,
    RangeKind, SelectionCriterion, WeightGrade,
};

/// Seed catalog shipped with the crate.
pub const SEED_CATALOG_JSON: &str = include_str!("../../data/seed_catalog.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CatalogDocument {
    pub schema_version: u32,
    pub criteria: Vec<CriterionRecord>,
    #[serde(default)]
    pub families: Vec<FamilyRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CriterionRecord {
    pub id: String,
    pub name: String,
    pub grade: WeightGrade,
    pub range_kind: RangeKind,
    pub allowed_values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FamilyRecord {
    pub id: String,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub criterion_values: BTreeMap<String, Vec<String>>,
}

fn parse_error(e: serde_json::Error) -> CatalogError {
    CatalogError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn parse_criterion(id: &str, location: &str) -> Result<Criterion, CatalogError> {
    id.parse().map_err(|_| CatalogError::UnknownCriterion {
        location: location.to_string(),
        id: id.to_string(),
    })
}

fn parse_values(
    criterion: Criterion,
    labels: &[String],
    location: &str,
) -> Result<CriterionValueSet, CatalogError> {
    let domain = criterion.domain();
    labels
        .iter()
        .enumerate()
        .map(|(i, label)| {
            domain
                .parse(label)
                .ok_or_else(|| CatalogError::ValueOutOfRange {
                    location: format!("{location}[{i}]"),
                    criterion,
                    value: label.clone(),
                })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(CriterionValueSet::new)
}

impl FamilyRecord {
    pub fn into_profile(self, location: &str) -> Result<AlgorithmFamilyProfile, CatalogError> {
        let mut criterion_values = BTreeMap::new();
        for (key, labels) in &self.criterion_values {
            let loc = format!("{location}.criterionValues.{key}");
            let criterion = parse_criterion(key, &loc)?;
            criterion_values.insert(criterion, parse_values(criterion, labels, &loc)?);
        }
        Ok(AlgorithmFamilyProfile {
            id: self.id,
            name: self.name,
            description: self.description,
            criterion_values,
        })
    }

    pub fn from_profile(family: &AlgorithmFamilyProfile) -> Self {
        let criterion_values = family
            .criterion_values
            .iter()
            .map(|(c, set)| {
                let domain = c.domain();
                let labels = set
                    .values()
                    .iter()
                    .filter_map(|v| v.label_in(domain))
                    .map(str::to_string)
                    .collect();
                (c.id().to_string(), labels)
            })
            .collect();
        FamilyRecord {
            id: family.id.clone(),
            name: family.name.clone(),
            description: family.description.clone(),
            criterion_values,
        }
    }
}

impl CriterionRecord {
    fn into_criterion(self, location: &str) -> Result<SelectionCriterion, CatalogError> {
        let id = parse_criterion(&self.id, &format!("{location}.id"))?;
        let allowed = parse_values(
            id,
            &self.allowed_values,
            &format!("{location}.allowedValues"),
        )?;
        Ok(SelectionCriterion {
            id,
            name: self.name,
            grade: self.grade,
            range_kind: self.range_kind,
            allowed_values: allowed.values().to_vec(),
        })
    }

    fn from_criterion(c: &SelectionCriterion) -> Self {
        let domain = c.id.domain();
        CriterionRecord {
            id: c.id.id().to_string(),
            name: c.name.clone(),
            grade: c.grade,
            range_kind: c.range_kind,
            allowed_values: c
                .allowed_values
                .iter()
                .filter_map(|v| v.label_in(domain))
                .map(str::to_string)
                .collect(),
        }
    }
}

impl CatalogDocument {
    /// Converts to the typed catalog without running the validator.
    pub fn into_catalog(self) -> Result<Catalog, CatalogError> {
        let criteria = self
            .criteria
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.into_criterion(&format!("criteria[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let families = self
            .families
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.into_profile(&format!("families[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Catalog {
            schema_version: self.schema_version,
            criteria,
            families,
        })
    }

    pub fn from_catalog(c: &Catalog) -> Self {
        CatalogDocument {
            schema_version: c.schema_version,
            criteria: c
                .criteria
                .iter()
                .map(CriterionRecord::from_criterion)
                .collect(),
            families: c.families.iter().map(FamilyRecord::from_profile).collect(),
        }
    }
}

/// Parses and validates a catalog file.
pub fn load_catalog(source: &[u8]) -> Result<Catalog, CatalogError> {
    let doc: CatalogDocument = serde_json::from_slice(source).map_err(parse_error)?;
    let catalog = doc.into_catalog()?;
    let violations = validate_catalog(&catalog);
    if violations.is_empty() {
        Ok(catalog)
    } else {
        Err(CatalogError::Invalid(violations))
    }
}

pub fn serialize_catalog(c: &Catalog) -> String {
    let mut out = serde_json::to_string_pretty(&CatalogDocument::from_catalog(c))
        .expect("catalog document is always serializable");
    out.push('\n');
    out
}

pub fn seed_catalog() -> Catalog {
    load_catalog(SEED_CATALOG_JSON.as_bytes()).expect("shipped seed catalog is valid")
}
