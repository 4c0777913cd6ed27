use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::{Catalog, Criterion, CATALOG_SCHEMA_VERSION, REQUIRED_CRITERIA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    UnsupportedSchemaVersion,
    DuplicateCriterionId,
    MissingCriterion,
    RangeKindMismatch,
    EmptyAllowedValues,
    DuplicateFamilyId,
    EmptyFamilyId,
    UndefinedCriterion,
    MissingFamilyValue,
    EmptyValueSet,
    DuplicateValue,
    ValueNotAllowed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Checks every catalog invariant. An empty list means the catalog is valid.
pub fn validate_catalog(c: &Catalog) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |kind, location: String, message: String| {
        out.push(Violation {
            kind,
            location,
            message,
        })
    };

    if c.schema_version != CATALOG_SCHEMA_VERSION {
        push(
            ViolationKind::UnsupportedSchemaVersion,
            "schemaVersion".into(),
            format!(
                "schema version {} not supported (expected {CATALOG_SCHEMA_VERSION})",
                c.schema_version
            ),
        );
    }

    let mut seen = HashSet::new();
    for (i, crit) in c.criteria.iter().enumerate() {
        let loc = format!("criteria[{i}]");
        if !seen.insert(crit.id) {
            push(
                ViolationKind::DuplicateCriterionId,
                loc.clone(),
                format!("criterion `{}` defined more than once", crit.id),
            );
        }
        let expected = crit.id.domain().range_kind();
        if crit.range_kind != expected {
            push(
                ViolationKind::RangeKindMismatch,
                format!("{loc}.rangeKind"),
                format!(
                    "criterion `{}` must use range kind `{}`",
                    crit.id,
                    expected.label()
                ),
            );
        }
        if crit.allowed_values.is_empty() {
            push(
                ViolationKind::EmptyAllowedValues,
                format!("{loc}.allowedValues"),
                format!("criterion `{}` allows no values", crit.id),
            );
        }
    }
    for id in Criterion::ALL {
        if !seen.contains(&id) {
            push(
                ViolationKind::MissingCriterion,
                "criteria".into(),
                format!("criterion `{id}` is not defined"),
            );
        }
    }

    let mut family_ids = HashSet::new();
    for (i, fam) in c.families.iter().enumerate() {
        let loc = format!("families[{i}]");
        if fam.id.trim().is_empty() {
            push(
                ViolationKind::EmptyFamilyId,
                format!("{loc}.id"),
                "family id is empty".into(),
            );
        }
        if !family_ids.insert(fam.id.as_str()) {
            push(
                ViolationKind::DuplicateFamilyId,
                format!("{loc}.id"),
                format!("family id `{}` is used more than once", fam.id),
            );
        }
        for required in REQUIRED_CRITERIA {
            if !fam.criterion_values.contains_key(&required) {
                push(
                    ViolationKind::MissingFamilyValue,
                    format!("{loc}.criterionValues"),
                    format!("family `{}` has no value for `{required}`", fam.id),
                );
            }
        }
        for (crit, set) in &fam.criterion_values {
            let vloc = format!("{loc}.criterionValues.{crit}");
            let Some(def) = c.criterion(*crit) else {
                push(
                    ViolationKind::UndefinedCriterion,
                    vloc,
                    format!("criterion `{crit}` is not defined in the criteria block"),
                );
                continue;
            };
            if set.is_empty() {
                push(
                    ViolationKind::EmptyValueSet,
                    vloc.clone(),
                    format!("family `{}` lists no value for `{crit}`", fam.id),
                );
            }
            let domain = crit.domain();
            for (j, v) in set.values().iter().enumerate() {
                let label = v.label_in(domain).unwrap_or("?");
                if set.values()[..j].contains(v) {
                    push(
                        ViolationKind::DuplicateValue,
                        format!("{vloc}[{j}]"),
                        format!("value `{label}` repeated"),
                    );
                }
                if !def.allowed_values.contains(v) {
                    push(
                        ViolationKind::ValueNotAllowed,
                        format!("{vloc}[{j}]"),
                        format!("value `{label}` outside range of `{crit}`"),
                    );
                }
            }
        }
    }
    out
}
