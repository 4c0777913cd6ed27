use std::collections::BTreeSet;

use crate::catalog::{
    AlgorithmFamilyProfile, AttributeType, Criterion, Level, LinguisticValue, Scale,
};
use crate::engine::{fuzzy_leq, inhomogeneity};
use crate::problem::{DataValue, Homogeneity, MLProblem, RequirementType};
use crate::profiler::ProfileReport;

use super::StepKind;

/// Data facts the rules look at, taken from a profile report and from the
/// project's data properties (the project wins where both speak).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DataConditions {
    pub missing_level: Option<Level>,
    pub data_types: BTreeSet<AttributeType>,
    pub homogeneity: Option<Homogeneity>,
    /// Names of correlated attribute pairs.
    pub correlated: Vec<(String, String)>,
}

impl DataConditions {
    pub fn from_profile(report: &ProfileReport) -> Self {
        DataConditions {
            missing_level: Some(report.missing_level),
            data_types: report.data_types.clone(),
            homogeneity: Some(Homogeneity {
                classes_comparable: report.class_balance_ok,
                scales_similar: report.scales_similar,
            }),
            correlated: report
                .correlated_pairs
                .iter()
                .map(|p| (p.left.clone(), p.right.clone()))
                .collect(),
        }
    }

    pub fn gather(pb: &MLProblem, report: Option<&ProfileReport>) -> Self {
        let mut c = report.map(Self::from_profile).unwrap_or_default();
        let data = |t| pb.data(t).map(|d| &d.value);
        if let Some(DataValue::MissingValues(l)) = data(RequirementType::MissingValues) {
            c.missing_level = Some(*l);
        }
        if let Some(DataValue::DataType(ts)) = data(RequirementType::DataType) {
            c.data_types = ts.clone();
        }
        if let Some(DataValue::Homogeneity(h)) = data(RequirementType::Homogeneity) {
            c.homogeneity = Some(*h);
        }
        c
    }
}

/// Trigger and remedy for one remediable shortfall.
#[derive(Clone, Copy)]
pub struct CompensationRule {
    pub id: &'static str,
    pub criterion: Criterion,
    pub step: StepKind,
    pub tags: &'static [&'static str],
    trigger: fn(&AlgorithmFamilyProfile, &DataConditions) -> Option<String>,
}

impl std::fmt::Debug for CompensationRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CompensationRule")
            .field("id", &self.id)
            .field("criterion", &self.criterion)
            .field("step", &self.step)
            .finish()
    }
}

impl CompensationRule {
    /// Rationale when the rule fires for this family and data.
    pub fn fires(&self, family: &AlgorithmFamilyProfile, data: &DataConditions) -> Option<String> {
        (self.trigger)(family, data)
    }
}

fn levels(f: &AlgorithmFamilyProfile, c: Criterion) -> Vec<Level> {
    f.values(c)
        .map(|s| s.levels().collect())
        .unwrap_or_default()
}

fn labels(f: &AlgorithmFamilyProfile, c: Criterion) -> String {
    f.values(c)
        .map(|s| {
            s.values()
                .iter()
                .filter_map(|v| v.label_in(c.domain()))
                .collect::<Vec<_>>()
                .join("|")
        })
        .unwrap_or_else(|| "unrated".into())
}

/// Low tolerance: no member of the family rates above Low.
fn low_tolerance(f: &AlgorithmFamilyProfile, c: Criterion) -> bool {
    levels(f, c)
        .iter()
        .all(|l| matches!(l, Level::None | Level::Low))
}

fn missing_values(f: &AlgorithmFamilyProfile, d: &DataConditions) -> Option<String> {
    let level = d.missing_level.filter(|l| *l != Level::None)?;
    let demand = LinguisticValue::new(Scale::NoneBased, level).ok()?;
    let c = Criterion::ToleranceMissingValues;
    let covered = levels(f, c).into_iter().any(|t| {
        LinguisticValue::new(Scale::NoneBased, t)
            .ok()
            .and_then(|t| fuzzy_leq(&demand, &t).ok())
            == Some(1.0)
    });
    (!covered).then(|| {
        format!(
            "{c} is {} but the data has {level} missing values",
            labels(f, c)
        )
    })
}

fn data_type_mismatch(f: &AlgorithmFamilyProfile, d: &DataConditions) -> Option<String> {
    let c = Criterion::AttributeTypes;
    let supported: BTreeSet<AttributeType> = f
        .values(c)
        .map(|s| s.attribute_types().collect())
        .unwrap_or_default();
    let unsupported: Vec<&str> = d
        .data_types
        .difference(&supported)
        .map(|t| t.label())
        .collect();
    (!unsupported.is_empty()).then(|| {
        format!(
            "{c} is {} but the data has {} attributes",
            labels(f, c),
            unsupported.join(" and ")
        )
    })
}

fn scales_differ(f: &AlgorithmFamilyProfile, d: &DataConditions) -> Option<String> {
    d.homogeneity.filter(|h| !h.scales_similar)?;
    let c = Criterion::ToleranceNoise;
    (!levels(f, c).contains(&Level::High)).then(|| {
        format!(
            "{c} is {} and the attributes follow dissimilar scales",
            labels(f, c)
        )
    })
}

fn inhomogeneous(f: &AlgorithmFamilyProfile, d: &DataConditions) -> Option<String> {
    let h = d.homogeneity.filter(|h| h.failed_checks() > 0)?;
    let c = Criterion::ToleranceNoise;
    if !low_tolerance(f, c) {
        return None;
    }
    let failed = match (h.classes_comparable == Some(false), !h.scales_similar) {
        (true, true) => "class sizes and attribute scales are uneven",
        (true, false) => "class sizes are uneven",
        _ => "attribute scales are uneven",
    };
    Some(format!(
        "{c} is {} and the data inhomogeneity is {} ({failed})",
        labels(f, c),
        inhomogeneity(&h)
    ))
}

fn correlated(f: &AlgorithmFamilyProfile, d: &DataConditions) -> Option<String> {
    let (a, b) = d.correlated.first()?;
    let c = Criterion::ToleranceCorrelatedAttributes;
    low_tolerance(f, c).then(|| {
        let more = match d.correlated.len() {
            1 => String::new(),
            n => format!(" and {} more pair(s)", n - 1),
        };
        format!(
            "{c} is {} and attributes `{a}` and `{b}`{more} are correlated",
            labels(f, c)
        )
    })
}

pub fn shipped_rules() -> [CompensationRule; 5] {
    [
        CompensationRule {
            id: "missing-values",
            criterion: Criterion::ToleranceMissingValues,
            step: StepKind::Imputation,
            tags: &["mean-imputation", "knn-imputation"],
            trigger: missing_values,
        },
        CompensationRule {
            id: "data-type-mismatch",
            criterion: Criterion::AttributeTypes,
            step: StepKind::Encoding,
            tags: &["one-hot", "ordinal", "text-vectorization"],
            trigger: data_type_mismatch,
        },
        CompensationRule {
            id: "dissimilar-scales",
            criterion: Criterion::ToleranceNoise,
            step: StepKind::Normalization,
            tags: &["standardization", "min-max"],
            trigger: scales_differ,
        },
        CompensationRule {
            id: "correlated-attributes",
            criterion: Criterion::ToleranceCorrelatedAttributes,
            step: StepKind::DimensionalityReduction,
            tags: &["pca"],
            trigger: correlated,
        },
        CompensationRule {
            id: "inhomogeneous-data",
            criterion: Criterion::ToleranceNoise,
            step: StepKind::Denoising,
            tags: &["outlier-filtering", "smoothing"],
            trigger: inhomogeneous,
        },
    ]
}
