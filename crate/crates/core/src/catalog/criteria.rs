//! The 27 selection criteria and their value domains.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::vocab::{AccuracyBucket, AttributeType, Level, Scale, TrainingType, WeightGrade};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    TrainingType,
    Explainability,
    Interpretability,
    InputOrderSensitivity,
    Accuracy,
    ToleranceCorrelatedAttributes,
    OverfittingResilience,
    ToleranceDataImbalance,
    HyperparameterEase,
    TrainingComplexity,
    Multiclass,
    VolumeForConvergence,
    HighDimensionality,
    ToleranceMissingValues,
    Incrementality,
    Transparency,
    ToleranceNoise,
    DependencyReliance,
    ComplexData,
    ToleranceBiasedDistribution,
    DecisionComplexity,
    MemoryRequirements,
    Parallelism,
    FederatedLearning,
    DecisionTimeBounded,
    AttributeTypes,
    Evolutivity,
}

/// Shape of the values a criterion accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RangeKind {
    OrderedLinguistic,
    Boolean,
    CategoricalSet,
    AccuracyBucket,
}

impl RangeKind {
    pub fn label(self) -> &'static str {
        match self {
            RangeKind::OrderedLinguistic => "ordered-linguistic",
            RangeKind::Boolean => "boolean",
            RangeKind::CategoricalSet => "categorical-set",
            RangeKind::AccuracyBucket => "accuracy-bucket",
        }
    }
}

/// Typed vocabulary of a criterion. Boolean criteria differ only in the
/// labels used for their two values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueDomain {
    Ordered(Scale),
    YesNo,
    Explainable,
    Interpretable,
    Training,
    Attributes,
    Accuracy,
}

impl ValueDomain {
    pub fn range_kind(self) -> RangeKind {
        match self {
            ValueDomain::Ordered(_) => RangeKind::OrderedLinguistic,
            ValueDomain::YesNo | ValueDomain::Explainable | ValueDomain::Interpretable => {
                RangeKind::Boolean
            }
            ValueDomain::Training | ValueDomain::Attributes => RangeKind::CategoricalSet,
            ValueDomain::Accuracy => RangeKind::AccuracyBucket,
        }
    }

    /// Every value the domain admits, in display order.
    pub fn values(self) -> Vec<CriterionValue> {
        match self {
            ValueDomain::Ordered(scale) => scale
                .levels()
                .iter()
                .map(|l| CriterionValue::Level(*l))
                .collect(),
            ValueDomain::YesNo | ValueDomain::Explainable | ValueDomain::Interpretable => {
                vec![CriterionValue::Flag(true), CriterionValue::Flag(false)]
            }
            ValueDomain::Training => vec![
                CriterionValue::Training(TrainingType::Supervised),
                CriterionValue::Training(TrainingType::Unsupervised),
                CriterionValue::Training(TrainingType::Reinforcement),
            ],
            ValueDomain::Attributes => AttributeType::ALL
                .into_iter()
                .map(CriterionValue::Attribute)
                .collect(),
            ValueDomain::Accuracy => AccuracyBucket::ALL
                .into_iter()
                .map(CriterionValue::Accuracy)
                .collect(),
        }
    }

    pub fn parse(self, label: &str) -> Option<CriterionValue> {
        self.values()
            .into_iter()
            .find(|v| v.label_in(self) == Some(label))
    }
}

/// A single value of some criterion, independent of labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriterionValue {
    Level(Level),
    Flag(bool),
    Training(TrainingType),
    Attribute(AttributeType),
    Accuracy(AccuracyBucket),
}

impl CriterionValue {
    /// Label of this value in `domain`, or `None` when it does not belong.
    pub fn label_in(&self, domain: ValueDomain) -> Option<&'static str> {
        match (domain, *self) {
            (ValueDomain::Ordered(scale), CriterionValue::Level(l)) if scale.contains(l) => {
                Some(l.label())
            }
            (ValueDomain::YesNo, CriterionValue::Flag(b)) => Some(if b { "Yes" } else { "No" }),
            (ValueDomain::Explainable, CriterionValue::Flag(b)) => {
                Some(if b { "Explainable" } else { "Not explainable" })
            }
            (ValueDomain::Interpretable, CriterionValue::Flag(b)) => Some(if b {
                "Interpretable"
            } else {
                "Not interpretable"
            }),
            (ValueDomain::Training, CriterionValue::Training(t)) => Some(t.label()),
            (ValueDomain::Attributes, CriterionValue::Attribute(a)) => Some(a.label()),
            (ValueDomain::Accuracy, CriterionValue::Accuracy(b)) => Some(b.label()),
            _ => None,
        }
    }
}

pub struct CriterionInfo {
    pub id: &'static str,
    pub name: &'static str,
    pub grade: WeightGrade,
    pub domain: ValueDomain,
}

impl Criterion {
    pub const ALL: [Criterion; 27] = [
        Criterion::TrainingType,
        Criterion::Explainability,
        Criterion::Interpretability,
        Criterion::InputOrderSensitivity,
        Criterion::Accuracy,
        Criterion::ToleranceCorrelatedAttributes,
        Criterion::OverfittingResilience,
        Criterion::ToleranceDataImbalance,
        Criterion::HyperparameterEase,
        Criterion::TrainingComplexity,
        Criterion::Multiclass,
        Criterion::VolumeForConvergence,
        Criterion::HighDimensionality,
        Criterion::ToleranceMissingValues,
        Criterion::Incrementality,
        Criterion::Transparency,
        Criterion::ToleranceNoise,
        Criterion::DependencyReliance,
        Criterion::ComplexData,
        Criterion::ToleranceBiasedDistribution,
        Criterion::DecisionComplexity,
        Criterion::MemoryRequirements,
        Criterion::Parallelism,
        Criterion::FederatedLearning,
        Criterion::DecisionTimeBounded,
        Criterion::AttributeTypes,
        Criterion::Evolutivity,
    ];

    pub fn info(self) -> CriterionInfo {
        use Criterion::*;
        use ValueDomain::*;
        use WeightGrade as G;
        let (id, name, grade, domain) = match self {
            TrainingType => ("training_type", "Training type", G::A, Training),
            Explainability => ("explainability", "Explainability", G::A, Explainable),
            Interpretability => ("interpretability", "Interpretability", G::AB, Interpretable),
            InputOrderSensitivity => (
                "input_order_sensitivity",
                "Model building's sensitivity to input order",
                G::AB,
                Ordered(Scale::NoneBased),
            ),
            Criterion::Accuracy => ("accuracy", "Accuracy", G::B, ValueDomain::Accuracy),
            ToleranceCorrelatedAttributes => (
                "tolerance_correlated_attributes",
                "Tolerance to correlated attributes",
                G::B,
                Ordered(Scale::NoneBased),
            ),
            OverfittingResilience => (
                "overfitting_resilience",
                "Resilience to overfitting",
                G::B,
                Ordered(Scale::NoneBased),
            ),
            ToleranceDataImbalance => (
                "tolerance_data_imbalance",
                "Tolerance to data imbalance",
                G::B,
                Ordered(Scale::NoneBased),
            ),
            HyperparameterEase => (
                "hyperparameter_ease",
                "Ease of hyper-parameter setting",
                G::B,
                Ordered(Scale::ThreeLevel),
            ),
            TrainingComplexity => (
                "training_complexity",
                "Model training complexity",
                G::B,
                Ordered(Scale::ThreeLevel),
            ),
            Multiclass => (
                "multiclass",
                "Ability to handle multiple classes",
                G::B,
                YesNo,
            ),
            VolumeForConvergence => (
                "volume_for_convergence",
                "Volume of data required for convergence",
                G::B,
                Ordered(Scale::ThreeLevel),
            ),
            HighDimensionality => (
                "high_dimensionality",
                "Ability to handle highly dimensional data",
                G::BC,
                YesNo,
            ),
            ToleranceMissingValues => (
                "tolerance_missing_values",
                "Ability to handle missing records or attributes",
                G::BC,
                Ordered(Scale::NoneBased),
            ),
            Incrementality => ("incrementality", "Incrementality", G::C, YesNo),
            Transparency => ("transparency", "Transparency", G::C, YesNo),
            ToleranceNoise => (
                "tolerance_noise",
                "Tolerance to noise",
                G::C,
                Ordered(Scale::ThreeLevel),
            ),
            DependencyReliance => (
                "dependency_reliance",
                "Reliance on dependencies between characteristics",
                G::C,
                Ordered(Scale::NoneBased),
            ),
            ComplexData => (
                "complex_data",
                "Ability to manage complex data",
                G::C,
                Ordered(Scale::NoneBased),
            ),
            ToleranceBiasedDistribution => (
                "tolerance_biased_distribution",
                "Tolerance for biased data distributions",
                G::C,
                Ordered(Scale::ThreeLevel),
            ),
            DecisionComplexity => (
                "decision_complexity",
                "Decision computational complexity",
                G::C,
                Ordered(Scale::ThreeLevel),
            ),
            MemoryRequirements => (
                "memory_requirements",
                "Memory requirements",
                G::C,
                Ordered(Scale::ThreeLevel),
            ),
            Parallelism => (
                "parallelism",
                "Potential for parallelism/distribution",
                G::C,
                Ordered(Scale::Parallelism),
            ),
            FederatedLearning => (
                "federated_learning",
                "Support for federated learning",
                G::C,
                Ordered(Scale::ThreeLevel),
            ),
            DecisionTimeBounded => (
                "decision_time_bounded",
                "Decision time boundedness",
                G::C,
                YesNo,
            ),
            AttributeTypes => ("attribute_types", "Types of attributes", G::D, Attributes),
            Evolutivity => (
                "evolutivity",
                "Evolutivity",
                G::D,
                Ordered(Scale::ThreeLevel),
            ),
        };
        CriterionInfo {
            id,
            name,
            grade,
            domain,
        }
    }

    pub fn id(self) -> &'static str {
        self.info().id
    }

    pub fn domain(self) -> ValueDomain {
        self.info().domain
    }

    /// Grade listed for the criterion in the reference table.
    pub fn default_grade(self) -> WeightGrade {
        self.info().grade
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| format!("unknown criterion id `{s}`"))
    }
}

/// Criteria every family must carry a value for: the ones the scoring
/// functions read.
pub const REQUIRED_CRITERIA: [Criterion; 16] = [
    Criterion::TrainingType,
    Criterion::Explainability,
    Criterion::Interpretability,
    Criterion::Accuracy,
    Criterion::Incrementality,
    Criterion::Evolutivity,
    Criterion::TrainingComplexity,
    Criterion::MemoryRequirements,
    Criterion::Parallelism,
    Criterion::DecisionComplexity,
    Criterion::VolumeForConvergence,
    Criterion::ToleranceMissingValues,
    Criterion::AttributeTypes,
    Criterion::ToleranceDataImbalance,
    Criterion::ToleranceNoise,
    Criterion::ToleranceBiasedDistribution,
];

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn ids_are_unique_and_parse_back() {
        let ids: HashSet<&str> = Criterion::ALL.iter().map(|c| c.id()).collect();
        assert_eq!(ids.len(), 27);
        for c in Criterion::ALL {
            assert_eq!(c.id().parse::<Criterion>().unwrap(), c);
            assert_eq!(
                serde_json::to_string(&c).unwrap(),
                format!("\"{}\"", c.id())
            );
        }
    }

    #[test]
    fn domain_labels_parse_back() {
        for c in Criterion::ALL {
            let d = c.domain();
            for v in d.values() {
                let label = v.label_in(d).unwrap();
                assert_eq!(d.parse(label), Some(v));
            }
            assert_eq!(d.parse("Purple"), None);
        }
    }

    #[test]
    fn flag_labels_follow_domain() {
        assert_eq!(
            ValueDomain::Explainable.parse("Not explainable"),
            Some(CriterionValue::Flag(false))
        );
        assert_eq!(ValueDomain::YesNo.parse("Explainable"), None);
        assert_eq!(
            ValueDomain::Interpretable.parse("Interpretable"),
            Some(CriterionValue::Flag(true))
        );
    }

    #[test]
    fn grade_a_criteria() {
        let a: Vec<_> = Criterion::ALL
            .into_iter()
            .filter(|c| c.default_grade() == WeightGrade::A)
            .collect();
        assert_eq!(a, vec![Criterion::TrainingType, Criterion::Explainability]);
    }
}
