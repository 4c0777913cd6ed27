//! Which algorithm-family criteria each problem requirement is judged
//! against, with the grade each target carries in that role.

use crate::catalog::{Criterion, WeightGrade};

use super::RequirementType;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MappingTarget {
    pub criterion: Criterion,
    pub grade: WeightGrade,
}

const fn t(criterion: Criterion, grade: WeightGrade) -> MappingTarget {
    MappingTarget { criterion, grade }
}

pub fn requirement_mapping(r: RequirementType) -> &'static [MappingTarget] {
    use Criterion as C;
    use RequirementType as R;
    use WeightGrade::{A, B, BC, C as GC, D};
    match r {
        R::Accuracy => const { &[t(C::Accuracy, B)] },
        R::Explainability => const { &[t(C::Explainability, A)] },
        R::Interpretability => const { &[t(C::Interpretability, A)] },
        R::Adaptability => const { &[t(C::Incrementality, GC), t(C::Evolutivity, D)] },
        R::CostCpu => {
            const {
                &[
                    t(C::TrainingComplexity, B),
                    t(C::MemoryRequirements, GC),
                    t(C::Parallelism, GC),
                ]
            }
        }
        R::CostData => const { &[t(C::MemoryRequirements, GC)] },
        R::DecisionSpeed => const { &[t(C::DecisionComplexity, GC)] },
        R::Labeling => const { &[t(C::TrainingType, A)] },
        R::Volume => const { &[t(C::VolumeForConvergence, B)] },
        R::MissingValues => const { &[t(C::ToleranceMissingValues, BC)] },
        R::DataType => const { &[t(C::AttributeTypes, D)] },
        R::Seasonality => const { &[t(C::Evolutivity, D)] },
        R::Representativity => const { &[t(C::ToleranceDataImbalance, B)] },
        R::Homogeneity => const { &[t(C::ToleranceNoise, GC)] },
        R::Distribution => const { &[t(C::ToleranceBiasedDistribution, GC)] },
    }
}
