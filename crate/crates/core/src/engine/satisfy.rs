//! Per-requirement satisfaction functions. Each returns a value in `[0, 1]`.
//!
//! When a family lists several values for a criterion, the most favourable
//! one is used: at least one member of the family has it.

use std::collections::BTreeSet;

use crate::catalog::{
    AlgorithmFamilyProfile, AttributeType, Criterion, Level, LinguisticValue, Scale, TrainingType,
    ValueDomain, WeightGrade,
};
use crate::problem::{DecisionSpeed, Distribution, Homogeneity, Labeling};

use super::fuzzy::{canonical_by_rank, complement, fuzzy_leq, normalized};
use super::{EngineConfig, EngineError};

fn missing(af: &AlgorithmFamilyProfile, criterion: Criterion) -> EngineError {
    EngineError::MissingValue {
        family: af.id.clone(),
        criterion,
    }
}

fn levels(
    af: &AlgorithmFamilyProfile,
    criterion: Criterion,
) -> Result<Vec<LinguisticValue>, EngineError> {
    let ValueDomain::Ordered(scale) = criterion.domain() else {
        unreachable!("{criterion} is not an ordered criterion");
    };
    let values: Vec<_> = af
        .values(criterion)
        .map(|set| {
            set.levels()
                .filter_map(|l| LinguisticValue::new(scale, l).ok())
                .collect()
        })
        .unwrap_or_default();
    if values.is_empty() {
        Err(missing(af, criterion))
    } else {
        Ok(values)
    }
}

/// Best score over the family's values for an ordered criterion.
fn best_level(
    af: &AlgorithmFamilyProfile,
    criterion: Criterion,
    score: impl Fn(&LinguisticValue) -> Result<f64, EngineError>,
) -> Result<f64, EngineError> {
    levels(af, criterion)?
        .iter()
        .map(score)
        .try_fold(0.0_f64, |acc, s| Ok(acc.max(s?)))
}

fn any_flag(af: &AlgorithmFamilyProfile, criterion: Criterion) -> Result<bool, EngineError> {
    let flags: Vec<bool> = af
        .values(criterion)
        .map(|s| s.flags().collect())
        .unwrap_or_default();
    if flags.is_empty() {
        Err(missing(af, criterion))
    } else {
        Ok(flags.contains(&true))
    }
}

pub fn satisfies_accuracy(af: &AlgorithmFamilyProfile, required: f64) -> Result<f64, EngineError> {
    let buckets: Vec<_> = af
        .values(Criterion::Accuracy)
        .map(|s| s.accuracy_buckets().collect())
        .unwrap_or_default();
    buckets
        .iter()
        .map(|b| {
            let acc = b.representative();
            if acc >= required {
                1.0
            } else {
                acc / required
            }
        })
        .reduce(f64::max)
        .ok_or_else(|| missing(af, Criterion::Accuracy))
}

/// 1 when the family holds the positive value of a yes/no criterion.
pub fn satisfies_flag(
    af: &AlgorithmFamilyProfile,
    criterion: Criterion,
) -> Result<f64, EngineError> {
    Ok(if any_flag(af, criterion)? { 1.0 } else { 0.0 })
}

pub fn satisfies_adaptability(
    af: &AlgorithmFamilyProfile,
    cfg: &EngineConfig,
) -> Result<f64, EngineError> {
    let incremental = satisfies_flag(af, Criterion::Incrementality)?;
    let evolutive = best_level(af, Criterion::Evolutivity, |v| Ok(normalized(v)))?;
    let (wc, wd) = (cfg.weight(WeightGrade::C), cfg.weight(WeightGrade::D));
    Ok((wc * incremental + wd * evolutive) / (wc + wd))
}

pub fn satisfies_cost_cpu(
    af: &AlgorithmFamilyProfile,
    budget: &LinguisticValue,
    cfg: &EngineConfig,
) -> Result<f64, EngineError> {
    let training = best_level(af, Criterion::TrainingComplexity, |v| fuzzy_leq(v, budget))?;
    let memory = best_level(af, Criterion::MemoryRequirements, |v| fuzzy_leq(v, budget))?;
    let parallel = best_level(af, Criterion::Parallelism, |v| {
        fuzzy_leq(&complement(&canonical_by_rank(v))?, budget)
    })?;
    let (wb, wc) = (cfg.weight(WeightGrade::B), cfg.weight(WeightGrade::C));
    Ok((wb * training + wc * memory + wc * parallel) / (wb + 2.0 * wc))
}

pub fn satisfies_cost_memory(
    af: &AlgorithmFamilyProfile,
    budget: &LinguisticValue,
) -> Result<f64, EngineError> {
    best_level(af, Criterion::MemoryRequirements, |v| fuzzy_leq(v, budget))
}

/// Mean of whichever cost sub-scores have a budget.
pub fn satisfies_cost(
    af: &AlgorithmFamilyProfile,
    cpu_budget: Option<&LinguisticValue>,
    memory_budget: Option<&LinguisticValue>,
    cfg: &EngineConfig,
) -> Result<f64, EngineError> {
    let mut parts = Vec::with_capacity(2);
    if let Some(b) = cpu_budget {
        parts.push(satisfies_cost_cpu(af, b, cfg)?);
    }
    if let Some(b) = memory_budget {
        parts.push(satisfies_cost_memory(af, b)?);
    }
    if parts.is_empty() {
        return Err(EngineError::Unscorable("no cost budget given".into()));
    }
    Ok(parts.iter().sum::<f64>() / parts.len() as f64)
}

fn labeling_compatible(labeling: Labeling, training: TrainingType) -> bool {
    matches!(
        (labeling, training),
        (Labeling::Labeled, TrainingType::Supervised)
            | (Labeling::ToBeLabeled, TrainingType::Supervised)
            | (Labeling::Unlabeled, TrainingType::Unsupervised)
    )
}

pub fn satisfies_labeling(
    af: &AlgorithmFamilyProfile,
    labeling: Labeling,
) -> Result<f64, EngineError> {
    let types: Vec<_> = af
        .values(Criterion::TrainingType)
        .map(|s| s.training_types().collect())
        .unwrap_or_default();
    if types.is_empty() {
        return Err(missing(af, Criterion::TrainingType));
    }
    Ok(if types.iter().any(|t| labeling_compatible(labeling, *t)) {
        1.0
    } else {
        0.0
    })
}

/// Data volume needed for convergence against the available volume bucket.
pub fn satisfies_volume(
    af: &AlgorithmFamilyProfile,
    available: &LinguisticValue,
) -> Result<f64, EngineError> {
    best_level(af, Criterion::VolumeForConvergence, |v| {
        fuzzy_leq(v, available)
    })
}

pub fn satisfies_missing(
    af: &AlgorithmFamilyProfile,
    missing_level: &LinguisticValue,
) -> Result<f64, EngineError> {
    best_level(af, Criterion::ToleranceMissingValues, |v| {
        fuzzy_leq(missing_level, v)
    })
}

/// Fraction of the data's attribute types the family accepts.
pub fn satisfies_datatype(
    af: &AlgorithmFamilyProfile,
    data_types: &BTreeSet<AttributeType>,
) -> Result<f64, EngineError> {
    let supported: BTreeSet<_> = af
        .values(Criterion::AttributeTypes)
        .map(|s| s.attribute_types().collect())
        .unwrap_or_default();
    if supported.is_empty() {
        return Err(missing(af, Criterion::AttributeTypes));
    }
    if data_types.is_empty() {
        return Ok(1.0);
    }
    let hit = data_types.intersection(&supported).count();
    Ok(hit as f64 / data_types.len() as f64)
}

pub fn satisfies_seasonality(af: &AlgorithmFamilyProfile) -> Result<f64, EngineError> {
    best_level(af, Criterion::Evolutivity, |v| Ok(normalized(v)))
}

/// Imbalance the data imposes on the learner: the less representative the
/// data, the more tolerance is needed.
pub fn imbalance_demand(representativity: Level) -> Level {
    match representativity {
        Level::High => Level::None,
        Level::Medium => Level::Medium,
        _ => Level::High,
    }
}

pub fn satisfies_representativity(
    af: &AlgorithmFamilyProfile,
    representativity: Level,
) -> Result<f64, EngineError> {
    let demand = LinguisticValue::new(Scale::NoneBased, imbalance_demand(representativity))
        .expect("demand on None-based scale");
    best_level(af, Criterion::ToleranceDataImbalance, |v| {
        fuzzy_leq(&demand, v)
    })
}

/// Inhomogeneity implied by the number of failed checks.
pub fn inhomogeneity(h: &Homogeneity) -> Level {
    match h.failed_checks() {
        0 => Level::None,
        1 => Level::Medium,
        _ => Level::High,
    }
}

pub fn satisfies_homogeneity(
    af: &AlgorithmFamilyProfile,
    h: &Homogeneity,
) -> Result<f64, EngineError> {
    let demand = LinguisticValue::new(Scale::NoneBased, inhomogeneity(h))
        .expect("demand on None-based scale");
    best_level(af, Criterion::ToleranceNoise, |v| fuzzy_leq(&demand, v))
}

pub fn satisfies_distribution(
    af: &AlgorithmFamilyProfile,
    dist: Distribution,
) -> Result<f64, EngineError> {
    let tolerance = best_level(af, Criterion::ToleranceBiasedDistribution, |v| {
        Ok(normalized(v))
    })?;
    Ok(match dist {
        Distribution::Normal => 1.0,
        Distribution::Unknown => tolerance,
    })
}

pub fn satisfies_decision_speed(
    af: &AlgorithmFamilyProfile,
    budget: &DecisionSpeed,
    cfg: &EngineConfig,
) -> Result<f64, EngineError> {
    let bucket = LinguisticValue::canonical(cfg.thresholds.decision_speed_bucket(budget.millis))
        .expect("bucket on canonical scale");
    best_level(af, Criterion::DecisionComplexity, |v| fuzzy_leq(v, &bucket))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{seed_catalog, AccuracyBucket, CriterionValue, CriterionValueSet};
    use crate::problem::SpeedMetric;

    /// Family with only the given criteria set.
    fn fam(values: &[(Criterion, &[CriterionValue])]) -> AlgorithmFamilyProfile {
        AlgorithmFamilyProfile {
            id: "f".into(),
            name: "f".into(),
            description: String::new(),
            criterion_values: values
                .iter()
                .map(|(c, v)| (*c, CriterionValueSet::new(v.to_vec())))
                .collect(),
        }
    }

    fn lv(l: Level) -> CriterionValue {
        CriterionValue::Level(l)
    }

    fn canon(l: Level) -> LinguisticValue {
        LinguisticValue::canonical(l).unwrap()
    }

    fn three(l: Level) -> LinguisticValue {
        LinguisticValue::new(Scale::ThreeLevel, l).unwrap()
    }

    fn acc(b: AccuracyBucket) -> AlgorithmFamilyProfile {
        fam(&[(Criterion::Accuracy, &[CriterionValue::Accuracy(b)])])
    }

    #[test]
    fn accuracy() {
        assert_eq!(
            satisfies_accuracy(&acc(AccuracyBucket::AtLeast90), 0.90).unwrap(),
            1.0
        );
        let s = satisfies_accuracy(&acc(AccuracyBucket::From80To90), 0.90).unwrap();
        assert!((s - 0.85 / 0.90).abs() < 1e-15);
        assert!((s - 0.9444).abs() < 1e-4);
        assert_eq!(
            satisfies_accuracy(&acc(AccuracyBucket::AtMost80), 0.75).unwrap(),
            1.0
        );
        assert!(satisfies_accuracy(&fam(&[]), 0.9).is_err());
    }

    #[test]
    fn flags_from_seed() {
        let cat = seed_catalog();
        let dt = cat.family("decision-tree").unwrap();
        let dnn = cat.family("deep-convolutional-network").unwrap();
        assert_eq!(satisfies_flag(dt, Criterion::Explainability).unwrap(), 1.0);
        assert_eq!(satisfies_flag(dnn, Criterion::Explainability).unwrap(), 0.0);
    }

    #[test]
    fn adaptability() {
        let cfg = EngineConfig::default();
        let f = |incr: bool, evol: Level| {
            fam(&[
                (Criterion::Incrementality, &[CriterionValue::Flag(incr)]),
                (Criterion::Evolutivity, &[lv(evol)]),
            ])
        };
        assert_eq!(
            satisfies_adaptability(&f(true, Level::High), &cfg).unwrap(),
            1.0
        );
        assert_eq!(
            satisfies_adaptability(&f(false, Level::Low), &cfg).unwrap(),
            0.0
        );
        assert_eq!(
            satisfies_adaptability(&f(true, Level::Low), &cfg).unwrap(),
            2.0 / 3.0
        );
    }

    fn cost_family(train: Level, mem: Level, par: Level) -> AlgorithmFamilyProfile {
        fam(&[
            (Criterion::TrainingComplexity, &[lv(train)]),
            (Criterion::MemoryRequirements, &[lv(mem)]),
            (Criterion::Parallelism, &[lv(par)]),
        ])
    }

    #[test]
    fn cost_cpu() {
        let cfg = EngineConfig::default();
        // parallelism High complements to Medium.
        let f = cost_family(Level::High, Level::Medium, Level::High);
        let s = satisfies_cost_cpu(&f, &canon(Level::Medium), &cfg).unwrap();
        assert!((s - 5.0 / 6.0).abs() < 1e-12);
        // Full parallelism complements to Medium, so a Medium budget is the
        // tightest one every term can meet.
        let f = cost_family(Level::Low, Level::Low, Level::High);
        assert_eq!(
            satisfies_cost_cpu(&f, &canon(Level::Medium), &cfg).unwrap(),
            1.0
        );
        let s = satisfies_cost_cpu(&f, &canon(Level::Low), &cfg).unwrap();
        assert!((s - (4.0 + 2.0 + 2.0 * 2.0 / 3.0) / 8.0).abs() < 1e-12);
    }

    #[test]
    fn cost_cpu_all_zero() {
        let cfg = EngineConfig::default();
        // Training and memory top out at High on their scale, which is rank 3:
        // against a Low budget each gives 1/3. Parallelism None complements to
        // Very High, giving 0.
        let f = cost_family(Level::High, Level::High, Level::None);
        let s = satisfies_cost_cpu(&f, &canon(Level::Low), &cfg).unwrap();
        assert!((s - (4.0 / 3.0 + 2.0 / 3.0) / 8.0).abs() < 1e-12);
    }

    #[test]
    fn cost_memory_and_mean() {
        let cfg = EngineConfig::default();
        let f = cost_family(Level::High, Level::Medium, Level::High);
        assert_eq!(satisfies_cost_memory(&f, &canon(Level::High)).unwrap(), 1.0);
        let g = cost_family(Level::High, Level::High, Level::High);
        assert_eq!(
            satisfies_cost_memory(&g, &canon(Level::Medium)).unwrap(),
            2.0 / 3.0
        );
        // cpu 5/6, memory 1 -> 11/12
        let s = satisfies_cost(
            &f,
            Some(&canon(Level::Medium)),
            Some(&canon(Level::High)),
            &cfg,
        )
        .unwrap();
        assert!((s - 11.0 / 12.0).abs() < 1e-12);
        let s = satisfies_cost(&g, None, Some(&canon(Level::Medium)), &cfg).unwrap();
        assert_eq!(s, 2.0 / 3.0);
        assert!(satisfies_cost(&g, None, None, &cfg).is_err());
    }

    #[test]
    fn labeling() {
        let sup = fam(&[(
            Criterion::TrainingType,
            &[CriterionValue::Training(TrainingType::Supervised)],
        )]);
        let rl = fam(&[(
            Criterion::TrainingType,
            &[CriterionValue::Training(TrainingType::Reinforcement)],
        )]);
        assert_eq!(satisfies_labeling(&sup, Labeling::Labeled).unwrap(), 1.0);
        assert_eq!(satisfies_labeling(&sup, Labeling::Unlabeled).unwrap(), 0.0);
        assert_eq!(
            satisfies_labeling(&sup, Labeling::ToBeLabeled).unwrap(),
            1.0
        );
        for l in [
            Labeling::Labeled,
            Labeling::Unlabeled,
            Labeling::ToBeLabeled,
        ] {
            assert_eq!(satisfies_labeling(&rl, l).unwrap(), 0.0);
        }
        let both = fam(&[(
            Criterion::TrainingType,
            &[
                CriterionValue::Training(TrainingType::Supervised),
                CriterionValue::Training(TrainingType::Unsupervised),
            ],
        )]);
        assert_eq!(satisfies_labeling(&both, Labeling::Unlabeled).unwrap(), 1.0);
    }

    #[test]
    fn volume() {
        let f = |l| fam(&[(Criterion::VolumeForConvergence, &[lv(l)])]);
        assert_eq!(
            satisfies_volume(&f(Level::Low), &three(Level::High)).unwrap(),
            1.0
        );
        assert_eq!(
            satisfies_volume(&f(Level::High), &three(Level::Low)).unwrap(),
            1.0 / 3.0
        );
        assert_eq!(
            satisfies_volume(&f(Level::Medium), &three(Level::Medium)).unwrap(),
            1.0
        );
    }

    #[test]
    fn missing_values() {
        let f = |l| fam(&[(Criterion::ToleranceMissingValues, &[lv(l)])]);
        let m = |l| LinguisticValue::new(Scale::NoneBased, l).unwrap();
        assert_eq!(
            satisfies_missing(&f(Level::Low), &m(Level::None)).unwrap(),
            1.0
        );
        assert_eq!(
            satisfies_missing(&f(Level::None), &m(Level::High)).unwrap(),
            0.0
        );
        assert_eq!(
            satisfies_missing(&f(Level::Medium), &m(Level::Medium)).unwrap(),
            1.0
        );
    }

    #[test]
    fn datatype() {
        use AttributeType::*;
        let f = |ts: &[AttributeType]| {
            let vals: Vec<_> = ts.iter().map(|t| CriterionValue::Attribute(*t)).collect();
            fam(&[(Criterion::AttributeTypes, &vals)])
        };
        assert_eq!(
            satisfies_datatype(&f(&[Numerical, Categorical]), &[Numerical].into()).unwrap(),
            1.0
        );
        assert_eq!(
            satisfies_datatype(&f(&[Numerical]), &[Categorical, Numerical].into()).unwrap(),
            0.5
        );
        assert_eq!(
            satisfies_datatype(&f(&[Numerical]), &[Textual].into()).unwrap(),
            0.0
        );
    }

    #[test]
    fn seasonality() {
        let f = |l| fam(&[(Criterion::Evolutivity, &[lv(l)])]);
        assert_eq!(satisfies_seasonality(&f(Level::High)).unwrap(), 1.0);
        assert_eq!(satisfies_seasonality(&f(Level::Low)).unwrap(), 0.0);
        assert_eq!(satisfies_seasonality(&f(Level::Medium)).unwrap(), 0.5);
    }

    #[test]
    fn representativity() {
        let f = |l| fam(&[(Criterion::ToleranceDataImbalance, &[lv(l)])]);
        for tol in [Level::None, Level::Low, Level::Medium, Level::High] {
            assert_eq!(
                satisfies_representativity(&f(tol), Level::High).unwrap(),
                1.0
            );
        }
        assert_eq!(
            satisfies_representativity(&f(Level::None), Level::Low).unwrap(),
            0.0
        );
        assert_eq!(
            satisfies_representativity(&f(Level::Medium), Level::Medium).unwrap(),
            1.0
        );
    }

    #[test]
    fn homogeneity() {
        let f = |l| fam(&[(Criterion::ToleranceNoise, &[lv(l)])]);
        let h = |c: bool, s: bool| Homogeneity {
            classes_comparable: Some(c),
            scales_similar: s,
        };
        assert_eq!(
            satisfies_homogeneity(&f(Level::Low), &h(true, true)).unwrap(),
            1.0
        );
        assert_eq!(
            satisfies_homogeneity(&f(Level::Low), &h(false, false)).unwrap(),
            1.0 / 3.0
        );
        assert_eq!(
            satisfies_homogeneity(&f(Level::Medium), &h(false, true)).unwrap(),
            1.0
        );
        let unchecked = Homogeneity {
            classes_comparable: None,
            scales_similar: false,
        };
        assert_eq!(inhomogeneity(&unchecked), Level::Medium);
    }

    #[test]
    fn distribution() {
        let f = |l| fam(&[(Criterion::ToleranceBiasedDistribution, &[lv(l)])]);
        assert_eq!(
            satisfies_distribution(&f(Level::Low), Distribution::Normal).unwrap(),
            1.0
        );
        assert_eq!(
            satisfies_distribution(&f(Level::High), Distribution::Unknown).unwrap(),
            1.0
        );
        assert_eq!(
            satisfies_distribution(&f(Level::Low), Distribution::Unknown).unwrap(),
            0.0
        );
    }

    #[test]
    fn decision_speed() {
        let cfg = EngineConfig::default();
        let f = |l| fam(&[(Criterion::DecisionComplexity, &[lv(l)])]);
        let ms = |m| DecisionSpeed {
            metric: SpeedMetric::Max,
            millis: m,
        };
        assert_eq!(
            satisfies_decision_speed(&f(Level::Low), &ms(5.0), &cfg).unwrap(),
            1.0
        );
        assert_eq!(
            satisfies_decision_speed(&f(Level::High), &ms(5.0), &cfg).unwrap(),
            1.0 / 3.0
        );
        assert_eq!(
            satisfies_decision_speed(&f(Level::Medium), &ms(500.0), &cfg).unwrap(),
            1.0
        );
    }

    #[test]
    fn optimistic_multi_value() {
        let f = fam(&[(
            Criterion::VolumeForConvergence,
            &[lv(Level::High), lv(Level::Low)],
        )]);
        assert_eq!(satisfies_volume(&f, &three(Level::Low)).unwrap(), 1.0);
    }

    #[test]
    fn missing_criterion_named() {
        match satisfies_seasonality(&fam(&[])) {
            Err(EngineError::MissingValue { criterion, .. }) => {
                assert_eq!(criterion, Criterion::Evolutivity)
            }
            other => panic!("{other:?}"),
        }
    }
}
