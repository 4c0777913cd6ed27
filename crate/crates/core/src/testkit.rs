//! Seeded random problems and families for property tests.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::catalog::{
    AlgorithmFamilyProfile, AttributeType, Catalog, Criterion, CriterionValueSet, Scale,
};
use crate::catalog::{CriterionValue, Level};
use crate::engine::{aggregate, solves, EngineConfig};
use crate::pipeline::{DataConditions, StepKind};
use crate::problem::{
    CareLevel, DataPropertyValue, DataValue, DecisionSpeed, Distribution, DomainRequirementValue,
    DomainValue, Homogeneity, Labeling, MLProblem, SpeedMetric,
};
use crate::validation::oracle_solves;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick<T: Copy, R: Rng>(rng: &mut R, xs: &[T]) -> T {
    *xs.choose(rng).expect("non-empty choice")
}

/// A family rating every criterion with one or two distinct values.
pub fn random_family<R: Rng>(rng: &mut R, id: &str) -> AlgorithmFamilyProfile {
    let mut criterion_values = BTreeMap::new();
    for c in Criterion::ALL {
        let all = c.domain().values();
        let n = if all.len() > 1 && rng.gen_bool(0.3) {
            2
        } else {
            1
        };
        let chosen: Vec<_> = all.choose_multiple(rng, n).copied().collect();
        criterion_values.insert(c, CriterionValueSet::new(chosen));
    }
    AlgorithmFamilyProfile {
        id: id.to_string(),
        name: id.to_string(),
        description: String::new(),
        criterion_values,
    }
}

pub fn random_catalog<R: Rng>(rng: &mut R, families: usize) -> Catalog {
    let mut c = Catalog::with_builtin_criteria();
    c.families = (0..families)
        .map(|i| random_family(rng, &format!("family-{i:02}")))
        .collect();
    c
}

fn care<R: Rng>(rng: &mut R) -> CareLevel {
    pick(rng, &CareLevel::ALL)
}

fn random_domain<R: Rng>(rng: &mut R, i: usize) -> DomainValue {
    let canonical = Scale::Canonical.levels();
    match i {
        0 => DomainValue::Accuracy(pick(rng, &[0.5, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0])),
        1 => DomainValue::Explainability(rng.gen_bool(0.8)),
        2 => DomainValue::Interpretability(rng.gen_bool(0.8)),
        3 => DomainValue::Adaptability(rng.gen_bool(0.8)),
        4 => DomainValue::CostCpu(pick(rng, canonical)),
        5 => DomainValue::CostData(pick(rng, canonical)),
        _ => DomainValue::DecisionSpeed(DecisionSpeed {
            metric: pick(rng, &[SpeedMetric::Max, SpeedMetric::Avg, SpeedMetric::P95]),
            millis: pick(rng, &[0.5, 1.0, 10.0, 50.0, 100.0, 999.0, 5000.0]),
        }),
    }
}

fn random_data<R: Rng>(rng: &mut R, i: usize) -> DataValue {
    let three = Scale::ThreeLevel.levels();
    match i {
        0 => DataValue::Labeling(pick(
            rng,
            &[
                Labeling::Labeled,
                Labeling::Unlabeled,
                Labeling::ToBeLabeled,
            ],
        )),
        1 => DataValue::Volume(pick(rng, three)),
        2 => DataValue::MissingValues(pick(rng, Scale::NoneBased.levels())),
        3 => {
            let mut types = BTreeSet::new();
            while types.is_empty() {
                types = AttributeType::ALL
                    .into_iter()
                    .filter(|_| rng.gen_bool(0.5))
                    .collect();
            }
            DataValue::DataType(types)
        }
        4 => DataValue::Seasonality(rng.gen_bool(0.5)),
        5 => DataValue::Representativity(pick(rng, three)),
        6 => DataValue::Homogeneity(Homogeneity {
            classes_comparable: pick(rng, &[None, Some(true), Some(false)]),
            scales_similar: rng.gen_bool(0.5),
        }),
        _ => DataValue::Distribution(pick(rng, &[Distribution::Normal, Distribution::Unknown])),
    }
}

/// A problem holding a random subset of requirements. Data properties are
/// included less often so that domain care levels matter.
pub fn random_problem<R: Rng>(rng: &mut R, id: &str) -> MLProblem {
    let mut p = MLProblem {
        id: id.to_string(),
        description: String::new(),
        domain_requirements: Vec::new(),
        data_properties: Vec::new(),
        dataset_ref: None,
    };
    for i in 0..7 {
        if rng.gen_bool(0.6) {
            let v = random_domain(rng, i);
            let c = care(rng);
            p.domain_requirements
                .push(DomainRequirementValue::new(v, c));
        }
    }
    for i in 0..8 {
        if rng.gen_bool(0.4) {
            let v = random_data(rng, i);
            p.data_properties.push(DataPropertyValue::expert(v));
        }
    }
    p.domain_requirements.shuffle(rng);
    p.data_properties.shuffle(rng);
    p
}

/// Outcome of a property sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    /// Problems drawn, scorable or not.
    pub drawn: usize,
    /// Problems with at least one weighted requirement.
    pub scorable: usize,
    /// Family scorings checked.
    pub checked: usize,
}

/// Draws problems with a fresh catalog each until `wanted` scorable problems
/// have been seen, calling `check` on each (problem, catalog) pair.
pub fn sweep(
    seed: u64,
    wanted: usize,
    families: usize,
    mut check: impl FnMut(&MLProblem, &Catalog) -> Result<usize, String>,
) -> Result<Sweep, String> {
    let mut rng = rng(seed);
    let mut s = Sweep {
        drawn: 0,
        scorable: 0,
        checked: 0,
    };
    while s.scorable < wanted {
        let pb = random_problem(&mut rng, &format!("problem-{}", s.drawn));
        let catalog = random_catalog(&mut rng, families);
        s.drawn += 1;
        if !crate::engine::scored_requirements(&pb).is_empty()
            && crate::engine::rank_families(&pb, &catalog, &EngineConfig::default()).is_ok()
        {
            s.scorable += 1;
        }
        s.checked += check(&pb, &catalog).map_err(|e| format!("{}: {e}", pb.id))?;
    }
    Ok(s)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Range, weight-scaling invariance, monotonicity in each entry and
/// equivalence of care=Not with omission, for every family of `catalog`.
pub fn check_score_properties<R: Rng>(
    rng: &mut R,
    pb: &MLProblem,
    catalog: &Catalog,
    tol: f64,
) -> Result<usize, String> {
    let cfg = EngineConfig::default();
    let mut checked = 0;
    for af in &catalog.families {
        let base = solves(af, pb, &cfg);
        for k in [0.5, 2.0, 10.0] {
            let scaled = solves(af, pb, &cfg.scaled(k));
            match (&base, &scaled) {
                (Ok(a), Ok(b)) if close(a.solves, b.solves, tol) => {}
                (Err(a), Err(b)) if a == b => {}
                _ => {
                    return Err(format!(
                        "{}: scaling by {k} changed {base:?} to {scaled:?}",
                        af.id
                    ))
                }
            }
        }
        let Ok(b) = base else { continue };
        if !(0.0..=1.0).contains(&b.solves) {
            return Err(format!("{}: solves {} outside [0, 1]", af.id, b.solves));
        }
        for i in 0..b.entries.len() {
            let mut raised = b.entries.clone();
            let s = raised[i].satisfaction;
            raised[i].satisfaction = s + (1.0 - s) * rng.gen_range(0.0..=1.0);
            let after = aggregate(&raised).map_err(|e| e.to_string())?;
            if after < b.solves - tol {
                return Err(format!(
                    "{}: raising entry {i} lowered {} to {after}",
                    af.id, b.solves
                ));
            }
        }
        checked += 1;
    }

    // Setting one domain requirement to Not must equal dropping it.
    if !pb.domain_requirements.is_empty() {
        let i = rng.gen_range(0..pb.domain_requirements.len());
        let mut with_not = pb.clone();
        with_not.domain_requirements[i].care = CareLevel::Not;
        let mut without = pb.clone();
        without.domain_requirements.remove(i);
        for af in &catalog.families {
            let a = solves(af, &with_not, &cfg);
            let b = solves(af, &without, &cfg);
            match (&a, &b) {
                (Ok(x), Ok(y)) if close(x.solves, y.solves, tol) && x.entries == y.entries => {}
                (Err(x), Err(y)) if x == y => {}
                _ => return Err(format!("{}: care=Not gave {a:?}, omission {b:?}", af.id)),
            }
        }
    }
    Ok(checked)
}

/// Engine and oracle agree on every family of `catalog`, including on
/// which problems cannot be scored.
pub fn check_oracle_agreement(
    pb: &MLProblem,
    catalog: &Catalog,
    tol: f64,
) -> Result<usize, String> {
    let cfg = EngineConfig::default();
    let mut checked = 0;
    for af in &catalog.families {
        let engine = solves(af, pb, &cfg);
        let oracle = oracle_solves(af, pb, catalog, &cfg);
        match (&engine, &oracle) {
            (Ok(e), Ok(o)) if close(e.solves, *o, tol) => checked += 1,
            (Err(_), Err(_)) => {}
            _ => return Err(format!("{}: engine {engine:?}, oracle {oracle:?}", af.id)),
        }
    }
    Ok(checked)
}

fn rule_family(values: &[(Criterion, CriterionValue)]) -> AlgorithmFamilyProfile {
    let mut af = random_family(&mut rng(5), "fixture-family");
    // Tolerant everywhere unless a case says otherwise.
    let tolerant = [
        (Criterion::ToleranceMissingValues, Level::High),
        (Criterion::ToleranceNoise, Level::High),
        (Criterion::ToleranceCorrelatedAttributes, Level::High),
    ];
    for (c, l) in tolerant {
        af.criterion_values
            .insert(c, CriterionValueSet::single(CriterionValue::Level(l)));
    }
    af.criterion_values.insert(
        Criterion::AttributeTypes,
        CriterionValueSet::new(
            AttributeType::ALL
                .into_iter()
                .map(CriterionValue::Attribute)
                .collect(),
        ),
    );
    for (c, v) in values {
        af.criterion_values
            .insert(*c, CriterionValueSet::single(*v));
    }
    af
}

fn level_value(c: Criterion, l: Level) -> (Criterion, CriterionValue) {
    (c, CriterionValue::Level(l))
}

pub fn clean_conditions() -> DataConditions {
    DataConditions {
        missing_level: Some(Level::None),
        data_types: [AttributeType::Numerical].into(),
        homogeneity: Some(Homogeneity {
            classes_comparable: Some(true),
            scales_similar: true,
        }),
        correlated: Vec::new(),
    }
}

#[derive(Debug, Clone)]
pub struct RuleCase {
    pub rule: &'static str,
    pub step: StepKind,
    pub family: AlgorithmFamilyProfile,
    pub data: DataConditions,
    pub fires: bool,
}

/// A firing and a non-firing fixture for each shipped rule.
pub fn rule_cases() -> Vec<RuleCase> {
    let missing = DataConditions {
        missing_level: Some(Level::Medium),
        ..clean_conditions()
    };
    let mixed = DataConditions {
        data_types: [AttributeType::Categorical, AttributeType::Numerical].into(),
        ..clean_conditions()
    };
    let unscaled = DataConditions {
        homogeneity: Some(Homogeneity {
            classes_comparable: Some(true),
            scales_similar: false,
        }),
        ..clean_conditions()
    };
    let correlated = DataConditions {
        correlated: vec![("income".into(), "spend".into())],
        ..clean_conditions()
    };
    let unbalanced = DataConditions {
        homogeneity: Some(Homogeneity {
            classes_comparable: Some(false),
            scales_similar: true,
        }),
        ..clean_conditions()
    };
    let numeric_only = (
        Criterion::AttributeTypes,
        CriterionValue::Attribute(AttributeType::Numerical),
    );
    vec![
        RuleCase {
            rule: "missing-values",
            step: StepKind::Imputation,
            family: rule_family(&[level_value(Criterion::ToleranceMissingValues, Level::Low)]),
            data: missing.clone(),
            fires: true,
        },
        RuleCase {
            rule: "missing-values",
            step: StepKind::Imputation,
            family: rule_family(&[level_value(
                Criterion::ToleranceMissingValues,
                Level::Medium,
            )]),
            data: missing,
            fires: false,
        },
        RuleCase {
            rule: "data-type-mismatch",
            step: StepKind::Encoding,
            family: rule_family(&[numeric_only]),
            data: mixed.clone(),
            fires: true,
        },
        RuleCase {
            rule: "data-type-mismatch",
            step: StepKind::Encoding,
            family: rule_family(&[]),
            data: mixed,
            fires: false,
        },
        RuleCase {
            rule: "dissimilar-scales",
            step: StepKind::Normalization,
            family: rule_family(&[level_value(Criterion::ToleranceNoise, Level::Medium)]),
            data: unscaled.clone(),
            fires: true,
        },
        RuleCase {
            rule: "dissimilar-scales",
            step: StepKind::Normalization,
            family: rule_family(&[]),
            data: unscaled,
            fires: false,
        },
        RuleCase {
            rule: "correlated-attributes",
            step: StepKind::DimensionalityReduction,
            family: rule_family(&[level_value(
                Criterion::ToleranceCorrelatedAttributes,
                Level::Low,
            )]),
            data: correlated.clone(),
            fires: true,
        },
        RuleCase {
            rule: "correlated-attributes",
            step: StepKind::DimensionalityReduction,
            family: rule_family(&[]),
            data: correlated,
            fires: false,
        },
        RuleCase {
            rule: "inhomogeneous-data",
            step: StepKind::Denoising,
            family: rule_family(&[level_value(Criterion::ToleranceNoise, Level::Low)]),
            data: unbalanced.clone(),
            fires: true,
        },
        RuleCase {
            rule: "inhomogeneous-data",
            step: StepKind::Denoising,
            family: rule_family(&[level_value(Criterion::ToleranceNoise, Level::Medium)]),
            data: unbalanced,
            fires: false,
        },
    ]
}

/// Family and data on which every shipped rule fires.
pub fn everything_fires() -> (AlgorithmFamilyProfile, DataConditions) {
    let af = rule_family(&[
        level_value(Criterion::ToleranceMissingValues, Level::None),
        level_value(Criterion::ToleranceNoise, Level::Low),
        level_value(Criterion::ToleranceCorrelatedAttributes, Level::Low),
        (
            Criterion::AttributeTypes,
            CriterionValue::Attribute(AttributeType::Numerical),
        ),
    ]);
    let data = DataConditions {
        missing_level: Some(Level::Low),
        data_types: [AttributeType::Categorical, AttributeType::Numerical].into(),
        homogeneity: Some(Homogeneity {
            classes_comparable: Some(false),
            scales_similar: false,
        }),
        correlated: vec![("income".into(), "spend".into())],
    };
    (af, data)
}
