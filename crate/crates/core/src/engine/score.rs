use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::catalog::{
    AlgorithmFamilyProfile, Catalog, Criterion, LinguisticValue, Scale, WeightGrade,
};
use crate::problem::{
    requirement_mapping, CareLevel, DataValue, DomainValue, MLProblem, RequirementType,
};

use super::satisfy::*;
use super::{EngineConfig, EngineError};

/// What a breakdown entry scores. The two cost requirements are blended into
/// one entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScoredRequirement {
    Single(RequirementType),
    Cost,
}

impl ScoredRequirement {
    pub fn id(self) -> &'static str {
        match self {
            ScoredRequirement::Single(r) => r.id(),
            ScoredRequirement::Cost => "cost",
        }
    }

    pub fn from_id(s: &str) -> Option<Self> {
        match s {
            "cost" => Some(ScoredRequirement::Cost),
            _ => RequirementType::from_id(s)
                .filter(|r| !matches!(r, RequirementType::CostCpu | RequirementType::CostData))
                .map(ScoredRequirement::Single),
        }
    }

    /// Position in the fixed entry order.
    fn order(self) -> usize {
        match self {
            ScoredRequirement::Cost => RequirementType::CostCpu as usize,
            ScoredRequirement::Single(r) => r as usize,
        }
    }
}

impl fmt::Display for ScoredRequirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for ScoredRequirement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for ScoredRequirement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ScoredRequirement::from_id(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown requirement `{s}`")))
    }
}

fn six_places<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64((x * 1e6).round() / 1e6)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SatisfactionEntry {
    pub requirement_type: ScoredRequirement,
    #[serde(serialize_with = "six_places")]
    pub satisfaction: f64,
    #[serde(serialize_with = "six_places")]
    pub weight: f64,
    pub mapped_criteria: Vec<Criterion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SatisfactionBreakdown {
    pub family_id: String,
    pub entries: Vec<SatisfactionEntry>,
    #[serde(serialize_with = "six_places")]
    pub solves: f64,
}

/// `Σ weight·satisfaction / Σ weight` over entries with positive weight.
pub fn aggregate(entries: &[SatisfactionEntry]) -> Result<f64, EngineError> {
    let (num, den) = entries
        .iter()
        .filter(|e| e.weight > 0.0)
        .fold((0.0, 0.0), |(n, d), e| {
            (n + e.weight * e.satisfaction, d + e.weight)
        });
    if den > 0.0 {
        Ok((num / den).clamp(0.0, 1.0))
    } else {
        Err(EngineError::Unscorable(
            "no requirement carries a positive weight".into(),
        ))
    }
}

/// What the problem asks of a family for one entry.
#[derive(Debug, Clone)]
enum Demand {
    Domain(DomainValue),
    Data(DataValue),
    Cost {
        cpu: Option<LinguisticValue>,
        memory: Option<LinguisticValue>,
    },
}

/// One entry of the problem, independent of any family.
#[derive(Debug, Clone)]
struct Planned {
    requirement: ScoredRequirement,
    care: f64,
    grade: WeightGrade,
    mapped: Vec<Criterion>,
    demand: Demand,
}

/// Strongest grade among the targets, by configured weight.
fn outer_grade(types: &[RequirementType], cfg: &EngineConfig) -> WeightGrade {
    types
        .iter()
        .flat_map(|t| requirement_mapping(*t))
        .map(|m| m.grade)
        .max_by(|a, b| cfg.weight(*a).total_cmp(&cfg.weight(*b)))
        .expect("every requirement maps somewhere")
}

fn mapped(types: &[RequirementType]) -> Vec<Criterion> {
    let mut out: Vec<Criterion> = Vec::new();
    for m in types.iter().flat_map(|t| requirement_mapping(*t)) {
        if !out.contains(&m.criterion) {
            out.push(m.criterion);
        }
    }
    out
}

/// Yes/no requirements stated as "not needed" ask nothing of the family.
fn asks_nothing_domain(v: &DomainValue) -> bool {
    matches!(
        v,
        DomainValue::Explainability(false)
            | DomainValue::Interpretability(false)
            | DomainValue::Adaptability(false)
    )
}

fn plan(pb: &MLProblem, cfg: &EngineConfig) -> Vec<Planned> {
    let mut out = Vec::new();
    let single = |t: RequirementType, care: f64, demand: Demand| Planned {
        requirement: ScoredRequirement::Single(t),
        care,
        grade: outer_grade(&[t], cfg),
        mapped: mapped(&[t]),
        demand,
    };

    let mut cost_cares = Vec::new();
    let (mut cpu, mut memory) = (None, None);
    for d in &pb.domain_requirements {
        if d.care == CareLevel::Not || asks_nothing_domain(&d.value) {
            continue;
        }
        match &d.value {
            DomainValue::CostCpu(l) => {
                cpu = LinguisticValue::canonical(*l).ok();
                cost_cares.push(cfg.care(d.care));
            }
            DomainValue::CostData(l) => {
                memory = LinguisticValue::canonical(*l).ok();
                cost_cares.push(cfg.care(d.care));
            }
            v => out.push(single(
                d.requirement_type(),
                cfg.care(d.care),
                Demand::Domain(v.clone()),
            )),
        }
    }
    if !cost_cares.is_empty() {
        let both = [RequirementType::CostCpu, RequirementType::CostData];
        out.push(Planned {
            requirement: ScoredRequirement::Cost,
            care: cost_cares.iter().sum::<f64>() / cost_cares.len() as f64,
            grade: outer_grade(&both, cfg),
            mapped: mapped(&both),
            demand: Demand::Cost { cpu, memory },
        });
    }

    let must = cfg.care(CareLevel::Must);
    for d in &pb.data_properties {
        if matches!(d.value, DataValue::Seasonality(false)) {
            continue;
        }
        out.push(single(
            d.requirement_type(),
            must,
            Demand::Data(d.value.clone()),
        ));
    }
    out.sort_by_key(|p| p.requirement.order());
    out
}

/// Requirements of `pb` that take part in scoring, in breakdown order.
pub fn scored_requirements(pb: &MLProblem) -> Vec<ScoredRequirement> {
    plan(pb, &EngineConfig::default())
        .into_iter()
        .map(|p| p.requirement)
        .collect()
}

fn satisfaction(
    af: &AlgorithmFamilyProfile,
    demand: &Demand,
    cfg: &EngineConfig,
) -> Result<f64, EngineError> {
    match demand {
        Demand::Domain(v) => match v {
            DomainValue::Accuracy(req) => satisfies_accuracy(af, *req),
            DomainValue::Explainability(_) => satisfies_flag(af, Criterion::Explainability),
            DomainValue::Interpretability(_) => satisfies_flag(af, Criterion::Interpretability),
            DomainValue::Adaptability(_) => satisfies_adaptability(af, cfg),
            DomainValue::DecisionSpeed(s) => satisfies_decision_speed(af, s, cfg),
            DomainValue::CostCpu(_) | DomainValue::CostData(_) => {
                unreachable!("cost requirements are planned as one entry")
            }
        },
        Demand::Cost { cpu, memory } => satisfies_cost(af, cpu.as_ref(), memory.as_ref(), cfg),
        Demand::Data(v) => match v {
            DataValue::Labeling(l) => satisfies_labeling(af, *l),
            DataValue::Volume(l) => satisfies_volume(af, &level_on(Scale::ThreeLevel, *l)?),
            DataValue::MissingValues(l) => satisfies_missing(af, &level_on(Scale::NoneBased, *l)?),
            DataValue::DataType(types) => satisfies_datatype(af, types),
            DataValue::Seasonality(_) => satisfies_seasonality(af),
            DataValue::Representativity(l) => satisfies_representativity(af, *l),
            DataValue::Homogeneity(h) => satisfies_homogeneity(af, h),
            DataValue::Distribution(d) => satisfies_distribution(af, *d),
        },
    }
}

fn level_on(scale: Scale, level: crate::catalog::Level) -> Result<LinguisticValue, EngineError> {
    LinguisticValue::new(scale, level)
        .map_err(|_| EngineError::Unscorable(format!("`{level}` is not on the {scale:?} scale")))
}

/// Family values behind an entry, for display.
fn note(af: &AlgorithmFamilyProfile, criteria: &[Criterion]) -> Option<String> {
    let parts: Vec<String> = criteria
        .iter()
        .filter_map(|c| {
            let set = af.values(*c)?;
            let labels: Vec<_> = set
                .values()
                .iter()
                .filter_map(|v| v.label_in(c.domain()))
                .collect();
            Some(format!("{c}={}", labels.join("|")))
        })
        .collect();
    (!parts.is_empty()).then(|| parts.join(", "))
}

fn entries_for(
    af: &AlgorithmFamilyProfile,
    planned: &[Planned],
    cfg: &EngineConfig,
) -> Result<Vec<SatisfactionEntry>, EngineError> {
    planned
        .iter()
        .map(|p| {
            Ok(SatisfactionEntry {
                requirement_type: p.requirement,
                satisfaction: satisfaction(af, &p.demand, cfg)?,
                weight: p.care * cfg.weight(p.grade),
                mapped_criteria: p.mapped.clone(),
                note: note(af, &p.mapped),
            })
        })
        .collect()
}

/// Scores one family against a problem.
pub fn solves(
    af: &AlgorithmFamilyProfile,
    pb: &MLProblem,
    cfg: &EngineConfig,
) -> Result<SatisfactionBreakdown, EngineError> {
    let planned = plan(pb, cfg);
    let entries = entries_for(af, &planned, cfg)?;
    let solves = aggregate(&entries)?;
    Ok(SatisfactionBreakdown {
        family_id: af.id.clone(),
        entries,
        solves,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyFailure {
    pub family_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Ranking {
    pub ranked: Vec<SatisfactionBreakdown>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<FamilyFailure>,
}

impl Ranking {
    pub fn top(mut self, n: usize) -> Ranking {
        self.ranked.truncate(n);
        self
    }

    pub fn position(&self, family_id: &str) -> Option<usize> {
        self.ranked.iter().position(|b| b.family_id == family_id)
    }
}

/// Scores every family. A family that cannot be scored is reported in
/// `failures` without stopping the others.
pub fn rank_families(
    pb: &MLProblem,
    catalog: &Catalog,
    cfg: &EngineConfig,
) -> Result<Ranking, EngineError> {
    cfg.validate()?;
    let planned = plan(pb, cfg);
    if planned.iter().all(|p| p.care * cfg.weight(p.grade) <= 0.0) {
        return Err(EngineError::Unscorable(
            "no requirement with a care level above Not".into(),
        ));
    }
    let mut ranked = Vec::new();
    let mut failures = Vec::new();
    for af in &catalog.families {
        let result = entries_for(af, &planned, cfg).and_then(|entries| {
            Ok(SatisfactionBreakdown {
                family_id: af.id.clone(),
                solves: aggregate(&entries)?,
                entries,
            })
        });
        match result {
            Ok(b) => ranked.push(b),
            Err(e) => failures.push(FamilyFailure {
                family_id: af.id.clone(),
                reason: e.to_string(),
            }),
        }
    }
    ranked.sort_by(|a, b| {
        b.solves
            .partial_cmp(&a.solves)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.family_id.cmp(&b.family_id))
    });
    failures.sort_by(|a, b| a.family_id.cmp(&b.family_id));
    Ok(Ranking { ranked, failures })
}
