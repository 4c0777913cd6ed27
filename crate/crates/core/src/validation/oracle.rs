//! Literal recomputation of the Solves score, kept apart from the engine:
//! it reads family values as label strings, carries its own rank tables and
//! resolves multi-valued criteria by trying every combination of single
//! values and keeping the best score.

use std::collections::BTreeMap;

use crate::catalog::{AlgorithmFamilyProfile, Catalog, Criterion};
use crate::engine::EngineConfig;
use crate::problem::{CareLevel, DataValue, DomainValue, Labeling, MLProblem};

fn rank(scale: &str, label: &str) -> Option<f64> {
    let table: &[&str] = match scale {
        "LMHV" => &["Low", "Medium", "High", "Very High"],
        "NLMH" => &["None", "Low", "Medium", "High"],
        "LMH" => &["Low", "Medium", "High"],
        "NPH" => &["None", "Partial", "High"],
        _ => return None,
    };
    table
        .iter()
        .position(|l| *l == label)
        .map(|p| (p + 1) as f64)
}

/// Scale of each ordered criterion used in scoring.
fn scale_of(criterion: &str) -> &'static str {
    match criterion {
        "tolerance_missing_values" | "tolerance_data_imbalance" => "NLMH",
        "parallelism" => "NPH",
        _ => "LMH",
    }
}

/// Extent to which `a` (on `sa`) is at most `b` (on `sb`). A three-level
/// label is read on the other side's four-level scale.
fn fuzzy(sa: &str, a: &str, sb: &str, b: &str) -> f64 {
    let common = if sa == "LMH" { sb } else { sa };
    let r1 = rank(common, a).expect("label on common scale");
    let r2 = rank(common, b).expect("label on common scale");
    (1.0 - (r1 - r2) / 3.0).clamp(0.0, 1.0)
}

fn normalized(criterion: &str, label: &str) -> f64 {
    (rank(scale_of(criterion), label).expect("label on scale") - 1.0) / 2.0
}

fn weight(cfg: &EngineConfig, grade: &str) -> f64 {
    let i = ["A", "A-B", "B", "B-C", "C", "D"]
        .iter()
        .position(|g| *g == grade)
        .expect("grade");
    cfg.grade_weights[i]
}

fn care(cfg: &EngineConfig, c: CareLevel) -> f64 {
    let i = match c {
        CareLevel::Not => 0,
        CareLevel::Could => 1,
        CareLevel::Should => 2,
        CareLevel::Must => 3,
    };
    cfg.care_numerics[i]
}

/// Criteria any requirement reads.
const SCORED: [&str; 16] = [
    "accuracy",
    "explainability",
    "interpretability",
    "incrementality",
    "evolutivity",
    "training_complexity",
    "memory_requirements",
    "parallelism",
    "decision_complexity",
    "training_type",
    "volume_for_convergence",
    "tolerance_missing_values",
    "attribute_types",
    "tolerance_data_imbalance",
    "tolerance_noise",
    "tolerance_biased_distribution",
];

/// One candidate reading of the family: a single label per criterion, except
/// attribute types, which are kept as the full supported set.
type Choice = BTreeMap<&'static str, String>;

fn choices(af: &AlgorithmFamilyProfile) -> Vec<(Choice, Vec<String>)> {
    let mut combos: Vec<Choice> = vec![BTreeMap::new()];
    let mut types = Vec::new();
    for c in Criterion::ALL {
        if !SCORED.contains(&c.id()) {
            continue;
        }
        let Some(set) = af.values(c) else { continue };
        let labels: Vec<String> = set
            .values()
            .iter()
            .filter_map(|v| v.label_in(c.domain()))
            .map(str::to_string)
            .collect();
        if c == Criterion::AttributeTypes {
            types = labels;
            continue;
        }
        combos = combos
            .into_iter()
            .flat_map(|combo| {
                labels.iter().map(move |l| {
                    let mut next = combo.clone();
                    next.insert(c.id(), l.clone());
                    next
                })
            })
            .collect();
    }
    combos.into_iter().map(|c| (c, types.clone())).collect()
}

fn get<'a>(v: &'a Choice, criterion: &str) -> Result<&'a str, String> {
    v.get(criterion)
        .map(String::as_str)
        .ok_or_else(|| format!("missing {criterion}"))
}

fn level_label(l: crate::catalog::Level) -> &'static str {
    l.label()
}

fn solves_once(
    v: &Choice,
    types: &[String],
    pb: &MLProblem,
    cfg: &EngineConfig,
) -> Result<f64, String> {
    let mut terms: Vec<(f64, f64)> = Vec::new();
    let (wa, wb, wbc, wc, wd) = (
        weight(cfg, "A"),
        weight(cfg, "B"),
        weight(cfg, "B-C"),
        weight(cfg, "C"),
        weight(cfg, "D"),
    );

    let mut cost_cares = Vec::new();
    let mut cost_scores = Vec::new();
    for d in &pb.domain_requirements {
        if d.care == CareLevel::Not {
            continue;
        }
        let k = care(cfg, d.care);
        match &d.value {
            DomainValue::Accuracy(req) => {
                let acc = match get(v, "accuracy")? {
                    "<=80%" => 0.75,
                    "[80%,90%]" => 0.85,
                    ">=90%" => 0.95,
                    other => return Err(format!("accuracy {other}")),
                };
                terms.push((k * wb, (acc / req).min(1.0)));
            }
            DomainValue::Explainability(true) => {
                let s = if get(v, "explainability")? == "Explainable" {
                    1.0
                } else {
                    0.0
                };
                terms.push((k * wa, s));
            }
            DomainValue::Interpretability(true) => {
                let s = if get(v, "interpretability")? == "Interpretable" {
                    1.0
                } else {
                    0.0
                };
                terms.push((k * wa, s));
            }
            DomainValue::Adaptability(true) => {
                let incr = if get(v, "incrementality")? == "Yes" {
                    1.0
                } else {
                    0.0
                };
                let evol = normalized("evolutivity", get(v, "evolutivity")?);
                terms.push((k * wc, (wc * incr + wd * evol) / (wc + wd)));
            }
            DomainValue::CostCpu(budget) => {
                let b = level_label(*budget);
                let train = fuzzy("LMH", get(v, "training_complexity")?, "LMHV", b);
                let mem = fuzzy("LMH", get(v, "memory_requirements")?, "LMHV", b);
                let par = rank("NPH", get(v, "parallelism")?).ok_or("parallelism label")?;
                let complement = ["Low", "Medium", "High", "Very High"][(5.0 - par) as usize - 1];
                let par = fuzzy("LMHV", complement, "LMHV", b);
                cost_scores.push((wb * train + wc * mem + wc * par) / (wb + 2.0 * wc));
                cost_cares.push(k);
            }
            DomainValue::CostData(budget) => {
                let b = level_label(*budget);
                cost_scores.push(fuzzy("LMH", get(v, "memory_requirements")?, "LMHV", b));
                cost_cares.push(k);
            }
            DomainValue::DecisionSpeed(s) => {
                let t = cfg.thresholds.decision_speed_ms;
                let bucket = if s.millis <= t[0] {
                    "Low"
                } else if s.millis <= t[1] {
                    "Medium"
                } else if s.millis <= t[2] {
                    "High"
                } else {
                    "Very High"
                };
                let sat = fuzzy("LMH", get(v, "decision_complexity")?, "LMHV", bucket);
                terms.push((k * wc, sat));
            }
            _ => {}
        }
    }
    if !cost_cares.is_empty() {
        let k = cost_cares.iter().sum::<f64>() / cost_cares.len() as f64;
        let s = cost_scores.iter().sum::<f64>() / cost_scores.len() as f64;
        terms.push((k * wb, s));
    }

    let must = care(cfg, CareLevel::Must);
    for d in &pb.data_properties {
        match &d.value {
            DataValue::Labeling(l) => {
                let t = get(v, "training_type")?;
                let ok = matches!(
                    (l, t),
                    (Labeling::Labeled, "Supervised")
                        | (Labeling::ToBeLabeled, "Supervised")
                        | (Labeling::Unlabeled, "Unsupervised")
                );
                terms.push((must * wa, if ok { 1.0 } else { 0.0 }));
            }
            DataValue::Volume(l) => {
                let sat = fuzzy("LMH", get(v, "volume_for_convergence")?, "LMH", l.label());
                terms.push((must * wb, sat));
            }
            DataValue::MissingValues(l) => {
                let sat = fuzzy(
                    "NLMH",
                    l.label(),
                    "NLMH",
                    get(v, "tolerance_missing_values")?,
                );
                terms.push((must * wbc, sat));
            }
            DataValue::DataType(wanted) => {
                let hit = wanted
                    .iter()
                    .filter(|t| types.iter().any(|s| s == t.label()))
                    .count();
                terms.push((must * wd, hit as f64 / wanted.len() as f64));
            }
            DataValue::Seasonality(true) => {
                terms.push((must * wd, normalized("evolutivity", get(v, "evolutivity")?)));
            }
            DataValue::Seasonality(false) => {}
            DataValue::Representativity(r) => {
                let demand = match r.label() {
                    "High" => "None",
                    "Medium" => "Medium",
                    _ => "High",
                };
                let sat = fuzzy("NLMH", demand, "NLMH", get(v, "tolerance_data_imbalance")?);
                terms.push((must * wb, sat));
            }
            DataValue::Homogeneity(h) => {
                let failed = [h.classes_comparable == Some(false), !h.scales_similar]
                    .iter()
                    .filter(|x| **x)
                    .count();
                let demand = ["None", "Medium", "High"][failed];
                let sat = fuzzy("NLMH", demand, "LMH", get(v, "tolerance_noise")?);
                terms.push((must * wc, sat));
            }
            DataValue::Distribution(dist) => {
                let tol = normalized(
                    "tolerance_biased_distribution",
                    get(v, "tolerance_biased_distribution")?,
                );
                let sat = match dist {
                    crate::problem::Distribution::Normal => 1.0,
                    crate::problem::Distribution::Unknown => tol,
                };
                terms.push((must * wc, sat));
            }
        }
    }

    let den: f64 = terms.iter().map(|(w, _)| w).sum();
    if den <= 0.0 {
        return Err("unscorable".into());
    }
    Ok(terms.iter().map(|(w, s)| w * s).sum::<f64>() / den)
}

/// Best Solves score over every single-valued reading of the family.
pub fn oracle_solves(
    af: &AlgorithmFamilyProfile,
    pb: &MLProblem,
    catalog: &Catalog,
    cfg: &EngineConfig,
) -> Result<f64, String> {
    if catalog.family(&af.id).is_none() {
        return Err(format!("family {} not in catalog", af.id));
    }
    let mut best: Option<f64> = None;
    for (choice, types) in choices(af) {
        let s = solves_once(&choice, &types, pb, cfg)?;
        best = Some(best.map_or(s, |b| b.max(s)));
    }
    best.ok_or_else(|| "family has no readings".into())
}
