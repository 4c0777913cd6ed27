//! What-if overrides addressed by dotted paths: `care.<requirement>` sets a
//! care level, `value.<requirement>` sets a requirement value.

use thiserror::Error;

use crate::catalog::{AttributeType, Level};

use super::{
    set_requirement, CareLevel, DataPropertyValue, DataValue, DecisionSpeed, Distribution,
    DomainRequirementValue, DomainValue, Homogeneity, Labeling, MLProblem, RequirementType,
    SpeedMetric,
};

#[derive(Debug, Error, PartialEq)]
pub enum OverrideError {
    #[error("unknown override key `{0}` (expected care.<requirement> or value.<requirement>)")]
    BadKey(String),
    #[error("override `{key}`: {message}")]
    BadValue { key: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Override {
    Care(RequirementType, CareLevel),
    Value(RequirementType, String),
}

fn bad(key: &str, message: impl Into<String>) -> OverrideError {
    OverrideError::BadValue {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Parses `key=value`.
pub fn parse_override(spec: &str) -> Result<Override, OverrideError> {
    let (key, value) = spec
        .split_once('=')
        .ok_or_else(|| OverrideError::BadKey(spec.to_string()))?;
    let (key, value) = (key.trim(), value.trim());
    let (head, name) = key
        .split_once('.')
        .ok_or_else(|| OverrideError::BadKey(key.to_string()))?;
    let req =
        RequirementType::from_id(name).ok_or_else(|| OverrideError::BadKey(key.to_string()))?;
    match head {
        "care" => {
            if req.is_data_property() {
                return Err(OverrideError::BadKey(key.to_string()));
            }
            let care = CareLevel::from_label(value).ok_or_else(|| {
                bad(
                    key,
                    format!("`{value}` is not one of Not, Could, Should, Must"),
                )
            })?;
            Ok(Override::Care(req, care))
        }
        "value" => Ok(Override::Value(req, value.to_string())),
        _ => Err(OverrideError::BadKey(key.to_string())),
    }
}

fn parse_bool(key: &str, s: &str) -> Result<bool, OverrideError> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        _ => Err(bad(key, format!("`{s}` is not a boolean"))),
    }
}

fn parse_level(key: &str, s: &str) -> Result<Level, OverrideError> {
    Level::from_label(s).ok_or_else(|| bad(key, format!("`{s}` is not a linguistic label")))
}

fn parse_domain(key: &str, req: RequirementType, s: &str) -> Result<DomainValue, OverrideError> {
    Ok(match req {
        RequirementType::Accuracy => {
            let v = match s.strip_suffix('%') {
                Some(pct) => pct.trim().parse::<f64>().map(|x| x / 100.0),
                None => s.parse::<f64>(),
            }
            .map_err(|_| bad(key, format!("`{s}` is not a number")))?;
            DomainValue::Accuracy(v)
        }
        RequirementType::Explainability => DomainValue::Explainability(parse_bool(key, s)?),
        RequirementType::Interpretability => DomainValue::Interpretability(parse_bool(key, s)?),
        RequirementType::Adaptability => DomainValue::Adaptability(parse_bool(key, s)?),
        RequirementType::CostCpu => DomainValue::CostCpu(parse_level(key, s)?),
        RequirementType::CostData => DomainValue::CostData(parse_level(key, s)?),
        RequirementType::DecisionSpeed => {
            let (metric, millis) = match s.split_once(':') {
                Some((m, ms)) => {
                    let metric = match m {
                        "max" => SpeedMetric::Max,
                        "avg" => SpeedMetric::Avg,
                        "p95" => SpeedMetric::P95,
                        _ => return Err(bad(key, format!("unknown metric `{m}`"))),
                    };
                    (metric, ms)
                }
                None => (SpeedMetric::Max, s),
            };
            let millis = millis
                .trim()
                .trim_end_matches("ms")
                .parse::<f64>()
                .map_err(|_| bad(key, format!("`{s}` is not a duration in ms")))?;
            DomainValue::DecisionSpeed(DecisionSpeed { metric, millis })
        }
        _ => unreachable!("data property handled by caller"),
    })
}

fn parse_data(key: &str, req: RequirementType, s: &str) -> Result<DataValue, OverrideError> {
    Ok(match req {
        RequirementType::Labeling => DataValue::Labeling(match s {
            "Labeled" => Labeling::Labeled,
            "Unlabeled" => Labeling::Unlabeled,
            "ToBeLabeled" | "To be labeled" => Labeling::ToBeLabeled,
            _ => return Err(bad(key, format!("`{s}` is not a labeling state"))),
        }),
        RequirementType::Volume => DataValue::Volume(parse_level(key, s)?),
        RequirementType::MissingValues => DataValue::MissingValues(parse_level(key, s)?),
        RequirementType::DataType => {
            let types = s
                .split(',')
                .map(|t| {
                    let t = t.trim();
                    AttributeType::ALL
                        .into_iter()
                        .find(|a| a.label() == t || (t == "Text" && *a == AttributeType::Textual))
                        .ok_or_else(|| bad(key, format!("`{t}` is not an attribute type")))
                })
                .collect::<Result<_, _>>()?;
            DataValue::DataType(types)
        }
        RequirementType::Seasonality => DataValue::Seasonality(parse_bool(key, s)?),
        RequirementType::Representativity => DataValue::Representativity(parse_level(key, s)?),
        RequirementType::Homogeneity => {
            let mut h = Homogeneity {
                classes_comparable: None,
                scales_similar: true,
            };
            for part in s.split(',') {
                match part.trim().split_once('=') {
                    Some(("classes", v)) => h.classes_comparable = Some(parse_bool(key, v)?),
                    Some(("scales", v)) => h.scales_similar = parse_bool(key, v)?,
                    _ => {
                        return Err(bad(key, "expected classes=<bool>,scales=<bool>"));
                    }
                }
            }
            DataValue::Homogeneity(h)
        }
        RequirementType::Distribution => DataValue::Distribution(match s {
            "Normal" => Distribution::Normal,
            "Unknown" => Distribution::Unknown,
            _ => return Err(bad(key, format!("`{s}` is not Normal or Unknown"))),
        }),
        _ => unreachable!("domain requirement handled by caller"),
    })
}

fn flag_default(req: RequirementType) -> Option<DomainValue> {
    match req {
        RequirementType::Explainability => Some(DomainValue::Explainability(true)),
        RequirementType::Interpretability => Some(DomainValue::Interpretability(true)),
        RequirementType::Adaptability => Some(DomainValue::Adaptability(true)),
        _ => None,
    }
}

pub fn apply_override(p: MLProblem, o: &Override) -> Result<MLProblem, OverrideError> {
    let key = match o {
        Override::Care(r, _) => format!("care.{r}"),
        Override::Value(r, _) => format!("value.{r}"),
    };
    let range = |e: super::ProblemError| bad(&key, e.to_string());
    match o {
        Override::Care(req, care) => {
            let value = match p.domain(*req) {
                Some(existing) => existing.value.clone(),
                None => flag_default(*req).ok_or_else(|| {
                    bad(
                        &key,
                        format!("`{req}` has no value to weigh; set value.{req} first"),
                    )
                })?,
            };
            set_requirement(p, DomainRequirementValue::new(value, *care)).map_err(range)
        }
        Override::Value(req, raw) if req.is_data_property() => {
            let value = parse_data(&key, *req, raw)?;
            set_requirement(p, DataPropertyValue::expert(value)).map_err(range)
        }
        Override::Value(req, raw) => {
            let value = parse_domain(&key, *req, raw)?;
            let care = p.domain(*req).map(|d| d.care).unwrap_or(CareLevel::Must);
            set_requirement(p, DomainRequirementValue::new(value, care)).map_err(range)
        }
    }
}

pub fn apply_overrides(p: MLProblem, overrides: &[Override]) -> Result<MLProblem, OverrideError> {
    overrides.iter().try_fold(p, apply_override)
}
