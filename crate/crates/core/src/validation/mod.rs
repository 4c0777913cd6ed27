//! Agreement between engine rankings and expert rankings, and an
//! independent recomputation of the score used to cross-check the engine.

mod correlation;
mod oracle;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::Catalog;
use crate::engine::{rank_families, EngineConfig, EngineError};
use crate::problem::MLProblem;

pub use correlation::{kendall_tau_b, spearman, spearman_scores, tau_b_scores};
pub use oracle::oracle_solves;

pub const RANKING_SCHEMA_VERSION: u32 = 1;

/// Longest list an expert may rank.
pub const MAX_EXPERT_LIST: usize = 5;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ValidationError {
    #[error("rankings cover different items")]
    DifferentItems,
    #[error("an item appears twice in a ranking")]
    DuplicateItem,
    #[error("correlation undefined: one ranking ties every item")]
    Degenerate,
    #[error("{location}: {message}")]
    InvalidRanking { location: String, message: String },
    #[error("no family of the expert ranking could be scored")]
    EmptyIntersection,
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExpertRanking {
    pub problem_id: String,
    pub rater_id: String,
    pub ranked_family_ids: Vec<String>,
}

impl ExpertRanking {
    pub fn check(&self, catalog: &Catalog) -> Result<(), ValidationError> {
        let invalid = |message: String| ValidationError::InvalidRanking {
            location: format!("{}/{}", self.problem_id, self.rater_id),
            message,
        };
        if self.ranked_family_ids.is_empty() || self.ranked_family_ids.len() > MAX_EXPERT_LIST {
            return Err(invalid(format!(
                "ranks {} families, expected 1 to {MAX_EXPERT_LIST}",
                self.ranked_family_ids.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for id in &self.ranked_family_ids {
            if !seen.insert(id) {
                return Err(invalid(format!("family `{id}` listed twice")));
            }
            if catalog.family(id).is_none() {
                return Err(invalid(format!("family `{id}` not in catalog")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RankingFile {
    pub schema_version: u32,
    pub rankings: Vec<ExpertRanking>,
}

pub fn load_rankings(source: &[u8]) -> Result<Vec<ExpertRanking>, ValidationError> {
    let f: RankingFile = serde_json::from_slice(source).map_err(|e| ValidationError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if f.schema_version != RANKING_SCHEMA_VERSION {
        return Err(ValidationError::InvalidRanking {
            location: "schemaVersion".into(),
            message: format!("unsupported version {}", f.schema_version),
        });
    }
    Ok(f.rankings)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Comparison {
    pub problem_id: String,
    pub rater_id: String,
    /// Expert order restricted to families the engine scored.
    pub expert_order: Vec<String>,
    /// The same families in engine order.
    pub engine_order: Vec<String>,
    pub tau_b: f64,
    pub spearman: f64,
}

/// Correlates an expert's list with the engine's scores for the same
/// families. Engine ties stay ties.
pub fn compare_to_expert(
    pb: &MLProblem,
    expert: &ExpertRanking,
    catalog: &Catalog,
    cfg: &EngineConfig,
) -> Result<Comparison, ValidationError> {
    expert.check(catalog)?;
    let ranking = rank_families(pb, catalog, cfg)?;
    let scores: BTreeMap<&str, f64> = ranking
        .ranked
        .iter()
        .map(|b| (b.family_id.as_str(), b.solves))
        .collect();
    let expert_order: Vec<String> = expert
        .ranked_family_ids
        .iter()
        .filter(|id| scores.contains_key(id.as_str()))
        .cloned()
        .collect();
    if expert_order.is_empty() {
        return Err(ValidationError::EmptyIntersection);
    }
    let engine_order: Vec<String> = ranking
        .ranked
        .iter()
        .filter(|b| expert_order.contains(&b.family_id))
        .map(|b| b.family_id.clone())
        .collect();
    // Lower is better on both sides.
    let x: Vec<f64> = (1..=expert_order.len()).map(|i| i as f64).collect();
    let y: Vec<f64> = expert_order.iter().map(|id| -scores[id.as_str()]).collect();
    let (tau_b, spearman) = if expert_order.len() == 1 {
        (1.0, 1.0)
    } else {
        (
            tau_b_scores(&x, &y).ok_or(ValidationError::Degenerate)?,
            spearman_scores(&x, &y).ok_or(ValidationError::Degenerate)?,
        )
    };
    Ok(Comparison {
        problem_id: pb.id.clone(),
        rater_id: expert.rater_id.clone(),
        expert_order,
        engine_order,
        tau_b,
        spearman,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RaterPair {
    pub problem_id: String,
    pub left: String,
    pub right: String,
    pub common: usize,
    /// Absent when the two lists share fewer than two families.
    pub tau_b: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AgreementReport {
    pub comparisons: Vec<Comparison>,
    /// Mean tau-b against the engine, per problem.
    pub mean_tau_b: BTreeMap<String, f64>,
    pub inter_rater: Vec<RaterPair>,
}

fn restrict(order: &[String], keep: &BTreeSet<&String>) -> Vec<String> {
    order.iter().filter(|x| keep.contains(x)).cloned().collect()
}

pub fn agreement_report(
    problems: &[MLProblem],
    rankings: &[ExpertRanking],
    catalog: &Catalog,
    cfg: &EngineConfig,
) -> Result<AgreementReport, ValidationError> {
    let mut comparisons = Vec::new();
    for r in rankings {
        let pb = problems
            .iter()
            .find(|p| p.id == r.problem_id)
            .ok_or_else(|| ValidationError::UnknownProblem(r.problem_id.clone()))?;
        comparisons.push(compare_to_expert(pb, r, catalog, cfg)?);
    }
    comparisons.sort_by(|a, b| (&a.problem_id, &a.rater_id).cmp(&(&b.problem_id, &b.rater_id)));

    let mut by_problem: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for c in &comparisons {
        by_problem
            .entry(c.problem_id.clone())
            .or_default()
            .push(c.tau_b);
    }
    let mean_tau_b = by_problem
        .into_iter()
        .map(|(k, v)| (k, v.iter().sum::<f64>() / v.len() as f64))
        .collect();

    let mut inter_rater = Vec::new();
    for (i, a) in rankings.iter().enumerate() {
        for b in &rankings[i + 1..] {
            if a.problem_id != b.problem_id {
                continue;
            }
            let sa: BTreeSet<&String> = a.ranked_family_ids.iter().collect();
            let sb: BTreeSet<&String> = b.ranked_family_ids.iter().collect();
            let common: BTreeSet<&String> = sa.intersection(&sb).copied().collect();
            let tau_b = (common.len() >= 2)
                .then(|| {
                    kendall_tau_b(
                        &restrict(&a.ranked_family_ids, &common),
                        &restrict(&b.ranked_family_ids, &common),
                    )
                    .ok()
                })
                .flatten();
            let (left, right) = if a.rater_id <= b.rater_id {
                (a.rater_id.clone(), b.rater_id.clone())
            } else {
                (b.rater_id.clone(), a.rater_id.clone())
            };
            inter_rater.push(RaterPair {
                problem_id: a.problem_id.clone(),
                left,
                right,
                common: common.len(),
                tau_b,
            });
        }
    }
    inter_rater.sort_by(|a, b| {
        (&a.problem_id, &a.left, &a.right).cmp(&(&b.problem_id, &b.left, &b.right))
    });
    Ok(AgreementReport {
        comparisons,
        mean_tau_b,
        inter_rater,
    })
}
