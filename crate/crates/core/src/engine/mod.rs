//! Scores algorithm families against a problem and ranks them.
//!
//! Every requirement becomes one [`SatisfactionEntry`] whose weight is the
//! expert's care times the grade weight of the criteria it maps to. The
//! family's score is the weighted mean of the entries.

mod config;
mod fuzzy;
mod satisfy;
mod score;

use thiserror::Error;

use crate::catalog::{Criterion, Scale};

pub use config::{EngineConfig, Thresholds, TieBreak};
pub use fuzzy::{canonical_by_rank, complement, fuzzy_leq, fuzzy_leq_thirds, normalized};
pub use satisfy::{
    imbalance_demand, inhomogeneity, satisfies_accuracy, satisfies_adaptability, satisfies_cost,
    satisfies_cost_cpu, satisfies_cost_memory, satisfies_datatype, satisfies_decision_speed,
    satisfies_distribution, satisfies_flag, satisfies_homogeneity, satisfies_labeling,
    satisfies_missing, satisfies_representativity, satisfies_seasonality, satisfies_volume,
};
pub use score::{
    aggregate, rank_families, scored_requirements, solves, FamilyFailure, Ranking,
    SatisfactionBreakdown, SatisfactionEntry, ScoredRequirement,
};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EngineError {
    #[error("family `{family}` has no value for criterion `{criterion}`")]
    MissingValue {
        family: String,
        criterion: Criterion,
    },
    #[error("problem is unscorable: {0}")]
    Unscorable(String),
    #[error("cannot compare values on {left:?} and {right:?} scales")]
    IncompatibleScales { left: Scale, right: Scale },
    #[error("complement is only defined on the Low..Very High scale, got {0:?}")]
    NotCanonical(Scale),
    #[error("invalid engine configuration: {0}")]
    InvalidConfig(String),
}
