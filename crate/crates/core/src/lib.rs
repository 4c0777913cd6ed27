//! Algorithm-family selection: a catalog of ML algorithm families rated on
//! selection criteria, a model of ML projects, a scoring engine that ranks
//! families against a project, a data profiler, a processing-chain composer
//! and a validation harness.

pub mod catalog;
pub mod engine;
pub mod pipeline;
pub mod problem;
pub mod profiler;
pub mod validation;

#[cfg(feature = "testkit")]
pub mod testkit;

pub use catalog::{
    load_catalog, seed_catalog, serialize_catalog, AlgorithmFamilyProfile, AttributeType, Catalog,
    CatalogError, Criterion, CriterionValue, Level, LinguisticValue, Scale, WeightGrade,
};
pub use engine::{
    rank_families, solves, EngineConfig, EngineError, Ranking, SatisfactionBreakdown,
    SatisfactionEntry,
};
pub use pipeline::{
    apply_compensations, base_template, export_chain, ChainFormat, DataConditions, ProcessingChain,
    StepKind,
};
pub use problem::{
    deserialize_project, merge_profile, new_project, serialize_project, set_requirement, CareLevel,
    MLProblem, ProblemError, RequirementType,
};
pub use profiler::{ingest, profile, IngestOptions, ProfileError, ProfileReport, Table};
