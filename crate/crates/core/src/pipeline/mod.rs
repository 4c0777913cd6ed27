//! Processing chains around a chosen family, with preprocessing steps
//! injected where the family falls short on a remediable criterion.

mod export;
mod rules;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::AlgorithmFamilyProfile;
use crate::problem::{DomainValue, MLProblem, RequirementType};

pub use export::{export_chain, import_chain, ChainFormat, ExportError, CHAIN_SCHEMA_VERSION};
pub use rules::{shipped_rules, CompensationRule, DataConditions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    DataRetrieval,
    Cleaning,
    Imputation,
    Encoding,
    Denoising,
    DimensionalityReduction,
    Normalization,
    ModelTraining,
    Evaluation,
    Interpretation,
}

impl StepKind {
    /// Order of injected steps ahead of model training.
    pub const INJECTION_ORDER: [StepKind; 5] = [
        StepKind::Imputation,
        StepKind::Encoding,
        StepKind::Denoising,
        StepKind::Normalization,
        StepKind::DimensionalityReduction,
    ];

    pub fn label(self) -> &'static str {
        match self {
            StepKind::DataRetrieval => "data-retrieval",
            StepKind::Cleaning => "cleaning",
            StepKind::Imputation => "imputation",
            StepKind::Encoding => "encoding",
            StepKind::Denoising => "denoising",
            StepKind::DimensionalityReduction => "dimensionality-reduction",
            StepKind::Normalization => "normalization",
            StepKind::ModelTraining => "model-training",
            StepKind::Evaluation => "evaluation",
            StepKind::Interpretation => "interpretation",
        }
    }

    pub fn is_injectable(self) -> bool {
        Self::INJECTION_ORDER.contains(&self)
    }

    fn injection_rank(self) -> usize {
        Self::INJECTION_ORDER
            .iter()
            .position(|k| *k == self)
            .unwrap_or(usize::MAX)
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PipelineStep {
    pub kind: StepKind,
    pub rationale: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_family_id: Option<String>,
    #[serde(default)]
    pub candidate_tags: Vec<String>,
}

impl PipelineStep {
    fn new(kind: StepKind, rationale: &str, tags: &[&str]) -> Self {
        PipelineStep {
            kind,
            rationale: rationale.to_string(),
            bound_family_id: None,
            candidate_tags: tags.iter().map(|t| t.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProcessingChain {
    pub problem_id: String,
    pub family_id: String,
    pub steps: Vec<PipelineStep>,
    /// When to stop iterating on the model. Recorded, not executed.
    pub exit_criterion: String,
}

impl ProcessingChain {
    pub fn kinds(&self) -> Vec<StepKind> {
        self.steps.iter().map(|s| s.kind).collect()
    }

    fn training_index(&self) -> usize {
        self.steps
            .iter()
            .position(|s| s.kind == StepKind::ModelTraining)
            .expect("chain has a model-training step")
    }

    /// Exactly one training step, bound to the chain's family, with injected
    /// steps ahead of it in injection order.
    pub fn check(&self) -> Result<(), String> {
        let training: Vec<_> = self
            .steps
            .iter()
            .filter(|s| s.kind == StepKind::ModelTraining)
            .collect();
        if training.len() != 1 {
            return Err(format!("{} model-training steps", training.len()));
        }
        if training[0].bound_family_id.as_deref() != Some(self.family_id.as_str()) {
            return Err("model-training step not bound to the chain's family".into());
        }
        if self
            .steps
            .iter()
            .any(|s| s.kind != StepKind::ModelTraining && s.bound_family_id.is_some())
        {
            return Err("only model training may bind a family".into());
        }
        let t = self.training_index();
        let injected: Vec<_> = self
            .steps
            .iter()
            .filter(|s| s.kind.is_injectable())
            .collect();
        if self.steps[t..].iter().any(|s| s.kind.is_injectable()) {
            return Err("injected step after model training".into());
        }
        if injected
            .windows(2)
            .any(|w| w[0].kind.injection_rank() >= w[1].kind.injection_rank())
        {
            return Err("injected steps out of order".into());
        }
        Ok(())
    }
}

fn exit_criterion(pb: &MLProblem) -> String {
    match pb.domain(RequirementType::Accuracy).map(|d| &d.value) {
        Some(DomainValue::Accuracy(a)) => {
            format!("stop when evaluated accuracy reaches {:.0}%", a * 100.0)
        }
        _ => "stop when the domain expert accepts the evaluation results".to_string(),
    }
}

/// Generic five-step chain: retrieval, cleaning, training, evaluation and
/// interpretation.
pub fn base_template(pb: &MLProblem, family_id: &str) -> ProcessingChain {
    let mut training = PipelineStep::new(
        StepKind::ModelTraining,
        "fit a model from the selected family",
        &[],
    );
    training.bound_family_id = Some(family_id.to_string());
    ProcessingChain {
        problem_id: pb.id.clone(),
        family_id: family_id.to_string(),
        steps: vec![
            PipelineStep::new(
                StepKind::DataRetrieval,
                "load the training data",
                &["flat-file"],
            ),
            PipelineStep::new(
                StepKind::Cleaning,
                "filter malformed records and irrelevant attributes",
                &["filtering"],
            ),
            training,
            PipelineStep::new(
                StepKind::Evaluation,
                "measure the model against held-out data",
                &["cross-validation", "holdout"],
            ),
            PipelineStep::new(
                StepKind::Interpretation,
                "present results to the domain expert",
                &[],
            ),
        ],
        exit_criterion: exit_criterion(pb),
    }
}

/// Injects one step per firing rule ahead of model training. Steps already
/// present are not added again.
pub fn apply_compensations(
    chain: ProcessingChain,
    family: &AlgorithmFamilyProfile,
    data: &DataConditions,
) -> ProcessingChain {
    apply_rules(chain, family, data, &shipped_rules())
}

pub fn apply_rules(
    mut chain: ProcessingChain,
    family: &AlgorithmFamilyProfile,
    data: &DataConditions,
    rules: &[CompensationRule],
) -> ProcessingChain {
    for rule in rules {
        if chain.steps.iter().any(|s| s.kind == rule.step) {
            continue;
        }
        if let Some(rationale) = rule.fires(family, data) {
            let at = chain.training_index();
            chain
                .steps
                .insert(at, PipelineStep::new(rule.step, &rationale, rule.tags));
        }
    }
    let t = chain.training_index();
    let (head, _) = chain.steps.split_at_mut(t);
    // Stable: base steps keep their order, injected ones follow them.
    head.sort_by_key(|s| {
        if s.kind.is_injectable() {
            (1, s.kind.injection_rank())
        } else {
            (0, 0)
        }
    });
    chain
}
