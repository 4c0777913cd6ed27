use super::{ProblemError, RequirementType};

const SYNONYMS: &[(&str, RequirementType)] = &[
    ("auditability", RequirementType::Explainability),
    ("transparency", RequirementType::Explainability),
    ("accountability", RequirementType::Explainability),
    ("traceability", RequirementType::Explainability),
    ("regulatory compliance", RequirementType::Explainability),
    ("explainability", RequirementType::Explainability),
    ("interpretability", RequirementType::Interpretability),
    ("understandability", RequirementType::Interpretability),
    ("intelligibility", RequirementType::Interpretability),
    ("speed", RequirementType::DecisionSpeed),
    ("latency", RequirementType::DecisionSpeed),
    ("response time", RequirementType::DecisionSpeed),
    ("responsiveness", RequirementType::DecisionSpeed),
    ("real time", RequirementType::DecisionSpeed),
    ("accuracy", RequirementType::Accuracy),
    ("precision", RequirementType::Accuracy),
    ("reliability", RequirementType::Accuracy),
    ("adaptability", RequirementType::Adaptability),
    ("evolvability", RequirementType::Adaptability),
    ("concept drift", RequirementType::Adaptability),
    ("incremental learning", RequirementType::Adaptability),
    ("computation cost", RequirementType::CostCpu),
    ("compute budget", RequirementType::CostCpu),
    ("hardware cost", RequirementType::CostCpu),
    ("training cost", RequirementType::CostCpu),
    ("data cost", RequirementType::CostData),
    ("data acquisition cost", RequirementType::CostData),
    ("storage cost", RequirementType::CostData),
];

fn normalize(term: &str) -> String {
    term.to_lowercase()
        .replace(['-', '_'], " ")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

/// Translates a domain-level need into the computational requirement it
/// stands for. Unknown terms are reported, never guessed.
pub fn derive_computational_requirement(term: &str) -> Result<RequirementType, ProblemError> {
    let key = normalize(term);
    SYNONYMS
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, r)| *r)
        .ok_or_else(|| ProblemError::NoMapping(term.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_terms() {
        let cases = [
            ("auditability", RequirementType::Explainability),
            ("transparency", RequirementType::Explainability),
            ("speed", RequirementType::DecisionSpeed),
            ("  Response-Time ", RequirementType::DecisionSpeed),
        ];
        for (term, want) in cases {
            assert_eq!(
                derive_computational_requirement(term).unwrap(),
                want,
                "{term}"
            );
        }
    }

    #[test]
    fn unknown_term_is_explicit() {
        assert_eq!(
            derive_computational_requirement("vibes"),
            Err(ProblemError::NoMapping("vibes".into()))
        );
    }

    #[test]
    fn keys_are_normalized() {
        for (k, _) in SYNONYMS {
            assert_eq!(normalize(k), *k);
        }
    }
}
