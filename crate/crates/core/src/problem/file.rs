//! Project file format.
//!
//! Version history: 1 had no `datasetRef`; 2 added it as an optional field.

use serde::{Deserialize, Serialize};

use super::{DataPropertyValue, DomainRequirementValue, MLProblem, ProblemError};

pub const PROJECT_SCHEMA_VERSION: u32 = 2;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ProjectDocument {
    pub schema_version: u32,
    pub id: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub domain_requirements: Vec<DomainRequirementValue>,
    #[serde(default)]
    pub data_properties: Vec<DataPropertyValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset_ref: Option<String>,
}

impl ProjectDocument {
    pub fn from_problem(p: &MLProblem) -> Self {
        ProjectDocument {
            schema_version: PROJECT_SCHEMA_VERSION,
            id: p.id.clone(),
            description: p.description.clone(),
            domain_requirements: p.domain_requirements.clone(),
            data_properties: p.data_properties.clone(),
            dataset_ref: p.dataset_ref.clone(),
        }
    }

    pub fn into_problem(self) -> Result<MLProblem, ProblemError> {
        if !(1..=PROJECT_SCHEMA_VERSION).contains(&self.schema_version) {
            return Err(ProblemError::SchemaVersion(self.schema_version));
        }
        let p = MLProblem {
            id: self.id,
            description: self.description,
            domain_requirements: self.domain_requirements,
            data_properties: self.data_properties,
            dataset_ref: self.dataset_ref,
        };
        p.validate()?;
        Ok(p)
    }
}

pub fn serialize_project(p: &MLProblem) -> String {
    let mut s = serde_json::to_string_pretty(&ProjectDocument::from_problem(p))
        .expect("project document is always serializable");
    s.push('\n');
    s
}

pub fn deserialize_project(source: &[u8]) -> Result<MLProblem, ProblemError> {
    let doc: ProjectDocument = serde_json::from_slice(source).map_err(|e| ProblemError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.into_problem()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::tests::every_requirement;
    use crate::problem::{new_project, set_requirement};
    use proptest::prelude::*;

    const V1_FIXTURE: &str = include_str!("../../tests/fixtures/project_v1.json");

    #[test]
    fn older_schema_accepted() {
        let p = deserialize_project(V1_FIXTURE.as_bytes()).unwrap();
        assert_eq!(p.dataset_ref, None);
        assert_eq!(p.domain_requirements.len(), 2);
    }

    #[test]
    fn unknown_requirement_type_named() {
        let text = r#"{"schemaVersion":2,"id":"p","domainRequirements":[
            {"type":"telepathy","value":true,"care":"Must"}]}"#;
        let err = deserialize_project(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("telepathy"), "{err}");
    }

    #[test]
    fn invariant_failure_has_location() {
        let text = r#"{"schemaVersion":2,"id":"p","domainRequirements":[
            {"type":"explainability","value":true,"care":"Must"},
            {"type":"accuracy","value":1.5,"care":"Must"}]}"#;
        match deserialize_project(text.as_bytes()) {
            Err(ProblemError::OutOfRange { location, .. }) => {
                assert_eq!(location, "domainRequirements[1]")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_type_rejected() {
        let text = r#"{"schemaVersion":2,"id":"p","dataProperties":[
            {"type":"seasonality","value":true,"provenance":"expert"},
            {"type":"seasonality","value":false,"provenance":"expert"}]}"#;
        assert!(matches!(
            deserialize_project(text.as_bytes()),
            Err(ProblemError::Duplicate { .. })
        ));
    }

    #[test]
    fn future_schema_rejected() {
        let text = r#"{"schemaVersion":9,"id":"p"}"#;
        assert_eq!(
            deserialize_project(text.as_bytes()),
            Err(ProblemError::SchemaVersion(9))
        );
    }

    proptest! {
        #[test]
        fn round_trip(mask in prop::collection::vec(any::<bool>(), 15), desc in ".{0,40}") {
            let mut p = new_project(&desc);
            for (r, keep) in every_requirement().into_iter().zip(mask) {
                if keep {
                    p = set_requirement(p, r).unwrap();
                }
            }
            let back = deserialize_project(serialize_project(&p).as_bytes()).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
