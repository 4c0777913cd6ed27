use quick_xml::events::{BytesDecl, BytesText, Event};
use quick_xml::Writer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ProcessingChain;

pub const CHAIN_SCHEMA_VERSION: u32 = 1;

const BPMN_NS: &str = "http://www.omg.org/spec/BPMN/20100524/MODEL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainFormat {
    Canonical,
    WorkflowXml,
}

impl std::str::FromStr for ChainFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "canonical" => Ok(ChainFormat::Canonical),
            "workflow-xml" => Ok(ChainFormat::WorkflowXml),
            _ => Err(format!(
                "unknown chain format `{s}` (canonical, workflow-xml)"
            )),
        }
    }
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported chain schema version {0}")]
    SchemaVersion(u32),
    #[error("invalid chain: {0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ChainDocument {
    schema_version: u32,
    #[serde(flatten)]
    chain: ProcessingChain,
}

pub fn export_chain(chain: &ProcessingChain, format: ChainFormat) -> Vec<u8> {
    match format {
        ChainFormat::Canonical => {
            let doc = ChainDocument {
                schema_version: CHAIN_SCHEMA_VERSION,
                chain: chain.clone(),
            };
            let mut out = serde_json::to_vec_pretty(&doc).expect("chain serializes");
            out.push(b'\n');
            out
        }
        ChainFormat::WorkflowXml => bpmn(chain).expect("writing to memory cannot fail"),
    }
}

pub fn import_chain(source: &[u8]) -> Result<ProcessingChain, ExportError> {
    let doc: ChainDocument = serde_json::from_slice(source).map_err(|e| ExportError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.schema_version != CHAIN_SCHEMA_VERSION {
        return Err(ExportError::SchemaVersion(doc.schema_version));
    }
    doc.chain.check().map_err(ExportError::Invalid)?;
    Ok(doc.chain)
}

/// BPMN 2.0 process: start event, one service task per step, end event,
/// and sequence flows joining them in order.
fn bpmn(chain: &ProcessingChain) -> std::io::Result<Vec<u8>> {
    let mut w = Writer::new_with_indent(Vec::new(), b' ', 2);
    w.write_event(Event::Decl(BytesDecl::new("1.0", Some("UTF-8"), None)))?;
    let task_ids: Vec<String> = (1..=chain.steps.len())
        .map(|i| format!("task_{i}"))
        .collect();
    let mut nodes = vec!["start".to_string()];
    nodes.extend(task_ids.iter().cloned());
    nodes.push("end".to_string());

    w.create_element("bpmn:definitions")
        .with_attributes([
            ("xmlns:bpmn", BPMN_NS),
            ("id", "definitions"),
            ("targetNamespace", "urn:algofit:chain"),
        ])
        .write_inner_content(|w| {
            let name = format!("{} for {}", chain.family_id, chain.problem_id);
            w.create_element("bpmn:process")
                .with_attributes([
                    ("id", "process"),
                    ("name", name.as_str()),
                    ("isExecutable", "false"),
                ])
                .write_inner_content(|w| {
                    w.create_element("bpmn:documentation")
                        .write_text_content(BytesText::new(&format!(
                            "exit criterion: {}",
                            chain.exit_criterion
                        )))?;
                    w.create_element("bpmn:startEvent")
                        .with_attribute(("id", "start"))
                        .write_empty()?;
                    for (step, id) in chain.steps.iter().zip(&task_ids) {
                        let mut el = w
                            .create_element("bpmn:serviceTask")
                            .with_attributes([("id", id.as_str()), ("name", step.kind.label())]);
                        if let Some(f) = &step.bound_family_id {
                            el = el.with_attribute(("implementation", f.as_str()));
                        }
                        el.write_inner_content(|w| {
                            w.create_element("bpmn:documentation")
                                .write_text_content(BytesText::new(&step.rationale))?;
                            Ok(())
                        })?;
                    }
                    w.create_element("bpmn:endEvent")
                        .with_attribute(("id", "end"))
                        .write_empty()?;
                    for (i, pair) in nodes.windows(2).enumerate() {
                        let id = format!("flow_{}", i + 1);
                        w.create_element("bpmn:sequenceFlow")
                            .with_attributes([
                                ("id", id.as_str()),
                                ("sourceRef", pair[0].as_str()),
                                ("targetRef", pair[1].as_str()),
                            ])
                            .write_empty()?;
                    }
                    Ok(())
                })?;
            Ok(())
        })?;
    let mut out = w.into_inner();
    out.push(b'\n');
    Ok(out)
}
