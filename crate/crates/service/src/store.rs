//! Store directory: one JSON file per project under `projects/` and one
//! `catalog.json`. Every write goes to a temporary file in the same
//! directory and is renamed over the target.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use algofit_core::catalog::CatalogDocument;
use algofit_core::problem::ProjectDocument;
use algofit_core::{Catalog, MLProblem, ProfileReport};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const STORE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Corrupt { path: PathBuf, message: String },
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// A project with its write counter and the last profile of its data.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredProject {
    pub revision: u64,
    pub problem: MLProblem,
    pub profile: Option<ProfileReport>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ProjectRecord {
    pub schema_version: u32,
    pub revision: u64,
    pub project: ProjectDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileReport>,
}

impl StoredProject {
    pub fn record(&self) -> ProjectRecord {
        ProjectRecord {
            schema_version: STORE_SCHEMA_VERSION,
            revision: self.revision,
            project: ProjectDocument::from_problem(&self.problem),
            profile: self.profile.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoredCatalog {
    pub version: u64,
    pub catalog: Catalog,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CatalogRecord {
    pub version: u64,
    pub catalog: CatalogDocument,
}

impl StoredCatalog {
    pub fn record(&self) -> CatalogRecord {
        CatalogRecord {
            version: self.version,
            catalog: CatalogDocument::from_catalog(&self.catalog),
        }
    }
}

/// Ids become file names, so only a safe alphabet is accepted.
pub fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 128
        && id
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_')
}

#[derive(Debug, Clone)]
pub struct Store {
    root: PathBuf,
}

impl Store {
    /// Opens (creating if needed) a store directory. A missing catalog file
    /// is created from `initial` at version 1.
    pub fn open(root: impl Into<PathBuf>, initial: &Catalog) -> Result<Store, StoreError> {
        let store = Store { root: root.into() };
        let projects = store.projects_dir();
        fs::create_dir_all(&projects).map_err(io(&projects))?;
        if !store.catalog_path().exists() {
            store.save_catalog(&StoredCatalog {
                version: 1,
                catalog: initial.clone(),
            })?;
        }
        Ok(store)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn projects_dir(&self) -> PathBuf {
        self.root.join("projects")
    }

    fn catalog_path(&self) -> PathBuf {
        self.root.join("catalog.json")
    }

    fn project_path(&self, id: &str) -> PathBuf {
        self.projects_dir().join(format!("{id}.json"))
    }

    fn write_atomic(&self, path: &Path, bytes: &[u8]) -> Result<(), StoreError> {
        let dir = path.parent().unwrap_or(&self.root);
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io(dir))?;
        tmp.write_all(bytes).map_err(io(path))?;
        tmp.as_file().sync_all().map_err(io(path))?;
        tmp.persist(path).map_err(|e| StoreError::Io {
            path: path.to_path_buf(),
            source: e.error,
        })?;
        Ok(())
    }

    pub fn save_project(&self, p: &StoredProject) -> Result<(), StoreError> {
        let mut bytes = serde_json::to_vec_pretty(&p.record()).expect("record serializes");
        bytes.push(b'\n');
        self.write_atomic(&self.project_path(&p.problem.id), &bytes)
    }

    pub fn save_catalog(&self, c: &StoredCatalog) -> Result<(), StoreError> {
        let mut bytes = serde_json::to_vec_pretty(&c.record()).expect("record serializes");
        bytes.push(b'\n');
        self.write_atomic(&self.catalog_path(), &bytes)
    }

    pub fn load_catalog(&self) -> Result<StoredCatalog, StoreError> {
        let path = self.catalog_path();
        let bytes = fs::read(&path).map_err(io(&path))?;
        let corrupt = |message: String| StoreError::Corrupt {
            path: path.clone(),
            message,
        };
        let record: CatalogRecord =
            serde_json::from_slice(&bytes).map_err(|e| corrupt(e.to_string()))?;
        let catalog = record
            .catalog
            .into_catalog()
            .map_err(|e| corrupt(e.to_string()))?;
        Ok(StoredCatalog {
            version: record.version,
            catalog,
        })
    }

    pub fn load_projects(&self) -> Result<BTreeMap<String, StoredProject>, StoreError> {
        let dir = self.projects_dir();
        let mut out = BTreeMap::new();
        for entry in fs::read_dir(&dir).map_err(io(&dir))? {
            let path = entry.map_err(io(&dir))?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let bytes = fs::read(&path).map_err(io(&path))?;
            let corrupt = |message: String| StoreError::Corrupt {
                path: path.clone(),
                message,
            };
            let record: ProjectRecord =
                serde_json::from_slice(&bytes).map_err(|e| corrupt(e.to_string()))?;
            if record.schema_version != STORE_SCHEMA_VERSION {
                return Err(corrupt(format!(
                    "unsupported store schema version {}",
                    record.schema_version
                )));
            }
            let problem = record
                .project
                .into_problem()
                .map_err(|e| corrupt(e.to_string()))?;
            out.insert(
                problem.id.clone(),
                StoredProject {
                    revision: record.revision,
                    problem,
                    profile: record.profile,
                },
            );
        }
        Ok(out)
    }
}
