//! HTTP service over projects, the catalog, profiling, ranking, what-if and
//! processing chains, persisted in a store directory.

mod api;
mod error;
mod store;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use algofit_core::{seed_catalog, Catalog, EngineConfig};
use axum::extract::DefaultBodyLimit;
use axum::http::HeaderValue;
use axum::Router;
use tower_http::cors::{AllowOrigin, CorsLayer};

pub use error::ApiError;
pub use store::{
    valid_id, CatalogRecord, ProjectRecord, Store, StoreError, StoredCatalog, StoredProject,
    STORE_SCHEMA_VERSION,
};

/// Default request body cap, in bytes.
pub const DEFAULT_MAX_UPLOAD: usize = 16 * 1024 * 1024;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub store_dir: PathBuf,
    pub max_upload_bytes: usize,
    /// Origins allowed cross-origin access. Empty allows any origin.
    pub cors_origins: Vec<String>,
    pub engine: EngineConfig,
    /// Catalog written to a fresh store.
    pub initial_catalog: Catalog,
}

impl ServiceConfig {
    pub fn new(store_dir: impl Into<PathBuf>) -> Self {
        ServiceConfig {
            store_dir: store_dir.into(),
            max_upload_bytes: DEFAULT_MAX_UPLOAD,
            cors_origins: Vec::new(),
            engine: EngineConfig::default(),
            initial_catalog: seed_catalog(),
        }
    }
}

pub(crate) struct Inner {
    pub store: Store,
    pub engine: EngineConfig,
    pub projects: RwLock<BTreeMap<String, StoredProject>>,
    pub catalog: RwLock<StoredCatalog>,
}

/// Shared handle to the loaded store.
#[derive(Clone)]
pub struct AppState(pub(crate) Arc<Inner>);

impl AppState {
    pub fn open(config: &ServiceConfig) -> Result<AppState, StoreError> {
        let store = Store::open(&config.store_dir, &config.initial_catalog)?;
        let catalog = store.load_catalog()?;
        let projects = store.load_projects()?;
        Ok(AppState(Arc::new(Inner {
            store,
            engine: config.engine.clone(),
            projects: RwLock::new(projects),
            catalog: RwLock::new(catalog),
        })))
    }
}

fn cors(origins: &[String]) -> CorsLayer {
    if origins.is_empty() {
        return CorsLayer::permissive();
    }
    let list: Vec<HeaderValue> = origins
        .iter()
        .filter_map(|o| HeaderValue::from_str(o).ok())
        .collect();
    CorsLayer::permissive().allow_origin(AllowOrigin::list(list))
}

/// Builds the router over a store directory, loading what it holds.
pub fn app(config: &ServiceConfig) -> Result<Router, StoreError> {
    let state = AppState::open(config)?;
    Ok(api::routes(state)
        .layer(DefaultBodyLimit::max(config.max_upload_bytes))
        .layer(cors(&config.cors_origins)))
}

/// Serves until Ctrl-C.
pub async fn serve(listener: tokio::net::TcpListener, router: Router) -> std::io::Result<()> {
    axum::serve(listener, router)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
