use algofit_core::catalog::{validate_catalog, FamilyRecord};
use algofit_core::pipeline::{apply_compensations, base_template, export_chain, ChainFormat};
use algofit_core::problem::{
    apply_overrides, parse_override, DataPropertyValue, DomainRequirementValue, OverrideError,
};
use algofit_core::{
    ingest, merge_profile, new_project, profile, rank_families, DataConditions, EngineError,
    IngestOptions, MLProblem, ProblemError, ProfileError, Ranking,
};
use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::{valid_id, ApiError, AppState, CatalogRecord, ProjectRecord, StoredProject};

type ApiResult<T> = Result<T, ApiError>;

pub fn routes(state: AppState) -> Router {
    Router::new()
        .route("/projects", post(create_project))
        .route("/projects/{id}", get(get_project))
        .route("/projects/{id}/requirements", put(put_requirements))
        .route("/projects/{id}/dataset", post(post_dataset))
        .route("/projects/{id}/ranking", get(get_ranking))
        .route("/projects/{id}/whatif", post(post_whatif))
        .route("/projects/{id}/pipeline", get(get_pipeline))
        .route("/catalog", get(get_catalog))
        .route("/catalog/families", get(get_families))
        .route("/catalog/families/{id}", get(get_family).put(put_family))
        .with_state(state)
}

fn parse_body<T: DeserializeOwned>(body: &[u8]) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed body: {e}")))
}

fn project(state: &AppState, id: &str) -> ApiResult<StoredProject> {
    let projects = state.0.projects.read().expect("project lock");
    projects
        .get(id)
        .cloned()
        .ok_or_else(|| ApiError::not_found(format!("no project `{id}`")))
}

fn problem_error(e: ProblemError) -> ApiError {
    match &e {
        ProblemError::OutOfRange { location, .. } | ProblemError::Duplicate { location, .. } => {
            ApiError::unprocessable(e.to_string()).at(location.clone())
        }
        _ => ApiError::unprocessable(e.to_string()),
    }
}

fn engine_error(e: EngineError) -> ApiError {
    match e {
        EngineError::InvalidConfig(m) => ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            format!("engine config: {m}"),
        ),
        other => ApiError::unprocessable(other.to_string()),
    }
}

fn rank(state: &AppState, pb: &MLProblem, top: Option<usize>) -> ApiResult<Ranking> {
    let catalog = state.0.catalog.read().expect("catalog lock");
    let r = rank_families(pb, &catalog.catalog, &state.0.engine).map_err(engine_error)?;
    Ok(match top {
        Some(n) => r.top(n),
        None => r,
    })
}

/// Runs `f` on the stored project under the write lock, then persists the
/// result with the next revision.
fn update_project(
    state: &AppState,
    id: &str,
    expected_revision: Option<u64>,
    f: impl FnOnce(StoredProject) -> ApiResult<StoredProject>,
) -> ApiResult<StoredProject> {
    let mut projects = state.0.projects.write().expect("project lock");
    let current = projects
        .get(id)
        .cloned()
        .ok_or_else(|| ApiError::not_found(format!("no project `{id}`")))?;
    if let Some(rev) = expected_revision {
        if rev != current.revision {
            return Err(ApiError::conflict(format!(
                "revision {rev} is stale; current revision is {}",
                current.revision
            ))
            .with_details(json!({ "currentRevision": current.revision })));
        }
    }
    let revision = current.revision + 1;
    let mut next = f(current)?;
    next.revision = revision;
    state.0.store.save_project(&next)?;
    projects.insert(id.to_string(), next.clone());
    Ok(next)
}

#[derive(Deserialize, Default)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct CreateProject {
    #[serde(default)]
    description: String,
}

async fn create_project(State(state): State<AppState>, body: Bytes) -> ApiResult<Response> {
    let req: CreateProject = if body.iter().all(u8::is_ascii_whitespace) {
        CreateProject::default()
    } else {
        parse_body(&body)?
    };
    let stored = StoredProject {
        revision: 1,
        problem: new_project(&req.description),
        profile: None,
    };
    state.0.store.save_project(&stored)?;
    let id = stored.problem.id.clone();
    state
        .0
        .projects
        .write()
        .expect("project lock")
        .insert(id.clone(), stored.clone());
    Ok((
        StatusCode::CREATED,
        [(header::LOCATION, format!("/projects/{id}"))],
        Json(stored.record()),
    )
        .into_response())
}

async fn get_project(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<ProjectRecord>> {
    Ok(Json(project(&state, &id)?.record()))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RequirementsUpdate {
    revision: u64,
    #[serde(default)]
    domain_requirements: Vec<DomainRequirementValue>,
    #[serde(default)]
    data_properties: Vec<DataPropertyValue>,
}

async fn put_requirements(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<ProjectRecord>> {
    let req: RequirementsUpdate = parse_body(&body)?;
    let next = update_project(&state, &id, Some(req.revision), |mut p| {
        p.problem.domain_requirements = req.domain_requirements;
        p.problem.data_properties = req.data_properties;
        p.problem.validate().map_err(problem_error)?;
        Ok(p)
    })?;
    Ok(Json(next.record()))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct DatasetParams {
    label: Option<String>,
    delimiter: Option<String>,
    /// Comma-separated cell values read as null.
    null_tokens: Option<String>,
    header: Option<bool>,
}

fn ingest_options(q: &DatasetParams) -> ApiResult<IngestOptions> {
    let mut o = IngestOptions::default();
    if let Some(d) = &q.delimiter {
        let d = if d == "\\t" || d == "tab" {
            "\t"
        } else {
            d.as_str()
        };
        match d.as_bytes() {
            [b] if b.is_ascii() => o.delimiter = *b,
            _ => {
                return Err(ApiError::bad_request(
                    "delimiter must be a single ASCII character",
                ))
            }
        }
    }
    if let Some(t) = &q.null_tokens {
        o.null_tokens = t.split(',').map(|s| s.trim().to_string()).collect();
    }
    if let Some(h) = q.header {
        o.has_header = h;
    }
    Ok(o)
}

fn profile_error(e: ProfileError) -> ApiError {
    match &e {
        ProfileError::Ragged { line, .. } | ProfileError::Parse { line, .. } => {
            ApiError::unprocessable(e.to_string()).at(format!("line {line}"))
        }
        _ => ApiError::unprocessable(e.to_string()),
    }
}

async fn post_dataset(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<DatasetParams>,
    body: Bytes,
) -> ApiResult<Response> {
    project(&state, &id)?;
    let table = ingest(&body, &ingest_options(&q)?).map_err(profile_error)?;
    let report = profile(&table, q.label.as_deref()).map_err(profile_error)?;
    let next = update_project(&state, &id, None, |mut p| {
        p.problem = merge_profile(p.problem, &report);
        p.profile = Some(report);
        Ok(p)
    })?;
    Ok(Json(next.profile).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TopParam {
    top: Option<usize>,
}

async fn get_ranking(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<TopParam>,
) -> ApiResult<Json<Ranking>> {
    let p = project(&state, &id)?;
    Ok(Json(rank(&state, &p.problem, q.top)?))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct WhatIf {
    /// `care.<requirement>=<level>` or `value.<requirement>=<value>`.
    overrides: Vec<String>,
    #[serde(default)]
    top: Option<usize>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct WhatIfResult {
    revision: u64,
    before: Ranking,
    after: Ranking,
}

fn override_error(e: OverrideError) -> ApiError {
    let key = match &e {
        OverrideError::BadKey(k) => k.clone(),
        OverrideError::BadValue { key, .. } => key.clone(),
    };
    ApiError::unprocessable(e.to_string()).at(key)
}

async fn post_whatif(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<WhatIfResult>> {
    let req: WhatIf = parse_body(&body)?;
    let p = project(&state, &id)?;
    let overrides = req
        .overrides
        .iter()
        .map(|s| parse_override(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(override_error)?;
    let changed = apply_overrides(p.problem.clone(), &overrides).map_err(override_error)?;
    Ok(Json(WhatIfResult {
        revision: p.revision,
        before: rank(&state, &p.problem, req.top)?,
        after: rank(&state, &changed, req.top)?,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PipelineParams {
    family: String,
    format: Option<String>,
}

async fn get_pipeline(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<PipelineParams>,
) -> ApiResult<Response> {
    let p = project(&state, &id)?;
    let format: ChainFormat = q
        .format
        .as_deref()
        .unwrap_or("canonical")
        .parse()
        .map_err(ApiError::bad_request)?;
    let family = {
        let catalog = state.0.catalog.read().expect("catalog lock");
        catalog.catalog.family(&q.family).cloned().ok_or_else(|| {
            ApiError::unprocessable(format!("no family `{}` in catalog", q.family))
        })?
    };
    let data = DataConditions::gather(&p.problem, p.profile.as_ref());
    let chain = apply_compensations(base_template(&p.problem, &family.id), &family, &data);
    let content_type = match format {
        ChainFormat::Canonical => "application/json",
        ChainFormat::WorkflowXml => "application/xml",
    };
    Ok((
        [(header::CONTENT_TYPE, content_type)],
        export_chain(&chain, format),
    )
        .into_response())
}

async fn get_catalog(State(state): State<AppState>) -> Json<CatalogRecord> {
    Json(state.0.catalog.read().expect("catalog lock").record())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Families {
    version: u64,
    families: Vec<FamilyRecord>,
}

async fn get_families(State(state): State<AppState>) -> Json<Families> {
    let c = state.0.catalog.read().expect("catalog lock");
    Json(Families {
        version: c.version,
        families: c
            .catalog
            .families
            .iter()
            .map(FamilyRecord::from_profile)
            .collect(),
    })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FamilyView {
    version: u64,
    family: FamilyRecord,
}

async fn get_family(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<FamilyView>> {
    let c = state.0.catalog.read().expect("catalog lock");
    let family = c
        .catalog
        .family(&id)
        .ok_or_else(|| ApiError::not_found(format!("no family `{id}`")))?;
    Ok(Json(FamilyView {
        version: c.version,
        family: FamilyRecord::from_profile(family),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VersionParam {
    /// Catalog version the client last saw; stale versions get 409.
    version: Option<u64>,
}

async fn put_family(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<VersionParam>,
    body: Bytes,
) -> ApiResult<Json<FamilyView>> {
    if !valid_id(&id) {
        return Err(ApiError::unprocessable(format!(
            "`{id}` is not a valid family id"
        )));
    }
    let record: FamilyRecord = parse_body(&body)?;
    if record.id != id {
        return Err(ApiError::unprocessable(format!(
            "body id `{}` does not match path id `{id}`",
            record.id
        ))
        .at("id"));
    }
    let family = record
        .clone()
        .into_profile("family")
        .map_err(|e| ApiError::unprocessable(e.to_string()))?;

    let mut current = state.0.catalog.write().expect("catalog lock");
    if let Some(v) = q.version {
        if v != current.version {
            return Err(ApiError::conflict(format!(
                "catalog version {v} is stale; current version is {}",
                current.version
            ))
            .with_details(json!({ "currentVersion": current.version })));
        }
    }
    let catalog = current.catalog.with_family(family);
    let violations = validate_catalog(&catalog);
    if !violations.is_empty() {
        return Err(ApiError::unprocessable("family violates catalog rules")
            .with_details(serde_json::to_value(&violations).expect("violations serialize")));
    }
    let next = crate::StoredCatalog {
        version: current.version + 1,
        catalog,
    };
    state.0.store.save_catalog(&next)?;
    *current = next;
    Ok(Json(FamilyView {
        version: current.version,
        family: FamilyRecord::from_profile(current.catalog.family(&id).expect("just inserted")),
    }))
}
