use algofit_service::{app, ServiceConfig};
use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures");

fn fixture(name: &str) -> Vec<u8> {
    std::fs::read(format!("{FIXTURES}/{name}")).unwrap()
}

async fn send(
    app: &Router,
    method: Method,
    uri: &str,
    body: impl Into<Body>,
) -> (StatusCode, Vec<u8>) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .body(body.into())
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, bytes)
}

fn json_of(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(bytes)))
}

fn finance_requirements(revision: u64) -> String {
    let doc = json_of(&fixture("finance.json"));
    json!({
        "revision": revision,
        "domainRequirements": doc["domainRequirements"],
        "dataProperties": doc["dataProperties"],
    })
    .to_string()
}

async fn finance_project(app: &Router) -> String {
    let (s, b) = send(
        app,
        Method::POST,
        "/projects",
        r#"{"description":"credit"}"#,
    )
    .await;
    assert_eq!(s, StatusCode::CREATED);
    let id = json_of(&b)["project"]["id"].as_str().unwrap().to_string();
    let (s, b) = send(
        app,
        Method::PUT,
        &format!("/projects/{id}/requirements"),
        finance_requirements(1),
    )
    .await;
    assert_eq!(s, StatusCode::OK, "{}", String::from_utf8_lossy(&b));
    id
}

fn fresh() -> (tempfile::TempDir, Router) {
    let dir = tempfile::tempdir().unwrap();
    let router = app(&ServiceConfig::new(dir.path())).unwrap();
    (dir, router)
}

#[tokio::test]
async fn create_project_bodies() {
    let (_d, app) = fresh();
    let (s, b) = send(
        &app,
        Method::POST,
        "/projects",
        r#"{"description":"churn"}"#,
    )
    .await;
    assert_eq!(s, StatusCode::CREATED);
    let v = json_of(&b);
    assert_eq!(v["revision"], 1);
    assert_eq!(v["project"]["description"], "churn");
    let (s, b) = send(&app, Method::POST, "/projects", "").await;
    assert_eq!(s, StatusCode::CREATED);
    assert_eq!(json_of(&b)["project"]["description"], "");
    let (s, b) = send(&app, Method::POST, "/projects", "{not json").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert!(json_of(&b)["error"].as_str().unwrap().contains("malformed"));
}

#[tokio::test]
async fn requirements_revision_and_range() {
    let (_d, app) = fresh();
    let id = finance_project(&app).await;
    let uri = format!("/projects/{id}/requirements");
    let (_, before) = send(&app, Method::GET, &format!("/projects/{id}"), Body::empty()).await;
    assert_eq!(json_of(&before)["revision"], 2);

    let (s, b) = send(&app, Method::PUT, &uri, finance_requirements(1)).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(json_of(&b)["details"]["currentRevision"], 2);
    let (_, after) = send(&app, Method::GET, &format!("/projects/{id}"), Body::empty()).await;
    assert_eq!(before, after);

    let bad = json!({
        "revision": 2,
        "domainRequirements": [{"type": "accuracy", "value": 1.5, "care": "Must"}],
    });
    let (s, b) = send(&app, Method::PUT, &uri, bad.to_string()).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(json_of(&b)["location"], "domainRequirements[0]");

    let (s, b) = send(&app, Method::PUT, &uri, finance_requirements(2)).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(json_of(&b)["revision"], 3);
}

#[tokio::test]
async fn dataset_upload() {
    let (_d, app) = fresh();
    let id = finance_project(&app).await;
    let (s, b) = send(
        &app,
        Method::POST,
        &format!("/projects/{id}/dataset?label=churned"),
        fixture("customers_100.csv"),
    )
    .await;
    assert_eq!(s, StatusCode::OK, "{}", String::from_utf8_lossy(&b));
    let report = json_of(&b);
    assert_eq!(report["rowCount"], 100);
    assert_eq!(report["missingLevel"], "Medium");
    let age = report["columns"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "age")
        .unwrap();
    assert_eq!(age["nullFraction"], 0.07);

    let (_, p) = send(&app, Method::GET, &format!("/projects/{id}"), Body::empty()).await;
    let p = json_of(&p);
    assert_eq!(p["revision"], 3);
    let props = p["project"]["dataProperties"].as_array().unwrap();
    let missing = props.iter().find(|d| d["type"] == "missingValues").unwrap();
    assert_eq!(missing["provenance"], "profiled");
    // The expert's labeling survives.
    let labeling = props.iter().find(|d| d["type"] == "labeling").unwrap();
    assert_eq!(labeling["provenance"], "expert");

    let (s, b) = send(
        &app,
        Method::POST,
        &format!("/projects/{id}/dataset"),
        "a,b\n1,2\n3\n",
    )
    .await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(json_of(&b)["location"], "line 3");
    let (s, _) = send(
        &app,
        Method::POST,
        &format!("/projects/{id}/dataset?label=nope"),
        "a\n1\n",
    )
    .await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _) = send(&app, Method::POST, "/projects/unknown/dataset", "a\n1\n").await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn upload_limit() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ServiceConfig::new(dir.path());
    cfg.max_upload_bytes = 1024;
    let app = app(&cfg).unwrap();
    let id = finance_project(&app).await;
    let big = "x\n".to_string() + &"1\n".repeat(2000);
    let (s, _) = send(&app, Method::POST, &format!("/projects/{id}/dataset"), big).await;
    assert_eq!(s, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn ranking() {
    let (_d, app) = fresh();
    let id = finance_project(&app).await;
    let (s, b) = send(
        &app,
        Method::GET,
        &format!("/projects/{id}/ranking?top=3"),
        Body::empty(),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    let r = json_of(&b);
    assert_eq!(r["ranked"].as_array().unwrap().len(), 3);
    assert_eq!(r["ranked"][0]["familyId"], "decision-tree");
    let (_, again) = send(
        &app,
        Method::GET,
        &format!("/projects/{id}/ranking?top=3"),
        Body::empty(),
    )
    .await;
    assert_eq!(b, again);

    let (s, _) = send(&app, Method::GET, "/projects/nope/ranking", Body::empty()).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    let (_, b) = send(&app, Method::POST, "/projects", "").await;
    let empty = json_of(&b)["project"]["id"].as_str().unwrap().to_string();
    let (s, b) = send(
        &app,
        Method::GET,
        &format!("/projects/{empty}/ranking"),
        Body::empty(),
    )
    .await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(json_of(&b)["error"]
        .as_str()
        .unwrap()
        .contains("care level"));
}

#[tokio::test]
async fn whatif_is_read_only() {
    let (_d, app) = fresh();
    let id = finance_project(&app).await;
    let uri = format!("/projects/{id}/whatif");
    let body = json!({"overrides": ["care.explainability=Not"]}).to_string();
    let (a, b) = tokio::join!(
        send(&app, Method::POST, &uri, body.clone()),
        send(&app, Method::POST, &uri, body.clone())
    );
    assert_eq!(a.0, StatusCode::OK);
    assert_eq!(b.0, StatusCode::OK);
    assert_eq!(a.1, b.1);
    let v = json_of(&a.1);
    assert_eq!(v["before"]["ranked"][0]["familyId"], "decision-tree");
    assert_ne!(v["after"]["ranked"][0]["familyId"], "decision-tree");
    let (_, p) = send(&app, Method::GET, &format!("/projects/{id}"), Body::empty()).await;
    assert_eq!(json_of(&p)["revision"], 2);

    let (s, b) = send(
        &app,
        Method::POST,
        &uri,
        json!({"overrides": ["care.nonsense=Must"]}).to_string(),
    )
    .await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(json_of(&b)["location"], "care.nonsense");
    let (s, b) = send(
        &app,
        Method::POST,
        &uri,
        json!({"overrides": []}).to_string(),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    let v = json_of(&b);
    assert_eq!(v["before"], v["after"]);
}

#[tokio::test]
async fn pipeline_formats() {
    let (_d, app) = fresh();
    let id = finance_project(&app).await;
    let (s, b) = send(
        &app,
        Method::GET,
        &format!("/projects/{id}/pipeline?family=decision-tree"),
        Body::empty(),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    let chain = json_of(&b);
    assert_eq!(chain["schemaVersion"], 1);
    assert_eq!(chain["steps"].as_array().unwrap().len(), 5);
    let (s, b) = send(
        &app,
        Method::GET,
        &format!("/projects/{id}/pipeline?family=decision-tree&format=workflow-xml"),
        Body::empty(),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(
        String::from_utf8(b)
            .unwrap()
            .matches("<bpmn:serviceTask ")
            .count(),
        5
    );

    // Mixed types and uneven scales call for preprocessing.
    send(
        &app,
        Method::POST,
        &format!("/projects/{id}/dataset?label=churned"),
        fixture("customers_100.csv"),
    )
    .await;
    let (_, b) = send(
        &app,
        Method::GET,
        &format!("/projects/{id}/pipeline?family=support-vector-machine"),
        Body::empty(),
    )
    .await;
    let kinds: Vec<Value> = json_of(&b)["steps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["kind"].clone())
        .collect();
    assert!(kinds.len() > 5, "{kinds:?}");
    assert!(kinds.contains(&json!("imputation")), "{kinds:?}");

    let (s, _) = send(
        &app,
        Method::GET,
        &format!("/projects/{id}/pipeline?family=nope"),
        Body::empty(),
    )
    .await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _) = send(
        &app,
        Method::GET,
        &format!("/projects/{id}/pipeline?family=pca&format=pdf"),
        Body::empty(),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn catalog_versioning() {
    let (_d, app) = fresh();
    let (s, b) = send(&app, Method::GET, "/catalog", Body::empty()).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(json_of(&b)["version"], 1);
    let (_, b) = send(
        &app,
        Method::GET,
        "/catalog/families/decision-tree",
        Body::empty(),
    )
    .await;
    let mut family = json_of(&b)["family"].clone();

    family["criterionValues"]["accuracy"] = json!(["perfect"]);
    let (s, _) = send(
        &app,
        Method::PUT,
        "/catalog/families/decision-tree",
        family.to_string(),
    )
    .await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    family["criterionValues"]
        .as_object_mut()
        .unwrap()
        .remove("accuracy");
    let (s, b) = send(
        &app,
        Method::PUT,
        "/catalog/families/decision-tree",
        family.to_string(),
    )
    .await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(json_of(&b)["details"].is_array());

    family["criterionValues"]["accuracy"] = json!([">=90%"]);
    let (s, b) = send(
        &app,
        Method::PUT,
        "/catalog/families/decision-tree?version=1",
        family.to_string(),
    )
    .await;
    assert_eq!(s, StatusCode::OK, "{}", String::from_utf8_lossy(&b));
    assert_eq!(json_of(&b)["version"], 2);
    let (_, b) = send(
        &app,
        Method::GET,
        "/catalog/families/decision-tree",
        Body::empty(),
    )
    .await;
    assert_eq!(json_of(&b)["family"], family);
    let (s, _) = send(
        &app,
        Method::PUT,
        "/catalog/families/decision-tree?version=1",
        family.to_string(),
    )
    .await;
    assert_eq!(s, StatusCode::CONFLICT);
    let (_, b) = send(&app, Method::GET, "/catalog/families", Body::empty()).await;
    assert_eq!(json_of(&b)["version"], 2);
}

#[tokio::test]
async fn restart_reproduces_gets() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ServiceConfig::new(dir.path());
    let first = app(&cfg).unwrap();
    let id = finance_project(&first).await;
    let (s, _) = send(
        &first,
        Method::POST,
        &format!("/projects/{id}/dataset?label=churned"),
        fixture("customers_100.csv"),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    let uris = [
        format!("/projects/{id}"),
        format!("/projects/{id}/ranking"),
        format!("/projects/{id}/pipeline?family=k-means&format=workflow-xml"),
        "/catalog".to_string(),
    ];
    let mut before = Vec::new();
    for u in &uris {
        before.push(send(&first, Method::GET, u, Body::empty()).await);
    }
    drop(first);
    let second = app(&cfg).unwrap();
    for (u, b) in uris.iter().zip(before) {
        assert_eq!(send(&second, Method::GET, u, Body::empty()).await, b, "{u}");
    }
}

#[tokio::test]
async fn cors_headers() {
    let (_d, app) = fresh();
    let req = Request::builder()
        .uri("/catalog/families")
        .header("origin", "http://localhost:5173")
        .body(Body::empty())
        .unwrap();
    let res = app.oneshot(req).await.unwrap();
    assert_eq!(res.headers()["access-control-allow-origin"], "*");
}
