//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use algofit_core::catalog::{AccuracyBucket, CriterionValueSet};
use algofit_core::engine::{
    complement, fuzzy_leq, satisfies_accuracy, satisfies_cost_cpu, EngineConfig,
};
use algofit_core::pipeline::shipped_rules;
use algofit_core::problem::Distribution;
use algofit_core::problem::{DomainRequirementValue, DomainValue};
use algofit_core::testkit::{
    check_oracle_agreement, check_score_properties, random_family, rng, rule_cases, sweep,
};
use algofit_core::validation::kendall_tau_b;
use algofit_core::{
    apply_compensations, base_template, deserialize_project, export_chain, ingest, new_project,
    profile, rank_families, seed_catalog, set_requirement, solves, CareLevel, ChainFormat,
    Criterion, CriterionValue, IngestOptions, Level, LinguisticValue, Scale,
};
use algofit_service::{app, ServiceConfig};
use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const FUZZY_TOL: f64 = 1e-15;
const SCORE_TOL: f64 = 1e-12;
const GOLDEN_TOL: f64 = 1e-9;
const INSTANCES: usize = 1000;
const PROPERTY_BUDGET: Duration = Duration::from_secs(10);

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures");

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> Vec<u8> {
    std::fs::read(format!("{FIXTURES}/{name}")).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn canon(l: Level) -> LinguisticValue {
    LinguisticValue::canonical(l).unwrap()
}

fn fuzzy_comparator() -> Outcome {
    let worked = [
        (Level::Low, Level::Low, 3.0),
        (Level::Low, Level::Medium, 3.0),
        (Level::Low, Level::High, 3.0),
        (Level::Medium, Level::Low, 2.0),
        (Level::High, Level::Medium, 2.0),
        (Level::VeryHigh, Level::High, 2.0),
        (Level::High, Level::Low, 1.0),
        (Level::VeryHigh, Level::Medium, 1.0),
        (Level::VeryHigh, Level::Low, 0.0),
    ];
    for (a, b, thirds) in worked {
        let f = fuzzy_leq(&canon(a), &canon(b)).map_err(|e| e.to_string())?;
        ensure((f - thirds / 3.0).abs() <= FUZZY_TOL, || {
            format!("{a} <= {b} gave {f}, want {thirds}/3")
        })?;
    }
    Ok(format!(
        "{} worked values within {FUZZY_TOL:e}",
        worked.len()
    ))
}

fn complement_exact() -> Outcome {
    let c = |l| {
        complement(&canon(l))
            .map(|v| v.level())
            .map_err(|e| e.to_string())
    };
    ensure(c(Level::Low)? == Level::VeryHigh, || {
        "Complement(Low)".into()
    })?;
    ensure(c(Level::High)? == Level::Medium, || {
        "Complement(High)".into()
    })?;
    for l in Scale::Canonical.levels() {
        let v = canon(*l);
        let twice = complement(&complement(&v).unwrap()).unwrap();
        ensure(twice == v, || format!("involution fails on {l}"))?;
    }
    Ok("Low->Very High, High->Medium, involution on 4 levels".into())
}

fn score_properties() -> Outcome {
    let start = Instant::now();
    let mut r = rng(7);
    let s = sweep(1, INSTANCES, 4, |pb, cat| {
        check_score_properties(&mut r, pb, cat, SCORE_TOL)
    })?;
    let elapsed = start.elapsed();
    ensure(s.scorable >= INSTANCES, || {
        format!("only {} instances", s.scorable)
    })?;
    ensure(elapsed < PROPERTY_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} problems, {} family checks, tol {SCORE_TOL:e}, {:.2}s",
        s.scorable,
        s.checked,
        elapsed.as_secs_f64()
    ))
}

fn oracle_equivalence() -> Outcome {
    let s = sweep(2, INSTANCES, 4, |pb, cat| {
        check_oracle_agreement(pb, cat, SCORE_TOL)
    })?;
    ensure(s.scorable >= INSTANCES, || {
        format!("only {} instances", s.scorable)
    })?;
    Ok(format!(
        "{} problems, {} family checks, tol {SCORE_TOL:e}",
        s.scorable, s.checked
    ))
}

fn cost_example() -> Outcome {
    let mut af = random_family(&mut rng(0), "cost-fixture");
    for (c, l) in [
        (Criterion::TrainingComplexity, Level::High),
        (Criterion::MemoryRequirements, Level::Medium),
        (Criterion::Parallelism, Level::High),
    ] {
        af.criterion_values
            .insert(c, CriterionValueSet::single(CriterionValue::Level(l)));
    }
    let cfg = EngineConfig::default();
    let s = satisfies_cost_cpu(&af, &canon(Level::Medium), &cfg).map_err(|e| e.to_string())?;
    ensure((s - 5.0 / 6.0).abs() <= SCORE_TOL, || format!("entry {s}"))?;
    let pb = set_requirement(
        new_project("cost"),
        DomainRequirementValue::new(DomainValue::CostCpu(Level::Medium), CareLevel::Must),
    )
    .map_err(|e| e.to_string())?;
    let b = solves(&af, &pb, &cfg).map_err(|e| e.to_string())?;
    ensure((b.solves - 5.0 / 6.0).abs() <= SCORE_TOL, || {
        format!("score {}", b.solves)
    })?;
    Ok(format!("{s} within {SCORE_TOL:e} of 5/6"))
}

fn accuracy_grid() -> Outcome {
    let base = random_family(&mut rng(1), "acc");
    let mut cells = 0;
    for bucket in AccuracyBucket::ALL {
        let mut af = base.clone();
        af.criterion_values.insert(
            Criterion::Accuracy,
            CriterionValueSet::single(CriterionValue::Accuracy(bucket)),
        );
        for req in [0.70, 0.80, 0.85, 0.90, 0.95] {
            let s = satisfies_accuracy(&af, req).map_err(|e| e.to_string())?;
            ensure((s == 1.0) == (bucket.representative() >= req), || {
                format!("{bucket:?} vs {req}: {s}")
            })?;
            cells += 1;
        }
    }
    Ok(format!("{cells} bucket/threshold cells"))
}

fn finance_end_to_end() -> Outcome {
    let pb = deserialize_project(&fixture("finance.json")).map_err(|e| e.to_string())?;
    let r =
        rank_families(&pb, &seed_catalog(), &EngineConfig::default()).map_err(|e| e.to_string())?;
    let score = |id: &str| {
        r.position(id)
            .map(|i| r.ranked[i].solves)
            .ok_or_else(|| format!("{id} not ranked"))
    };
    let golden = [
        ("decision-tree", 1.0),
        ("logistic-regression", 1.0),
        ("k-nearest-neighbors", 1.0),
        ("linear-regression", 936.0 / 952.0),
        ("naive-bayes", 936.0 / 952.0),
        ("deep-convolutional-network", 4.0 / 7.0),
        ("random-forest", 4.0 / 7.0),
        ("k-means", 528.0 / 952.0),
    ];
    for (id, want) in golden {
        let got = score(id)?;
        ensure((got - want).abs() <= GOLDEN_TOL, || {
            format!("{id}: {got} vs {want}")
        })?;
    }
    let (tree, deep) = (
        score("decision-tree")?,
        score("deep-convolutional-network")?,
    );
    ensure(tree > deep, || format!("tree {tree} <= deep {deep}"))?;
    Ok(format!(
        "decision-tree {tree} > deep network {deep}; {} golden values within {GOLDEN_TOL:e}",
        golden.len()
    ))
}

fn profiler_golden() -> Outcome {
    let run = || {
        let t = ingest(&fixture("customers_100.csv"), &IngestOptions::default()).unwrap();
        profile(&t, Some("churned")).unwrap()
    };
    let report = run();
    let age = report.column("age").ok_or("no age column")?;
    ensure(age.null_fraction == 0.07, || {
        format!("nullFraction {}", age.null_fraction)
    })?;
    ensure(report.missing_level == Level::Medium, || {
        format!("missingLevel {:?}", report.missing_level)
    })?;
    let dist = |name: &str| {
        let t = ingest(&fixture(name), &IngestOptions::default()).unwrap();
        profile(&t, None).unwrap().distribution
    };
    ensure(dist("normal_1000.csv") == Distribution::Normal, || {
        "normal sample".into()
    })?;
    ensure(
        dist("heavy_tailed_1000.csv") == Distribution::Unknown,
        || "heavy-tailed sample".into(),
    )?;
    let first = serde_json::to_string(&report).unwrap();
    for _ in 0..3 {
        ensure(serde_json::to_string(&run()).unwrap() == first, || {
            "report differs between runs".into()
        })?;
    }
    Ok("nullFraction 0.07, Medium; Normal/Unknown; identical over 4 runs".into())
}

fn pipeline_rules() -> Outcome {
    let pb = deserialize_project(&fixture("finance.json")).map_err(|e| e.to_string())?;
    let rules = shipped_rules();
    let cases = rule_cases();
    for rule in &rules {
        let pos = cases.iter().any(|c| c.rule == rule.id && c.fires);
        let neg = cases.iter().any(|c| c.rule == rule.id && !c.fires);
        ensure(pos && neg, || format!("{} lacks a fixture", rule.id))?;
    }
    for case in &cases {
        let rule = rules
            .iter()
            .find(|r| r.id == case.rule)
            .ok_or("unknown rule")?;
        ensure(
            rule.fires(&case.family, &case.data).is_some() == case.fires,
            || format!("{} fires={}", case.rule, case.fires),
        )?;
        let once = apply_compensations(base_template(&pb, "x"), &case.family, &case.data);
        let twice = apply_compensations(once.clone(), &case.family, &case.data);
        ensure(once == twice, || format!("{} not idempotent", case.rule))?;
        let injected = once.steps.iter().filter(|s| s.kind == case.step).count();
        ensure(injected == usize::from(case.fires), || {
            format!("{}: {:?}", case.rule, once.kinds())
        })?;
    }
    let xml = export_chain(
        &base_template(&pb, "decision-tree"),
        ChainFormat::WorkflowXml,
    );
    let tasks = String::from_utf8(xml)
        .map_err(|e| e.to_string())?
        .matches("<bpmn:serviceTask ")
        .count();
    ensure(tasks == 5, || format!("{tasks} service tasks"))?;
    Ok(format!(
        "{} rules x positive/negative, idempotent, 5 service tasks",
        rules.len()
    ))
}

/// Concordant minus discordant pairs over all pairs; no ties.
fn brute_force_tau(a: &[&str], b: &[&str]) -> f64 {
    let pos = |xs: &[&str], x: &str| xs.iter().position(|y| *y == x).unwrap() as i64;
    let (mut c, mut d, mut n) = (0, 0, 0);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if pos(b, a[i]) < pos(b, a[j]) {
                c += 1;
            } else {
                d += 1;
            }
            n += 1;
        }
    }
    f64::from(c - d) / f64::from(n)
}

fn tau_b() -> Outcome {
    let owned = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let five = ["a", "b", "c", "d", "e"];
    let reversed = ["e", "d", "c", "b", "a"];
    let tau =
        |x: &[&str], y: &[&str]| kendall_tau_b(&owned(x), &owned(y)).map_err(|e| e.to_string());
    ensure(tau(&five, &five)? == 1.0, || "identical".into())?;
    ensure(tau(&five, &reversed)? == -1.0, || "reversed".into())?;
    let (a, b) = (["a", "b", "c", "d"], ["a", "c", "b", "d"]);
    let t = tau(&a, &b)?;
    let brute = brute_force_tau(&a, &b);
    ensure(
        (t - 2.0 / 3.0).abs() <= SCORE_TOL && (t - brute).abs() <= SCORE_TOL,
        || format!("single swap {t}, brute force {brute}"),
    )?;
    Ok(format!("1, -1, single swap {t} (brute force {brute})"))
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
    (
        status,
        res.into_body().collect().await.unwrap().to_bytes().to_vec(),
    )
}

async fn durability() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = ServiceConfig::new(dir.path());
    let first = app(&cfg).map_err(|e| e.to_string())?;
    let (s, b) = send(
        &first,
        Method::POST,
        "/projects",
        r#"{"description":"credit"}"#,
    )
    .await;
    ensure(s == StatusCode::CREATED, || format!("create: {s}"))?;
    let created: Value = serde_json::from_slice(&b).unwrap();
    let id = created["project"]["id"]
        .as_str()
        .ok_or("no id")?
        .to_string();
    let finance: Value = serde_json::from_slice(&fixture("finance.json")).unwrap();
    let body = json!({
        "revision": 1,
        "domainRequirements": finance["domainRequirements"],
        "dataProperties": finance["dataProperties"],
    });
    let (s, _) = send(
        &first,
        Method::PUT,
        &format!("/projects/{id}/requirements"),
        body.to_string(),
    )
    .await;
    ensure(s == StatusCode::OK, || format!("requirements: {s}"))?;
    let (s, _) = send(
        &first,
        Method::POST,
        &format!("/projects/{id}/dataset?label=churned"),
        fixture("customers_100.csv"),
    )
    .await;
    ensure(s == StatusCode::OK, || format!("upload: {s}"))?;
    let uri = format!("/projects/{id}/ranking");
    let before = send(&first, Method::GET, &uri, Body::empty()).await;
    ensure(before.0 == StatusCode::OK, || {
        format!("ranking: {}", before.0)
    })?;
    drop(first);
    let second = app(&cfg).map_err(|e| e.to_string())?;
    let after = send(&second, Method::GET, &uri, Body::empty()).await;
    ensure(after == before, || "ranking differs after restart".into())?;
    Ok(format!("{} bytes identical after restart", before.1.len()))
}

fn service_durability() -> Outcome {
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    rt.block_on(durability())
}

fn main() {
    let criteria: [Check; 11] = [
        ("fuzzy comparator exactness", fuzzy_comparator),
        ("complement exactness", complement_exact),
        ("score properties", score_properties),
        ("oracle equivalence", oracle_equivalence),
        ("cost worked example", cost_example),
        ("accuracy threshold grid", accuracy_grid),
        ("finance end-to-end", finance_end_to_end),
        ("profiler golden", profiler_golden),
        ("pipeline rules", pipeline_rules),
        ("tau-b", tau_b),
        ("service durability", service_durability),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
