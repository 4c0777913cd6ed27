use std::io::Write;
use std::net::SocketAddr;
use std::path::Path;

use algofit_core::catalog::{validate_catalog, CatalogDocument, Violation};
use algofit_core::pipeline::ProcessingChain;
use algofit_core::problem::{apply_overrides, parse_override, OverrideError};
use algofit_core::validation::{agreement_report, load_rankings, AgreementReport};
use algofit_core::{
    apply_compensations, base_template, deserialize_project, export_chain, ingest, merge_profile,
    profile, rank_families, seed_catalog, solves, Catalog, CatalogError, ChainFormat,
    DataConditions, EngineConfig, EngineError, IngestOptions, MLProblem, ProfileReport, Ranking,
};
use serde::Serialize;

use crate::table::{score, TextTable};
use crate::{
    read_file, CatalogArg, CatalogCommand, ChainOutput, CliError, CliResult, Command, DataArgs,
    OutputFormat,
};

pub fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<()> {
    let text = match command {
        Command::Catalog(CatalogCommand::Validate { path, format }) => {
            catalog_validate(&path, format)?
        }
        Command::Profile {
            data,
            data_args,
            format,
        } => {
            let report = profile_file(&data, &data_args)?;
            match format {
                OutputFormat::Machine => machine(&report),
                OutputFormat::Table => profile_table(&report),
            }
        }
        Command::Rank {
            project,
            catalog,
            top,
            format,
        } => {
            let pb = load_project(&project)?;
            let catalog = load_catalog(&catalog)?;
            let ranking = rank(&pb, &catalog, top)?;
            for f in &ranking.failures {
                eprintln!("warning: {} not scored: {}", f.family_id, f.reason);
            }
            match format {
                OutputFormat::Machine => machine(&ranking),
                OutputFormat::Table => rank_table(&ranking),
            }
        }
        Command::Explain {
            project,
            family,
            catalog,
            format,
        } => explain(&project, &family, &catalog, format)?,
        Command::Whatif {
            project,
            overrides,
            catalog,
            top,
            format,
        } => whatif(&project, &overrides, &catalog, top, format)?,
        Command::Pipeline {
            project,
            family,
            data,
            data_args,
            catalog,
            format,
        } => pipeline(
            &project,
            &family,
            data.as_deref(),
            &data_args,
            &catalog,
            format,
        )?,
        Command::Agreement {
            rankings,
            projects,
            catalog,
            format,
        } => agreement(&rankings, &projects, &catalog, format)?,
        Command::Serve {
            port,
            host,
            store_dir,
            max_upload,
            cors_origins,
            catalog,
        } => {
            let mut config = algofit_service::ServiceConfig::new(store_dir);
            config.max_upload_bytes = max_upload;
            config.cors_origins = cors_origins;
            config.initial_catalog = load_catalog(&catalog)?;
            return serve(&host, port, &config);
        }
    };
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn machine<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output is serializable");
    s.push('\n');
    s
}

fn catalog_error(path: &Path, e: CatalogError) -> CliError {
    match e {
        CatalogError::Invalid(v) => {
            let list: Vec<String> = v.iter().map(Violation::to_string).collect();
            CliError::Domain(format!(
                "{}: invalid catalog\n  {}",
                path.display(),
                list.join("\n  ")
            ))
        }
        other => CliError::Domain(format!("{}: {other}", path.display())),
    }
}

fn load_catalog(arg: &CatalogArg) -> CliResult<Catalog> {
    match &arg.catalog {
        None => Ok(seed_catalog()),
        Some(path) => {
            let bytes = read_file(path)?;
            algofit_core::load_catalog(&bytes).map_err(|e| catalog_error(path, e))
        }
    }
}

fn load_project(path: &Path) -> CliResult<MLProblem> {
    let bytes = read_file(path)?;
    deserialize_project(&bytes).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ValidationOutput {
    valid: bool,
    violations: Vec<Violation>,
}

fn catalog_validate(path: &Path, format: OutputFormat) -> CliResult<String> {
    let bytes = read_file(path)?;
    let parsed: CatalogDocument = serde_json::from_slice(&bytes).map_err(|e| {
        CliError::Domain(format!(
            "{}: parse error at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    let catalog = parsed
        .into_catalog()
        .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
    let violations = validate_catalog(&catalog);
    let text = match format {
        OutputFormat::Machine => machine(&ValidationOutput {
            valid: violations.is_empty(),
            violations: violations.clone(),
        }),
        OutputFormat::Table if violations.is_empty() => format!(
            "valid: {} families, {} criteria\n",
            catalog.families.len(),
            catalog.criteria.len()
        ),
        OutputFormat::Table => {
            let mut t = TextTable::new(&["location", "problem"]);
            for v in &violations {
                t.row(vec![v.location.clone(), v.message.clone()]);
            }
            t.render()
        }
    };
    if violations.is_empty() {
        Ok(text)
    } else {
        print!("{text}");
        Err(CliError::Domain(format!(
            "{}: {} violation(s)",
            path.display(),
            violations.len()
        )))
    }
}

fn ingest_options(args: &DataArgs) -> CliResult<IngestOptions> {
    let d = match args.delimiter.as_str() {
        "\\t" | "tab" => "\t",
        d => d,
    };
    let delimiter = match d.as_bytes() {
        [b] if b.is_ascii() => *b,
        _ => {
            return Err(CliError::Usage(format!(
                "--delimiter must be a single ASCII character, got `{}`",
                args.delimiter
            )))
        }
    };
    Ok(IngestOptions {
        delimiter,
        has_header: !args.no_header,
        null_tokens: args.null_tokens.clone(),
        ..IngestOptions::default()
    })
}

fn profile_file(path: &Path, args: &DataArgs) -> CliResult<ProfileReport> {
    let options = ingest_options(args)?;
    let bytes = read_file(path)?;
    let table = ingest(&bytes, &options)
        .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
    let report = profile(&table, args.label.as_deref())
        .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
    for d in &report.diagnostics {
        eprintln!("note: {d}");
    }
    Ok(report)
}

fn profile_table(r: &ProfileReport) -> String {
    let mut s = format!(
        "rows: {}\nvolume: {}\nmissing: {}\ndistribution: {:?}\nscales similar: {}\n",
        r.row_count,
        r.volume_bucket.label(),
        r.missing_level.label(),
        r.distribution,
        r.scales_similar
    );
    if let Some(ok) = r.class_balance_ok {
        s.push_str(&format!("class balance ok: {ok}\n"));
    }
    for p in &r.correlated_pairs {
        s.push_str(&format!(
            "correlated: {} ~ {} (r={:.3})\n",
            p.left, p.right, p.r
        ));
    }
    s.push('\n');
    let mut t = TextTable::new(&[
        "column",
        "type",
        "nulls",
        "null fraction",
        "distinct",
        "normality",
    ]);
    for c in &r.columns {
        t.row(vec![
            c.name.clone(),
            c.inferred_type
                .map_or("-".into(), |a| a.label().to_string()),
            c.null_count.to_string(),
            score(c.null_fraction),
            c.distinct_count.to_string(),
            c.normality.map_or("-".into(), |n| format!("{n:?}")),
        ]);
    }
    s.push_str(&t.render());
    s
}

fn engine_error(e: EngineError) -> CliError {
    CliError::Domain(e.to_string())
}

fn rank(pb: &MLProblem, catalog: &Catalog, top: Option<usize>) -> CliResult<Ranking> {
    let r = rank_families(pb, catalog, &EngineConfig::default()).map_err(engine_error)?;
    Ok(match top {
        Some(n) => r.top(n),
        None => r,
    })
}

fn rank_table(r: &Ranking) -> String {
    let mut t = TextTable::new(&["#", "family", "score"]);
    for (i, b) in r.ranked.iter().enumerate() {
        t.row(vec![
            (i + 1).to_string(),
            b.family_id.clone(),
            score(b.solves),
        ]);
    }
    t.render()
}

fn explain(
    path: &Path,
    family: &str,
    catalog: &CatalogArg,
    format: OutputFormat,
) -> CliResult<String> {
    let pb = load_project(path)?;
    let catalog = load_catalog(catalog)?;
    let af = catalog
        .family(family)
        .ok_or_else(|| CliError::Domain(format!("no family `{family}` in catalog")))?;
    let b = solves(af, &pb, &EngineConfig::default()).map_err(engine_error)?;
    if format == OutputFormat::Machine {
        return Ok(machine(&b));
    }
    let mut t = TextTable::new(&["requirement", "satisfaction", "weight", "criteria", "note"]);
    let (mut num, mut den) = (0.0, 0.0);
    for e in &b.entries {
        num += e.weight * e.satisfaction;
        den += e.weight;
        let criteria: Vec<String> = e.mapped_criteria.iter().map(|c| c.to_string()).collect();
        t.row(vec![
            e.requirement_type.id().to_string(),
            score(e.satisfaction),
            score(e.weight),
            criteria.join(","),
            e.note.clone().unwrap_or_default(),
        ]);
    }
    Ok(format!(
        "{}\n{}sum(w*s) / sum(w) = {} / {} = {}\n",
        b.family_id,
        t.render(),
        score(num),
        score(den),
        score(b.solves)
    ))
}

#[derive(Serialize)]
struct WhatIfOutput {
    before: Ranking,
    after: Ranking,
}

fn override_error(e: OverrideError) -> CliError {
    CliError::Usage(e.to_string())
}

fn whatif(
    path: &Path,
    specs: &[String],
    catalog: &CatalogArg,
    top: Option<usize>,
    format: OutputFormat,
) -> CliResult<String> {
    let overrides = specs
        .iter()
        .map(|s| parse_override(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(override_error)?;
    let pb = load_project(path)?;
    let catalog = load_catalog(catalog)?;
    let changed = apply_overrides(pb.clone(), &overrides).map_err(override_error)?;
    changed
        .validate()
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let before = rank(&pb, &catalog, top)?;
    let after = rank(&changed, &catalog, top)?;
    if format == OutputFormat::Machine {
        return Ok(machine(&WhatIfOutput { before, after }));
    }
    let mut t = TextTable::new(&["#", "before", "score", "after", "score", "move"]);
    let rows = before.ranked.len().max(after.ranked.len());
    for i in 0..rows {
        let b = before.ranked.get(i);
        let a = after.ranked.get(i);
        let moved = a.map_or(String::new(), |a| match before.position(&a.family_id) {
            Some(old) if old > i => format!("+{}", old - i),
            Some(old) if old < i => format!("-{}", i - old),
            Some(_) => "=".into(),
            None => "new".into(),
        });
        t.row(vec![
            (i + 1).to_string(),
            b.map_or(String::new(), |b| b.family_id.clone()),
            b.map_or(String::new(), |b| score(b.solves)),
            a.map_or(String::new(), |a| a.family_id.clone()),
            a.map_or(String::new(), |a| score(a.solves)),
            moved,
        ]);
    }
    Ok(t.render())
}

fn pipeline(
    path: &Path,
    family: &str,
    data: Option<&Path>,
    data_args: &DataArgs,
    catalog: &CatalogArg,
    format: ChainOutput,
) -> CliResult<String> {
    let mut pb = load_project(path)?;
    let catalog = load_catalog(catalog)?;
    let af = catalog
        .family(family)
        .ok_or_else(|| CliError::Domain(format!("no family `{family}` in catalog")))?;
    let report = data.map(|d| profile_file(d, data_args)).transpose()?;
    if let Some(r) = &report {
        pb = merge_profile(pb, r);
    }
    let conditions = DataConditions::gather(&pb, report.as_ref());
    let chain = apply_compensations(base_template(&pb, &af.id), af, &conditions);
    Ok(match format {
        ChainOutput::Table => chain_table(&chain),
        ChainOutput::Machine | ChainOutput::Canonical => {
            String::from_utf8(export_chain(&chain, ChainFormat::Canonical)).expect("utf-8 export")
        }
        ChainOutput::WorkflowXml => {
            String::from_utf8(export_chain(&chain, ChainFormat::WorkflowXml)).expect("utf-8 export")
        }
    })
}

fn chain_table(chain: &ProcessingChain) -> String {
    let mut t = TextTable::new(&["#", "step", "rationale"]);
    for (i, s) in chain.steps.iter().enumerate() {
        t.row(vec![
            (i + 1).to_string(),
            s.kind.label().to_string(),
            s.rationale.clone(),
        ]);
    }
    format!(
        "{} for {}\n{}exit: {}\n",
        chain.family_id,
        chain.problem_id,
        t.render(),
        chain.exit_criterion
    )
}

fn agreement(
    rankings: &Path,
    projects: &[std::path::PathBuf],
    catalog: &CatalogArg,
    format: OutputFormat,
) -> CliResult<String> {
    let catalog = load_catalog(catalog)?;
    let problems = projects
        .iter()
        .map(|p| load_project(p))
        .collect::<CliResult<Vec<_>>>()?;
    let bytes = read_file(rankings)?;
    let rankings = load_rankings(&bytes)
        .map_err(|e| CliError::Domain(format!("{}: {e}", rankings.display())))?;
    let report = agreement_report(&problems, &rankings, &catalog, &EngineConfig::default())
        .map_err(|e| CliError::Domain(e.to_string()))?;
    Ok(match format {
        OutputFormat::Machine => machine(&report),
        OutputFormat::Table => agreement_table(&report),
    })
}

fn agreement_table(r: &AgreementReport) -> String {
    let mut t = TextTable::new(&["problem", "rater", "families", "tau-b", "spearman"]);
    for c in &r.comparisons {
        t.row(vec![
            c.problem_id.clone(),
            c.rater_id.clone(),
            c.expert_order.len().to_string(),
            score(c.tau_b),
            score(c.spearman),
        ]);
    }
    let mut s = t.render();
    for (problem, tau) in &r.mean_tau_b {
        s.push_str(&format!("mean tau-b {problem}: {}\n", score(*tau)));
    }
    for p in &r.inter_rater {
        let tau = p.tau_b.map_or("undefined".to_string(), score);
        s.push_str(&format!(
            "raters {} vs {} on {}: {} common, tau-b {tau}\n",
            p.left, p.right, p.problem_id, p.common
        ));
    }
    s
}

fn serve(host: &str, port: u16, config: &algofit_service::ServiceConfig) -> CliResult<()> {
    let addr: SocketAddr = format!("{host}:{port}")
        .parse()
        .map_err(|e| CliError::Usage(format!("bad listen address: {e}")))?;
    let router = algofit_service::app(config)
        .map_err(|e| CliError::Io(format!("{}: {e}", config.store_dir.display())))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Io(e.to_string()))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| CliError::Io(format!("bind {addr}: {e}")))?;
        eprintln!("listening on http://{addr}");
        algofit_service::serve(listener, router)
            .await
            .map_err(|e| CliError::Io(e.to_string()))
    })
}
