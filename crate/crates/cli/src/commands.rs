use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Value};
use surf_core::cover::normalize_hypergraph;
use surf_core::document::{
    canonical_json, load_background, load_morphism, load_process, load_system, parse_document,
    trace_json, Document, DocumentKind,
};
use surf_core::laws::{run_law_suite, LawTarget};
use surf_core::{
    build_transition_graph, is_rs_morphism, is_strong, run_process, Background, Carrier,
    CoverInstance, CoverSystem, Kind, ReactionSystem, StrongMode, DEFAULT_ENUM_CAP,
};

use crate::error::CliError;
use crate::KindArg;

pub type Verdict = Result<bool, CliError>;

const MAX_ENUM_VAR: &str = "SURF_MAX_ENUM";

fn enum_cap() -> Result<usize, CliError> {
    match std::env::var(MAX_ENUM_VAR) {
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&cap| cap > 0)
            .ok_or_else(|| CliError::input(format!("{MAX_ENUM_VAR} must be a positive integer"))),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn document(path: &Path) -> Result<Document, CliError> {
    parse_document(&read(path)?).map_err(|source| CliError::Document {
        path: path.to_path_buf(),
        source,
    })
}

fn wrong_kind(path: &Path, expected: &str, found: DocumentKind) -> CliError {
    CliError::input(format!(
        "{}: expected a {expected} document, got {found}",
        path.display()
    ))
}

fn system_from(path: &Path) -> Result<ReactionSystem, CliError> {
    match document(path)? {
        Document::System(doc) => load_system(&doc).map_err(|source| CliError::Document {
            path: path.to_path_buf(),
            source,
        }),
        other => Err(wrong_kind(path, "system", other.kind())),
    }
}

/// A system document yields its system; a background document only its
/// background.
fn system_or_background(path: &Path) -> Result<(Arc<Background>, Option<ReactionSystem>), CliError> {
    let located = |source| CliError::Document {
        path: path.to_path_buf(),
        source,
    };
    match document(path)? {
        Document::System(doc) => {
            let system = load_system(&doc).map_err(located)?;
            Ok((system.background().clone(), Some(system)))
        }
        Document::Background(doc) => {
            Ok((Arc::new(load_background(&doc, "payload").map_err(located)?), None))
        }
        other => Err(wrong_kind(path, "system or background", other.kind())),
    }
}

fn print(value: &Value) {
    print!("{}", canonical_json(value));
}

pub fn laws(kind: KindArg, scheme: Option<&str>, cases: usize, seed: u64) -> Verdict {
    let kind = match kind {
        KindArg::Set => Kind::Set,
        KindArg::Graph => Kind::Graph,
        KindArg::Hypergraph => Kind::Hypergraph,
        KindArg::Poset => Kind::Poset,
        KindArg::Diagram => Kind::Diagram,
    };
    let target = match (kind, scheme) {
        (_, None) => LawTarget::Kind(kind),
        (Kind::Diagram, Some(name)) => LawTarget::Scheme(name.to_string()),
        (_, Some(_)) => return Err(CliError::input("--scheme requires --kind diagram")),
    };
    let reports = run_law_suite(&target, cases, seed).map_err(CliError::input)?;
    let mut all_passed = true;
    for report in &reports {
        all_passed &= report.passed();
        let status = if report.passed() { "pass" } else { "FAIL" };
        print!("{target} {}: {status} ({} cases", report.law.name(), report.cases);
        match &report.first_failure {
            Some(first) => println!(", {} failed, first at {first})", report.failures),
            None => println!(")"),
        }
    }
    Ok(all_passed)
}

pub fn run(system_path: &Path, process_path: &Path, out: Option<&Path>) -> Verdict {
    let system = system_from(system_path)?;
    let process = match document(process_path)? {
        Document::Process(doc) => doc,
        other => return Err(wrong_kind(process_path, "process", other.kind())),
    };
    let (contexts, start) =
        load_process(&process, system.background()).map_err(|source| CliError::Document {
            path: process_path.to_path_buf(),
            source,
        })?;
    let trace = run_process(&system, &contexts, &start).map_err(CliError::input)?;
    let text = canonical_json(&trace_json(&system, &trace));
    match out {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(true)
}

/// Plain cover instance: vertex count and attachment strings over `1..=n`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: usize,
    #[serde(default)]
    m: Option<usize>,
    hyperedges: Vec<Vec<usize>>,
}

fn cover_instance(path: &Path, k: usize) -> Result<CoverInstance, CliError> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| {
        CliError::input(format!("{}: {e}", path.display()))
    })?;
    let instance = if value.get("format_version").is_some() {
        // a hypergraph background document is normalized into an instance
        match document(path)? {
            Document::Background(doc) => {
                let bg = load_background(&doc, "payload").map_err(|source| CliError::Document {
                    path: path.to_path_buf(),
                    source,
                })?;
                let Carrier::Hypergraph(carrier) = bg.carrier() else {
                    return Err(CliError::input(format!(
                        "{}: cover instances must be hypergraphs",
                        path.display()
                    )));
                };
                normalize_hypergraph(carrier, k).map_err(CliError::input)?
            }
            other => return Err(wrong_kind(path, "background", other.kind())),
        }
    } else {
        let file: InstanceFile = serde_json::from_value(value)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let m = file
            .m
            .unwrap_or_else(|| file.hyperedges.iter().map(Vec::len).max().unwrap_or(1));
        CoverInstance {
            m,
            n: file.n,
            k,
            hyperedges: file.hyperedges,
        }
    };
    instance.validate().map_err(CliError::input)?;
    Ok(instance)
}

pub fn cover(path: &Path, k: usize, parallel: bool) -> Verdict {
    let instance = cover_instance(path, k)?;
    let system = CoverSystem::new(instance.m, instance.n).map_err(CliError::input)?;
    let verdict = system
        .is_k_coverable(&instance, parallel)
        .map_err(CliError::input)?;
    print(&json!({
        "m": instance.m,
        "n": instance.n,
        "k": instance.k,
        "hyperedges": instance.hyperedges,
        "coverable": verdict.coverable,
        "witness": verdict.witness,
        "combinations_tried": verdict.combinations_tried,
    }));
    Ok(verdict.coverable)
}

fn strong_mode(spec: &str, seed: Option<u64>, cap: usize) -> Result<StrongMode, CliError> {
    if spec == "exhaustive" {
        return Ok(StrongMode::Exhaustive { cap });
    }
    let count = spec
        .strip_prefix("sample:")
        .and_then(|n| n.parse::<usize>().ok())
        .ok_or_else(|| CliError::input("--strong takes `exhaustive` or `sample:N`"))?;
    let seed = seed.ok_or_else(|| CliError::input("--strong sample:N requires --seed"))?;
    Ok(StrongMode::Sample { count, seed })
}

pub fn morphism(
    from: &Path,
    to: &Path,
    map: &Path,
    strong: Option<&str>,
    seed: Option<u64>,
) -> Verdict {
    let mode = strong
        .map(|spec| strong_mode(spec, seed, enum_cap()?))
        .transpose()?;
    let (source, source_system) = system_or_background(from)?;
    let (target, target_system) = system_or_background(to)?;
    let maps = match document(map)? {
        Document::Morphism(doc) => doc,
        other => return Err(wrong_kind(map, "morphism", other.kind())),
    };
    let f = load_morphism(&maps, source, target).map_err(|source| CliError::Document {
        path: map.to_path_buf(),
        source,
    })?;

    let mut report = serde_json::Map::new();
    let mono = f.check_mono();
    report.insert("mono".into(), json!(mono.is_ok()));
    if let Err(err) = &mono {
        report.insert("not_injective".into(), json!(err.to_string()));
    }
    let mut verdict = mono.is_ok();
    match (source_system, target_system) {
        (Some(a), Some(b)) if verdict => {
            let morphism = is_rs_morphism(&f, &a, &b).map_err(CliError::input)?;
            report.insert("rs_morphism".into(), json!(morphism));
            verdict &= morphism;
            if let (Some(mode), true) = (mode, morphism) {
                let strong = is_strong(&f, &a, &b, mode).map_err(CliError::input)?;
                let witness = strong.counterexample.as_ref().map(|w| {
                    json!({
                        "state": a.background().to_raw(&w.state),
                        "mapped_result": b.background().to_raw(&w.mapped_result),
                        "target_result": b.background().to_raw(&w.target_result),
                    })
                });
                report.insert(
                    "strong".into(),
                    json!({
                        "strong": strong.strong,
                        "states_checked": strong.states_checked,
                        "counterexample": witness,
                    }),
                );
                verdict &= strong.strong;
            }
        }
        (Some(_), Some(_)) => {}
        _ if mode.is_some() => {
            return Err(CliError::input("--strong needs system documents on both sides"))
        }
        _ => {}
    }
    print(&Value::Object(report));
    Ok(verdict)
}

pub fn transitions(system_path: &Path, dot: Option<&Path>) -> Verdict {
    let system = system_from(system_path)?;
    let graph = build_transition_graph(&system, enum_cap()?).map_err(CliError::input)?;
    if let Some(path) = dot {
        write(path, &graph.to_dot(&system))?;
    }
    let bg = system.background();
    let cyclic: Vec<_> = graph.cyclic_states().into_iter().map(|s| bg.to_raw(s)).collect();
    print(&json!({
        "background": bg.id(),
        "states": graph.successors.len(),
        "cyclic_states": cyclic,
    }));
    Ok(true)
}

pub fn validate(files: &[PathBuf]) -> Verdict {
    let mut invalid = 0;
    for path in files {
        match document(path) {
            Ok(doc) => println!("{}: ok ({})", path.display(), doc.kind()),
            Err(err) => {
                invalid += 1;
                eprintln!("{err}");
            }
        }
    }
    if invalid > 0 {
        return Err(CliError::input(format!(
            "{invalid} of {} documents invalid",
            files.len()
        )));
    }
    Ok(true)
}
