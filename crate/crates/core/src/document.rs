//! JSON documents: a versioned envelope around backgrounds, reaction
//! systems, morphisms, processes and schemes, plus canonical emission.
//!
//! ```json
//! { "format_version": 1, "kind": "background",
//!   "payload": { "id": "ab", "carrier": { "kind": "set", "elements": ["a", "b"] } } }
//! ```

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::background::Background;
use crate::cover::{build_cover_background, build_cover_system, build_ch2, build_twin_sustain_system};
use crate::diagram::{ComponentMaps, Scheme};
use crate::element::RawSubobject;
use crate::morphism::BackgroundMorphism;
use crate::process::{check_context_independent, detect_cycle, CycleScan, ProcessTrace};
use crate::reaction::{Reaction, ReactionSystem};
use crate::subobject::Subobject;
use crate::universes::{Carrier, UniverseError};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported format version {0}")]
    VersionUnsupported(u64),
    #[error("expected a {expected} document, got {found}")]
    WrongKind {
        expected: DocumentKind,
        found: DocumentKind,
    },
}

impl DocumentError {
    fn schema(path: impl Into<String>, message: impl ToString) -> Self {
        DocumentError::Schema {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocumentKind {
    Background,
    System,
    Morphism,
    Process,
    Scheme,
}

impl std::fmt::Display for DocumentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DocumentKind::Background => "background",
            DocumentKind::System => "system",
            DocumentKind::Morphism => "morphism",
            DocumentKind::Process => "process",
            DocumentKind::Scheme => "scheme",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    format_version: u64,
    kind: DocumentKind,
    payload: Value,
}

/// Parameters of a built-in family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Builtin {
    pub family: Family,
    pub m: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `B_{m,n}` as a background, `𝒜_{m,n}` as a system.
    Cover,
    /// `CH²_{m,n}`; only meaningful for backgrounds.
    Ch2,
    /// The twin-sustain system over `CH²_{m,n}`.
    TwinSustain,
}

/// Either `{id, carrier}` or `{builtin}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackgroundDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<Carrier>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<Builtin>,
}

/// `"-"` or an explicit pair `(i, i0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InhibitorDoc {
    Pair { i: RawSubobject, i0: RawSubobject },
    None(String),
}

impl Default for InhibitorDoc {
    fn default() -> Self {
        InhibitorDoc::None("-".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReactionDoc {
    pub id: String,
    pub reactant: RawSubobject,
    #[serde(default)]
    pub inhibitor: InhibitorDoc,
    pub product: RawSubobject,
}

/// Either `{background, reactions}` or `{builtin}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub background: Option<BackgroundDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reactions: Option<Vec<ReactionDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<Builtin>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextsDoc {
    List(Vec<RawSubobject>),
    /// `n` steps with empty contexts.
    ConstantEmpty(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessDoc {
    pub start: RawSubobject,
    pub contexts: ContextsDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub maps: ComponentMaps,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Background(BackgroundDoc),
    System(SystemDoc),
    Morphism(MorphismDoc),
    Process(ProcessDoc),
    Scheme(Scheme),
}

impl Document {
    pub fn kind(&self) -> DocumentKind {
        match self {
            Document::Background(_) => DocumentKind::Background,
            Document::System(_) => DocumentKind::System,
            Document::Morphism(_) => DocumentKind::Morphism,
            Document::Process(_) => DocumentKind::Process,
            Document::Scheme(_) => DocumentKind::Scheme,
        }
    }
}

fn from_value<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T, DocumentError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." {
            prefix.to_string()
        } else {
            format!("{prefix}.{path}")
        };
        DocumentError::schema(path, e.into_inner())
    })
}

/// Parses and validates a document. Payloads that name structure (carriers,
/// reactions) are fully checked by building them.
pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    let value: Value = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let version = value.get("format_version").and_then(Value::as_u64);
    if let Some(v) = version {
        if v != FORMAT_VERSION {
            return Err(DocumentError::VersionUnsupported(v));
        }
    }
    let envelope: Envelope = from_value(value, "$")?;
    let payload = envelope.payload;
    let document = match envelope.kind {
        DocumentKind::Background => {
            let doc: BackgroundDoc = from_value(payload, "payload")?;
            load_background(&doc, "payload")?;
            Document::Background(doc)
        }
        DocumentKind::System => {
            let doc: SystemDoc = from_value(payload, "payload")?;
            load_system(&doc)?;
            Document::System(doc)
        }
        DocumentKind::Morphism => Document::Morphism(from_value(payload, "payload")?),
        DocumentKind::Process => Document::Process(from_value(payload, "payload")?),
        DocumentKind::Scheme => Document::Scheme(from_value(payload, "payload")?),
    };
    Ok(document)
}

/// Parses a document and requires it to be of `kind`.
pub fn parse_expecting(text: &str, kind: DocumentKind) -> Result<Document, DocumentError> {
    let document = parse_document(text)?;
    if document.kind() != kind {
        return Err(DocumentError::WrongKind {
            expected: kind,
            found: document.kind(),
        });
    }
    Ok(document)
}

/// Path of the first dangling reference or unknown label in `carrier`.
fn locate(carrier: &Carrier) -> Option<String> {
    match carrier {
        Carrier::Graph(g) => {
            let vertices: BTreeSet<&String> = g.vertices.iter().collect();
            let alphabet: BTreeSet<&String> = g.alphabet.iter().collect();
            g.edges.iter().enumerate().find_map(|(i, e)| {
                if !vertices.contains(&e.source) {
                    Some(format!("edges[{i}].source"))
                } else if !vertices.contains(&e.target) {
                    Some(format!("edges[{i}].target"))
                } else if !alphabet.contains(&e.label) {
                    Some(format!("edges[{i}].label"))
                } else {
                    None
                }
            })
        }
        Carrier::Hypergraph(h) => {
            let vertices: BTreeSet<&String> = h.vertices.iter().collect();
            let alphabet: BTreeSet<&String> = h.alphabet.iter().collect();
            h.hyperedges.iter().enumerate().find_map(|(i, e)| {
                if let Some(j) = e.attachment.iter().position(|v| !vertices.contains(v)) {
                    Some(format!("hyperedges[{i}].attachment[{j}]"))
                } else if !alphabet.contains(&e.label) {
                    Some(format!("hyperedges[{i}].label"))
                } else {
                    None
                }
            })
        }
        Carrier::Poset(p) => {
            let elements: BTreeSet<&String> = p.elements.iter().collect();
            p.relation
                .iter()
                .position(|(a, b)| !elements.contains(a) || !elements.contains(b))
                .map(|i| format!("relation[{i}]"))
        }
        Carrier::Set(_) | Carrier::Diagram(_) => None,
    }
}

fn universe_error(err: UniverseError, carrier: &Carrier, base: &str) -> DocumentError {
    let path = match &err {
        UniverseError::DanglingReference { .. } | UniverseError::UnknownLabel { .. } => locate(carrier)
            .map(|p| format!("{base}.carrier.{p}"))
            .unwrap_or_else(|| format!("{base}.carrier")),
        _ => format!("{base}.carrier"),
    };
    DocumentError::schema(path, err)
}

fn builtin_error(err: impl ToString, base: &str) -> DocumentError {
    DocumentError::schema(format!("{base}.builtin"), err)
}

pub fn load_background(doc: &BackgroundDoc, base: &str) -> Result<Background, DocumentError> {
    match (&doc.carrier, &doc.builtin) {
        (Some(carrier), None) => {
            let id = doc
                .id
                .clone()
                .ok_or_else(|| DocumentError::schema(format!("{base}.id"), "missing field `id`"))?;
            Background::new(id, carrier.clone()).map_err(|e| universe_error(e, carrier, base))
        }
        (None, Some(builtin)) => {
            let mut bg = match builtin.family {
                Family::Cover => build_cover_background(builtin.m, builtin.n)
                    .map_err(|e| builtin_error(e, base))?,
                Family::Ch2 => {
                    let carrier = build_ch2(builtin.m, builtin.n).map_err(|e| builtin_error(e, base))?;
                    Background::new(
                        format!("CH2({},{})", builtin.m, builtin.n),
                        Carrier::Hypergraph(carrier),
                    )
                    .map_err(|e| builtin_error(e, base))?
                }
                Family::TwinSustain => {
                    return Err(builtin_error("twin-sustain names a system, not a background", base))
                }
            };
            if let Some(id) = &doc.id {
                bg = Background::new(id.clone(), bg.carrier().clone())
                    .map_err(|e| builtin_error(e, base))?;
            }
            Ok(bg)
        }
        _ => Err(DocumentError::schema(
            base,
            "exactly one of `carrier` and `builtin` is required",
        )),
    }
}

fn raw_subobject(
    bg: &Background,
    raw: &RawSubobject,
    path: String,
) -> Result<Subobject, DocumentError> {
    bg.validate_subobject(raw)
        .map_err(|e| DocumentError::schema(path, e))
}

pub fn load_system(doc: &SystemDoc) -> Result<ReactionSystem, DocumentError> {
    match (&doc.background, &doc.reactions, &doc.builtin) {
        (Some(background), Some(reactions), None) => {
            let bg = Arc::new(load_background(background, "payload.background")?);
            let mut built = Vec::with_capacity(reactions.len());
            for (i, r) in reactions.iter().enumerate() {
                let at = |field: &str| format!("payload.reactions[{i}].{field}");
                let reactant = raw_subobject(&bg, &r.reactant, at("reactant"))?;
                let product = raw_subobject(&bg, &r.product, at("product"))?;
                let reaction = match &r.inhibitor {
                    InhibitorDoc::None(dash) if dash == "-" => {
                        Reaction::uninhibited(r.id.clone(), reactant, product)
                    }
                    InhibitorDoc::None(other) => {
                        return Err(DocumentError::schema(
                            at("inhibitor"),
                            format!("expected \"-\" or {{i, i0}}, got {other:?}"),
                        ))
                    }
                    InhibitorDoc::Pair { i, i0 } => Reaction::new(
                        r.id.clone(),
                        reactant,
                        raw_subobject(&bg, i, at("inhibitor.i"))?,
                        raw_subobject(&bg, i0, at("inhibitor.i0"))?,
                        product,
                    ),
                }
                .map_err(|e| DocumentError::schema(format!("payload.reactions[{i}]"), e))?;
                built.push(reaction);
            }
            ReactionSystem::new(bg, built)
                .map_err(|e| DocumentError::schema("payload.reactions", e))
        }
        (None, None, Some(builtin)) => match builtin.family {
            Family::Cover => build_cover_system(builtin.m, builtin.n),
            Family::TwinSustain => build_twin_sustain_system(builtin.m, builtin.n),
            Family::Ch2 => {
                return Err(builtin_error("ch2 names a background, not a system", "payload"))
            }
        }
        .map_err(|e| builtin_error(e, "payload")),
        _ => Err(DocumentError::schema(
            "payload",
            "either `background` with `reactions`, or `builtin` is required",
        )),
    }
}

/// Contexts and start of a process document, validated against `bg`.
pub fn load_process(
    doc: &ProcessDoc,
    bg: &Background,
) -> Result<(Vec<Subobject>, Subobject), DocumentError> {
    let start = raw_subobject(bg, &doc.start, "payload.start".into())?;
    let contexts = match &doc.contexts {
        ContextsDoc::List(list) => list
            .iter()
            .enumerate()
            .map(|(i, raw)| raw_subobject(bg, raw, format!("payload.contexts.list[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
        ContextsDoc::ConstantEmpty(steps) => vec![bg.empty_subobject(); steps + 1],
    };
    if contexts.len() < 2 {
        return Err(DocumentError::schema(
            "payload.contexts",
            "a process needs at least two contexts",
        ));
    }
    Ok((contexts, start))
}

pub fn load_morphism(
    doc: &MorphismDoc,
    source: Arc<Background>,
    target: Arc<Background>,
) -> Result<BackgroundMorphism, DocumentError> {
    BackgroundMorphism::new(source, target, &doc.maps)
        .map_err(|e| DocumentError::schema("payload.maps", e))
}

/// Wraps `payload` in an envelope and renders it with sorted keys.
pub fn emit_document(kind: DocumentKind, payload: impl Serialize) -> String {
    let value = json!({
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "payload": payload,
    });
    canonical_json(&value)
}

/// Pretty JSON with object keys in sorted order and a trailing newline.
pub fn canonical_json(value: &Value) -> String {
    // serde_json's map is ordered by key unless `preserve_order` is enabled
    let mut text = serde_json::to_string_pretty(value).expect("values always serialize");
    text.push('\n');
    text
}

/// The explicit form of a background, whatever it was built from.
pub fn background_document(bg: &Background) -> String {
    emit_document(
        DocumentKind::Background,
        BackgroundDoc {
            id: Some(bg.id().to_string()),
            carrier: Some(bg.carrier().clone()),
            builtin: None,
        },
    )
}

/// JSON rendering of a trace: contexts, results and states as raw
/// subobjects, enabled reaction ids, context independence and the cycle
/// decomposition of the state sequence.
pub fn trace_json(system: &ReactionSystem, trace: &ProcessTrace) -> Value {
    let bg = system.background();
    let raw = |list: &[Subobject]| -> Vec<RawSubobject> { list.iter().map(|s| bg.to_raw(s)).collect() };
    let states = trace.states(system).expect("trace belongs to the system");
    let cycle = match detect_cycle(&states) {
        CycleScan::RepetitionFree => Value::Null,
        CycleScan::Cycle(info) => json!({
            "first": info.first,
            "second": info.second,
            "repetitions": info.repetitions,
            "residual": info.residual,
            "tail": info.tail,
        }),
    };
    json!({
        "background": bg.id(),
        "contexts": raw(trace.contexts()),
        "results": raw(trace.results()),
        "states": raw(&states),
        "enabled": trace.enabled(),
        "context_independent": check_context_independent(trace),
        "cycle": cycle,
    })
}
