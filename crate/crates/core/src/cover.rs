//! The k-vertex-coverability reaction systems over hypergraphs, the
//! twin-sustain system, and a direct combinatorial cover oracle.
//!
//! Element keys: vertices are `"1".."n"`, hyperedges `"(1.2.3,*)"` and
//! `"(1.2.3,+)"`, flags `"flag(j)"`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::background::Background;
use crate::element::ElementId;
use crate::process::{run_process, ProcessError, ProcessTrace};
use crate::reaction::{Reaction, ReactionError, ReactionSystem};
use crate::subobject::{Subobject, SubobjectError};
use crate::universes::{Carrier, Hyperedge, HypergraphCarrier, UniverseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("bad combination {combo:?}: {reason}")]
    BadCombination { combo: Vec<usize>, reason: String },
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error(transparent)]
    Subobject(#[from] SubobjectError),
    #[error(transparent)]
    Reaction(#[from] ReactionError),
    #[error(transparent)]
    Process(#[from] ProcessError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Twin {
    Star,
    Plus,
}

impl Twin {
    pub fn label(self) -> &'static str {
        match self {
            Twin::Star => "*",
            Twin::Plus => "+",
        }
    }

    pub fn other(self) -> Twin {
        match self {
            Twin::Star => Twin::Plus,
            Twin::Plus => Twin::Star,
        }
    }
}

impl fmt::Display for Twin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn vertex_key(v: usize) -> String {
    v.to_string()
}

pub fn hyperedge_key(u: &[usize], twin: Twin) -> String {
    format!("({},{})", u.iter().join("."), twin.label())
}

pub fn flag_key(v: usize) -> String {
    format!("flag({v})")
}

fn vertex_id(v: usize) -> ElementId {
    ElementId::new(HypergraphCarrier::VERTICES, vertex_key(v))
}

fn edge_id(key: String) -> ElementId {
    ElementId::new(HypergraphCarrier::EDGES, key)
}

fn check_parameters(m: usize, n: usize) -> Result<(), CoverError> {
    if m == 0 || m > n {
        return Err(CoverError::BadParameters(format!(
            "need 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    Ok(())
}

/// All strings over `[n]` of length `1..=m`, shortest first, each length in
/// lexicographic order.
pub fn strings(m: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=m).flat_map(move |l| {
        std::iter::repeat_n(1..=n, l).multi_cartesian_product()
    })
}

/// The complete hypergraph with twins on `[n]` with attachment strings of
/// length `1..=m`.
pub fn build_ch2(m: usize, n: usize) -> Result<HypergraphCarrier, CoverError> {
    check_parameters(m, n)?;
    let mut hyperedges = Vec::new();
    for u in strings(m, n) {
        let attachment: Vec<String> = u.iter().map(|&v| vertex_key(v)).collect();
        for twin in [Twin::Star, Twin::Plus] {
            hyperedges.push(Hyperedge {
                id: hyperedge_key(&u, twin),
                attachment: attachment.clone(),
                label: twin.label().into(),
            });
        }
    }
    Ok(HypergraphCarrier {
        alphabet: vec!["*".into(), "+".into()],
        vertices: (1..=n).map(vertex_key).collect(),
        hyperedges,
    })
}

/// `B_{m,n}`: `CH²_{m,n}` with a `*`-flag at every vertex.
pub fn build_cover_background(m: usize, n: usize) -> Result<Background, CoverError> {
    let mut carrier = build_ch2(m, n)?;
    for v in 1..=n {
        carrier.hyperedges.push(Hyperedge {
            id: flag_key(v),
            attachment: vec![vertex_key(v)],
            label: "*".into(),
        });
    }
    Ok(Background::new(
        format!("B({m},{n})"),
        Carrier::Hypergraph(carrier),
    )?)
}

/// `e•`: the hyperedge with its attachment vertices.
fn induced(background: &Background, u: &[usize], key: String) -> Result<Subobject, SubobjectError> {
    background.subobject_from_ids(
        u.iter()
            .map(|&v| vertex_id(v))
            .chain(std::iter::once(edge_id(key))),
    )
}

/// `A_{m,n}` over `B_{m,n}`.
pub fn build_cover_system(m: usize, n: usize) -> Result<ReactionSystem, CoverError> {
    let background = Arc::new(build_cover_background(m, n)?);
    let bg = background.as_ref();
    let flag = |v: usize| induced(bg, &[v], flag_key(v));
    let mut reactions = Vec::new();
    for v in 1..=n {
        let vertex = bg.subobject_from_ids([vertex_id(v)])?;
        reactions.push(Reaction::uninhibited(
            format!("keep {}", vertex_key(v)),
            vertex.clone(),
            vertex,
        )?);
    }
    for u in strings(m, n) {
        for twin in [Twin::Star, Twin::Plus] {
            let key = hyperedge_key(&u, twin);
            let e = induced(bg, &u, key.clone())?;
            reactions.push(Reaction::uninhibited(format!("keep {key}"), e.clone(), e)?);
        }
    }
    for v in 1..=n {
        let f = flag(v)?;
        reactions.push(Reaction::uninhibited(
            format!("keep {}", flag_key(v)),
            f.clone(),
            f,
        )?);
    }
    for u in strings(m, n) {
        let star = induced(bg, &u, hyperedge_key(&u, Twin::Star))?;
        let plus = induced(bg, &u, hyperedge_key(&u, Twin::Plus))?;
        let distinct: BTreeSet<usize> = u.iter().copied().collect();
        for v in distinct {
            reactions.push(Reaction::uninhibited(
                format!("twin {} at {v}", hyperedge_key(&u, Twin::Star)),
                bg.union(&star, &flag(v)?)?,
                plus.clone(),
            )?);
        }
    }
    Ok(ReactionSystem::new(background, reactions)?)
}

/// Reactions `a(e) = (e•, (ê•, discrete attachment vertices), e•)` over
/// `CH²_{m,n}`: every `*`-hyperedge persists exactly while its twin is
/// absent.
pub fn build_twin_sustain_system(m: usize, n: usize) -> Result<ReactionSystem, CoverError> {
    let background = Arc::new(Background::new(
        format!("CH2({m},{n})"),
        Carrier::Hypergraph(build_ch2(m, n)?),
    )?);
    let bg = background.as_ref();
    let mut reactions = Vec::new();
    for u in strings(m, n) {
        let key = hyperedge_key(&u, Twin::Star);
        let e = induced(bg, &u, key.clone())?;
        let twin = induced(bg, &u, hyperedge_key(&u, Twin::Plus))?;
        let vertices = bg.subobject_from_ids(u.iter().map(|&v| vertex_id(v)))?;
        reactions.push(Reaction::new(format!("a{key}"), e.clone(), twin, vertices, e)?);
    }
    Ok(ReactionSystem::new(background, reactions)?)
}

/// A hypergraph with `*`-labeled hyperedges over `[n]` and a target cover
/// size `k`. Each hyperedge is given by its attachment string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverInstance {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub hyperedges: Vec<Vec<usize>>,
}

impl CoverInstance {
    pub fn validate(&self) -> Result<(), CoverError> {
        check_parameters(self.m, self.n)?;
        if self.k > self.n {
            return Err(CoverError::BadParameters(format!(
                "k = {} exceeds n = {}",
                self.k, self.n
            )));
        }
        for u in &self.hyperedges {
            if u.is_empty() || u.len() > self.m {
                return Err(CoverError::BadParameters(format!(
                    "attachment {u:?} must have length 1..={}",
                    self.m
                )));
            }
            if let Some(v) = u.iter().find(|&&v| v == 0 || v > self.n) {
                return Err(CoverError::BadParameters(format!(
                    "attachment {u:?} names vertex {v} outside 1..={}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    pub fn with_k(&self, k: usize) -> CoverInstance {
        CoverInstance { k, ..self.clone() }
    }
}

/// Normalizes a labeled hypergraph into a cover instance: vertices are
/// renumbered densely in carrier order, labels are dropped, repeated
/// attachment vertices are collapsed and parallel hyperedges merged.
pub fn normalize_hypergraph(
    carrier: &HypergraphCarrier,
    k: usize,
) -> Result<CoverInstance, CoverError> {
    let number = |v: &String| {
        carrier
            .vertices
            .iter()
            .position(|w| w == v)
            .map(|i| i + 1)
            .ok_or_else(|| CoverError::BadParameters(format!("unknown vertex {v}")))
    };
    let mut hyperedges: Vec<Vec<usize>> = Vec::new();
    for edge in &carrier.hyperedges {
        if edge.attachment.is_empty() {
            return Err(CoverError::BadParameters(format!(
                "hyperedge {} has no attachment vertex",
                edge.id
            )));
        }
        let mut u = Vec::new();
        for v in &edge.attachment {
            let i = number(v)?;
            if !u.contains(&i) {
                u.push(i);
            }
        }
        if !hyperedges.contains(&u) {
            hyperedges.push(u);
        }
    }
    let n = carrier.vertices.len();
    let m = hyperedges.iter().map(Vec::len).max().unwrap_or(1);
    let instance = CoverInstance {
        m,
        n,
        k,
        hyperedges,
    };
    instance.validate()?;
    Ok(instance)
}

/// Direct check: some `k`-subset of `[n]` meets every hyperedge.
pub fn brute_force_cover(inst: &CoverInstance) -> bool {
    (1..=inst.n).combinations(inst.k).any(|subset| {
        inst.hyperedges
            .iter()
            .all(|u| u.iter().any(|v| subset.contains(v)))
    })
}

/// One run of the cover process and its verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverRun {
    pub combo: Vec<usize>,
    pub trace: ProcessTrace,
    pub verdict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverVerdict {
    pub coverable: bool,
    pub witness: Option<Vec<usize>>,
    pub combinations_tried: usize,
}

/// `𝒜_{m,n}` together with the lookups needed to drive cover processes.
#[derive(Debug, Clone)]
pub struct CoverSystem {
    m: usize,
    n: usize,
    system: ReactionSystem,
}

impl CoverSystem {
    pub fn new(m: usize, n: usize) -> Result<Self, CoverError> {
        Ok(CoverSystem {
            m,
            n,
            system: build_cover_system(m, n)?,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn system(&self) -> &ReactionSystem {
        &self.system
    }

    pub fn background(&self) -> &Arc<Background> {
        self.system.background()
    }

    /// `v•` with its flag: the vertex and the `*`-flag at it.
    pub fn flag(&self, v: usize) -> Result<Subobject, CoverError> {
        Ok(induced(self.background(), &[v], flag_key(v))?)
    }

    /// `(u, twin)•`.
    pub fn hyperedge(&self, u: &[usize], twin: Twin) -> Result<Subobject, CoverError> {
        Ok(induced(self.background(), u, hyperedge_key(u, twin))?)
    }

    /// `H` as a state of `B_{m,n}`.
    pub fn instance_state(&self, inst: &CoverInstance) -> Result<Subobject, CoverError> {
        self.check_instance(inst)?;
        let edges = inst
            .hyperedges
            .iter()
            .map(|u| self.hyperedge(u, Twin::Star))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.background().union_all(&edges)?)
    }

    fn check_instance(&self, inst: &CoverInstance) -> Result<(), CoverError> {
        inst.validate()?;
        if inst.m > self.m || inst.n > self.n {
            return Err(CoverError::BadParameters(format!(
                "instance over m = {}, n = {} does not fit B({},{})",
                inst.m, inst.n, self.m, self.n
            )));
        }
        Ok(())
    }

    fn check_combo(&self, inst: &CoverInstance, combo: &[usize]) -> Result<(), CoverError> {
        let bad = |reason: &str| CoverError::BadCombination {
            combo: combo.to_vec(),
            reason: reason.into(),
        };
        if combo.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("not strictly increasing"));
        }
        if combo.iter().any(|&v| v == 0 || v > inst.n) {
            return Err(bad("vertex outside the instance"));
        }
        Ok(())
    }

    fn verdict(&self, inst: &CoverInstance, final_result: &Subobject) -> bool {
        let bg = self.background();
        inst.hyperedges
            .iter()
            .all(|u| bg.contains(final_result, &edge_id(hyperedge_key(u, Twin::Plus))))
    }

    fn run_with(
        &self,
        inst: &CoverInstance,
        combo: &[usize],
        mut contexts: Vec<Subobject>,
    ) -> Result<CoverRun, CoverError> {
        let empty = self.background().empty_subobject();
        contexts.push(empty.clone());
        // a single context cannot form a process; pad with the empty context
        if contexts.len() < 2 {
            contexts.push(empty);
        }
        let start = self.instance_state(inst)?;
        let trace = run_process(&self.system, &contexts, &start)?;
        let verdict = self.verdict(inst, trace.final_result());
        Ok(CoverRun {
            combo: combo.to_vec(),
            trace,
            verdict,
        })
    }

    /// `π(H, i1⋯ik)` with contexts `flag(i1), …, flag(ik), ∅`.
    pub fn process(&self, inst: &CoverInstance, combo: &[usize]) -> Result<CoverRun, CoverError> {
        self.check_combo(inst, combo)?;
        let contexts = combo
            .iter()
            .map(|&v| self.flag(v))
            .collect::<Result<Vec<_>, _>>()?;
        self.run_with(inst, combo, contexts)
    }

    /// One-step variant with contexts `flag(i1) ∪ … ∪ flag(ik), ∅`.
    pub fn process_parallel(
        &self,
        inst: &CoverInstance,
        combo: &[usize],
    ) -> Result<CoverRun, CoverError> {
        self.check_combo(inst, combo)?;
        let flags = combo
            .iter()
            .map(|&v| self.flag(v))
            .collect::<Result<Vec<_>, _>>()?;
        let union = self.background().union_all(&flags)?;
        self.run_with(inst, combo, vec![union])
    }

    /// Runs the cover process for every `k`-combination of `[n]` in
    /// lexicographic order and reports the first covering one. With
    /// `parallel` the processes run on the rayon pool; the reported witness
    /// is the same.
    pub fn is_k_coverable(
        &self,
        inst: &CoverInstance,
        parallel: bool,
    ) -> Result<CoverVerdict, CoverError> {
        self.check_instance(inst)?;
        let combos: Vec<Vec<usize>> = (1..=inst.n).combinations(inst.k).collect();
        let position = if parallel {
            let verdicts = combos
                .par_iter()
                .map(|c| self.process(inst, c).map(|run| run.verdict))
                .collect::<Result<Vec<_>, _>>()?;
            verdicts.iter().position(|&v| v)
        } else {
            let mut found = None;
            for (i, c) in combos.iter().enumerate() {
                if self.process(inst, c)?.verdict {
                    found = Some(i);
                    break;
                }
            }
            found
        };
        Ok(CoverVerdict {
            coverable: position.is_some(),
            witness: position.map(|i| combos[i].clone()),
            combinations_tried: position.map_or(combos.len(), |i| i + 1),
        })
    }
}
