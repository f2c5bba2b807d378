//! Interactive processes, cycle analysis and transition graphs.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::hash::Hash;

use thiserror::Error;

use crate::background::DEFAULT_ENUM_CAP;
use crate::reaction::ReactionSystem;
use crate::subobject::{Subobject, SubobjectError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProcessError {
    #[error("a process needs at least two contexts, got {0}")]
    TooShort(usize),
    #[error(transparent)]
    Subobject(#[from] SubobjectError),
}

/// One run `π = (γ, δ)` of a reaction system. The state sequence is derived
/// on demand from the stored contexts and results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessTrace {
    contexts: Vec<Subobject>,
    results: Vec<Subobject>,
    enabled: Vec<Vec<String>>,
}

impl ProcessTrace {
    /// `γ = c_0, ..., c_n`.
    pub fn contexts(&self) -> &[Subobject] {
        &self.contexts
    }

    /// `δ = d_0, ..., d_n`; `d_0` is the start.
    pub fn results(&self) -> &[Subobject] {
        &self.results
    }

    /// Ids of the reactions enabled on `t_{i-1}`, for `i = 1..=n`.
    pub fn enabled(&self) -> &[Vec<String>] {
        &self.enabled
    }

    /// Number of steps `n`.
    pub fn steps(&self) -> usize {
        self.results.len() - 1
    }

    pub fn final_result(&self) -> &Subobject {
        self.results.last().expect("traces have at least two results")
    }

    /// `τ` with `t_i = c_i ∪ d_i`.
    pub fn states(&self, system: &ReactionSystem) -> Result<Vec<Subobject>, SubobjectError> {
        let background = system.background();
        self.contexts
            .iter()
            .zip(&self.results)
            .map(|(c, d)| background.union(c, d))
            .collect()
    }

    /// Replays the stored contexts from the stored start and compares.
    pub fn replays(&self, system: &ReactionSystem) -> Result<bool, ProcessError> {
        let again = run_process(system, &self.contexts, &self.results[0])?;
        Ok(&again == self)
    }
}

/// Runs `d_i = res_𝒜(c_{i-1} ∪ d_{i-1})` for `i = 1..n` where
/// `contexts.len() = n + 1`.
pub fn run_process(
    system: &ReactionSystem,
    contexts: &[Subobject],
    start: &Subobject,
) -> Result<ProcessTrace, ProcessError> {
    if contexts.len() < 2 {
        return Err(ProcessError::TooShort(contexts.len()));
    }
    let background = system.background();
    background.owns(start)?;
    for c in contexts {
        background.owns(c)?;
    }
    let mut results = Vec::with_capacity(contexts.len());
    let mut enabled = Vec::with_capacity(contexts.len() - 1);
    results.push(start.clone());
    for c in &contexts[..contexts.len() - 1] {
        let state = background.union(c, results.last().expect("non-empty"))?;
        enabled.push(
            system
                .enabled(&state)?
                .into_iter()
                .map(str::to_string)
                .collect(),
        );
        results.push(system.result(&state)?);
    }
    Ok(ProcessTrace {
        contexts: contexts.to_vec(),
        results,
        enabled,
    })
}

/// `c_i ⊆ d_i` for every `i`.
pub fn check_context_independent(trace: &ProcessTrace) -> bool {
    trace
        .contexts
        .iter()
        .zip(&trace.results)
        .all(|(c, d)| c.is_included_in(d).unwrap_or(false))
}

/// Decomposition of a sequence around its first repetition.
///
/// With `i0 < j0` the smallest repeating pair, the sequence reads
/// `t_0..t_{i0}`, then the cycle `t_{i0+1}..t_{j0}` repeated `repetitions`
/// times, then an initial section of the cycle of length `residual`, then a
/// `tail` that does not follow the cycle. The tail is empty for every state
/// sequence of a deterministic run (empty or context-independent contexts).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleInfo {
    pub first: usize,
    pub second: usize,
    pub repetitions: usize,
    pub residual: usize,
    pub tail: usize,
}

impl CycleInfo {
    pub fn prefix_len(&self) -> usize {
        self.first + 1
    }

    pub fn cycle_len(&self) -> usize {
        self.second - self.first
    }

    /// Rebuilds a sequence from its repetition-free head `t_0..t_{j0}` and
    /// the tail, using only the decomposition.
    pub fn reassemble<T: Clone>(&self, head: &[T], tail: &[T]) -> Vec<T> {
        let cycle = &head[self.first + 1..=self.second];
        let mut out = head[..=self.first].to_vec();
        for _ in 0..self.repetitions {
            out.extend_from_slice(cycle);
        }
        out.extend_from_slice(&cycle[..self.residual]);
        out.extend_from_slice(tail);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleScan {
    RepetitionFree,
    Cycle(CycleInfo),
}

/// Finds the smallest pair `i0 < j0` with `t_{i0} = t_{j0}` (smallest `j0`
/// first) and decomposes the sequence around it.
pub fn detect_cycle<T: Eq + Hash>(sequence: &[T]) -> CycleScan {
    let mut seen: HashMap<&T, usize> = HashMap::with_capacity(sequence.len());
    for (j, t) in sequence.iter().enumerate() {
        if let Some(&i) = seen.get(t) {
            let cycle = j - i;
            let mut periodic = 0;
            while j + 1 + periodic < sequence.len()
                && sequence[j + 1 + periodic] == sequence[i + 1 + periodic % cycle]
            {
                periodic += 1;
            }
            let run = cycle + periodic;
            return CycleScan::Cycle(CycleInfo {
                first: i,
                second: j,
                repetitions: run / cycle,
                residual: run % cycle,
                tail: sequence.len() - (i + 1 + run),
            });
        }
        seen.insert(t, j);
    }
    CycleScan::RepetitionFree
}

/// `res_𝒜` materialized over every state of the background (empty contexts).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionGraph {
    pub successors: BTreeMap<Subobject, Subobject>,
}

pub fn build_transition_graph(
    system: &ReactionSystem,
    cap: usize,
) -> Result<TransitionGraph, SubobjectError> {
    let states = system.background().enumerate(cap)?;
    let successors = states
        .into_iter()
        .map(|t| {
            let next = system.result(&t)?;
            Ok((t, next))
        })
        .collect::<Result<_, SubobjectError>>()?;
    Ok(TransitionGraph { successors })
}

pub fn build_transition_graph_default(
    system: &ReactionSystem,
) -> Result<TransitionGraph, SubobjectError> {
    build_transition_graph(system, DEFAULT_ENUM_CAP)
}

impl TransitionGraph {
    /// Follows successors from `start` for `steps` steps.
    pub fn trajectory(&self, start: &Subobject, steps: usize) -> Vec<Subobject> {
        let mut out = vec![start.clone()];
        for _ in 0..steps {
            let next = self.successors[out.last().expect("non-empty")].clone();
            out.push(next);
        }
        out
    }

    /// States lying on a cycle of the transition function.
    pub fn cyclic_states(&self) -> Vec<&Subobject> {
        self.successors
            .keys()
            .filter(|s| {
                let mut current = &self.successors[*s];
                for _ in 0..self.successors.len() {
                    if current == *s {
                        return true;
                    }
                    current = &self.successors[current];
                }
                false
            })
            .collect()
    }

    /// DOT export; nodes are numbered in canonical state order and labeled
    /// with their element lists.
    pub fn to_dot(&self, system: &ReactionSystem) -> String {
        let background = system.background();
        let index: BTreeMap<&Subobject, usize> = self
            .successors
            .keys()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", escape(background.id()));
        for (s, i) in &index {
            let label: Vec<String> = background.element_ids(s).map(|e| e.to_string()).collect();
            let _ = writeln!(out, "  s{i} [label=\"{{{}}}\"];", escape(&label.join(", ")));
        }
        for (s, next) in &self.successors {
            let _ = writeln!(out, "  s{} -> s{};", index[s], index[next]);
        }
        out.push_str("}\n");
        out
    }
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}
