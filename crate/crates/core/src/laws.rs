//! Random backgrounds for every universe kind and a seeded suite of the
//! lattice laws that every background must satisfy.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::background::Background;
use crate::diagram::{instantiate_diagram_universe, registry_scheme, DiagramError, REGISTRY};
use crate::subobject::{Subobject, SubobjectError};
use crate::universes::{
    Carrier, Edge, GraphCarrier, Hyperedge, HypergraphCarrier, Kind, PosetCarrier, SetCarrier,
    UniverseError,
};

const ALPHABET: [&str; 2] = ["a", "b"];

/// Fixed sets handed to registry schemes that need them.
pub fn default_fixed_sets() -> BTreeMap<String, Vec<String>> {
    let sigma: Vec<String> = ALPHABET.iter().map(|s| s.to_string()).collect();
    ["Sigma", "SigmaE", "SigmaV"]
        .into_iter()
        .map(|name| (name.to_string(), sigma.clone()))
        .collect()
}

fn keys(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

fn label<R: Rng + ?Sized>(rng: &mut R) -> String {
    ALPHABET.choose(rng).expect("non-empty").to_string()
}

pub fn random_set<R: Rng + ?Sized>(rng: &mut R, max: usize) -> SetCarrier {
    SetCarrier {
        elements: keys("x", rng.gen_range(0..=max)),
    }
}

pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, max: usize) -> GraphCarrier {
    let vertices = keys("v", rng.gen_range(0..=max));
    let edge_count = if vertices.is_empty() {
        0
    } else {
        rng.gen_range(0..=max)
    };
    let edges = (0..edge_count)
        .map(|i| Edge {
            id: format!("e{i}"),
            source: vertices.choose(rng).expect("non-empty").clone(),
            target: vertices.choose(rng).expect("non-empty").clone(),
            label: label(rng),
        })
        .collect();
    GraphCarrier {
        alphabet: ALPHABET.iter().map(|s| s.to_string()).collect(),
        vertices,
        edges,
    }
}

pub fn random_hypergraph<R: Rng + ?Sized>(rng: &mut R, max: usize) -> HypergraphCarrier {
    let vertices = keys("v", rng.gen_range(0..=max));
    let edge_count = rng.gen_range(0..=max);
    let hyperedges = (0..edge_count)
        .map(|i| {
            let arity = if vertices.is_empty() {
                0
            } else {
                rng.gen_range(0..=3)
            };
            Hyperedge {
                id: format!("h{i}"),
                attachment: (0..arity)
                    .map(|_| vertices.choose(rng).expect("non-empty").clone())
                    .collect(),
                label: label(rng),
            }
        })
        .collect();
    HypergraphCarrier {
        alphabet: ALPHABET.iter().map(|s| s.to_string()).collect(),
        vertices,
        hyperedges,
    }
}

/// Random partial order: random pairs `xi < xj` for `i < j`, closed
/// reflexively and transitively.
pub fn random_poset<R: Rng + ?Sized>(rng: &mut R, max: usize) -> PosetCarrier {
    let n = rng.gen_range(0..=max);
    let elements = keys("p", n);
    let mut below = vec![vec![false; n]; n];
    for (i, row) in below.iter_mut().enumerate() {
        row[i] = true;
        for cell in row.iter_mut().skip(i + 1) {
            *cell = rng.gen_bool(0.4);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if below[i][k] && below[k][j] {
                    below[i][j] = true;
                }
            }
        }
    }
    let mut relation = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if below[i][j] {
                relation.push((elements[i].clone(), elements[j].clone()));
            }
        }
    }
    PosetCarrier { elements, relation }
}

/// Random diagram over a registry scheme: free components get up to `max`
/// elements and arrows get random total maps.
pub fn random_diagram<R: Rng + ?Sized>(
    rng: &mut R,
    scheme_name: &str,
    id: &str,
    max: usize,
) -> Result<Background, UniverseError> {
    let scheme = registry_scheme(scheme_name, &default_fixed_sets())?;
    let mut sets: BTreeMap<String, Vec<String>> = scheme
        .free_components()
        .map(|c| {
            let prefix = c.name.to_lowercase();
            (c.name.clone(), keys(&prefix, rng.gen_range(0..=max)))
        })
        .collect();
    // a map out of a non-empty set needs a non-empty target
    for arrow in &scheme.arrows {
        let source_empty = sets[&arrow.source].is_empty();
        if let Some(target) = sets.get_mut(&arrow.target) {
            if !source_empty && target.is_empty() {
                *target = keys(&arrow.target.to_lowercase(), 1);
            }
        }
    }
    let mut maps = BTreeMap::new();
    for arrow in &scheme.arrows {
        let target = match &scheme
            .component(&arrow.target)
            .ok_or_else(|| DiagramError::SchemeMismatch(arrow.target.clone()))?
            .fixed
        {
            Some(fixed) => fixed.clone(),
            None => sets[&arrow.target].clone(),
        };
        let map: BTreeMap<String, String> = sets[&arrow.source]
            .iter()
            .map(|x| (x.clone(), target.choose(rng).expect("non-empty").clone()))
            .collect();
        maps.insert(arrow.name.clone(), map);
    }
    instantiate_diagram_universe(id, scheme, sets, maps)
}

/// Random background of `kind`; diagrams use a random registry scheme.
pub fn random_background<R: Rng + ?Sized>(
    rng: &mut R,
    kind: Kind,
    id: &str,
    max: usize,
) -> Result<Background, UniverseError> {
    let carrier = match kind {
        Kind::Set => Carrier::Set(random_set(rng, max)),
        Kind::Graph => Carrier::Graph(random_graph(rng, max)),
        Kind::Hypergraph => Carrier::Hypergraph(random_hypergraph(rng, max)),
        Kind::Poset => Carrier::Poset(random_poset(rng, max)),
        Kind::Diagram => {
            let scheme = REGISTRY.choose(rng).expect("non-empty");
            return random_diagram(rng, scheme, id, max.min(3));
        }
    };
    Background::new(id, carrier)
}

/// What a law-suite run draws its backgrounds from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawTarget {
    Kind(Kind),
    Scheme(String),
}

impl fmt::Display for LawTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawTarget::Kind(kind) => write!(f, "{kind}"),
            LawTarget::Scheme(name) => write!(f, "diagram:{name}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    /// `p0 ⊆ p` implies `p ∩ p0 = p0` and `p ∪ p0 = p`.
    Absorption,
    /// `p ∩ ∅ = ∅` and `p ∪ ∅ = p`.
    EmptyNeutrality,
    /// `union(S ∪ {∅}) = union(S)`.
    UnionWithEmpty,
    /// `S0 ⊆ S` implies `union(S0) ⊆ union(S)`.
    Monotonicity,
    Commutativity,
    Associativity,
    Idempotence,
    /// Operation results are valid subobjects and re-validate to themselves.
    Canonicity,
}

impl Law {
    pub const ALL: [Law; 8] = [
        Law::Absorption,
        Law::EmptyNeutrality,
        Law::UnionWithEmpty,
        Law::Monotonicity,
        Law::Commutativity,
        Law::Associativity,
        Law::Idempotence,
        Law::Canonicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Absorption => "absorption",
            Law::EmptyNeutrality => "empty-neutrality",
            Law::UnionWithEmpty => "union-with-empty",
            Law::Monotonicity => "monotonicity",
            Law::Commutativity => "commutativity",
            Law::Associativity => "associativity",
            Law::Idempotence => "idempotence",
            Law::Canonicity => "canonicity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: Law,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Checks one law on one background with subobjects drawn from `rng`.
pub fn check_law<R: Rng + ?Sized>(
    law: Law,
    bg: &Background,
    rng: &mut R,
) -> Result<bool, SubobjectError> {
    let empty = bg.empty_subobject();
    let p = bg.sample_subobject(rng);
    let q = bg.sample_subobject(rng);
    let r = bg.sample_subobject(rng);
    Ok(match law {
        Law::Absorption => {
            let p0 = p.intersect(&q)?;
            p0.is_included_in(&p)? && p.intersect(&p0)? == p0 && bg.union(&p, &p0)? == p
        }
        Law::EmptyNeutrality => {
            p.intersect(&empty)? == empty
                && bg.union(&p, &empty)? == p
                && empty.is_included_in(&p)?
        }
        Law::UnionWithEmpty => {
            let family = [p.clone(), q.clone(), r.clone()];
            let with_empty = [p, q, r, empty.clone()];
            bg.union_all(&family)? == bg.union_all(&with_empty)?
                && bg.union_all(std::iter::empty())? == empty
                && bg.union_all([&family[0]])? == family[0]
        }
        Law::Monotonicity => {
            let family: Vec<Subobject> = (0..rng.gen_range(0..5))
                .map(|_| bg.sample_subobject(rng))
                .collect();
            let sub: Vec<&Subobject> = family.iter().filter(|_| rng.gen_bool(0.5)).collect();
            bg.union_all(sub)?.is_included_in(&bg.union_all(&family)?)?
        }
        Law::Commutativity => {
            p.intersect(&q)? == q.intersect(&p)? && bg.union(&p, &q)? == bg.union(&q, &p)?
        }
        Law::Associativity => {
            p.intersect(&q)?.intersect(&r)? == p.intersect(&q.intersect(&r)?)?
                && bg.union(&bg.union(&p, &q)?, &r)? == bg.union(&p, &bg.union(&q, &r)?)?
        }
        Law::Idempotence => p.intersect(&p)? == p && bg.union(&p, &p)? == p,
        Law::Canonicity => {
            let meet = p.intersect(&q)?;
            let join = bg.union(&p, &q)?;
            let canonical = [&p, &meet, &join].into_iter().all(|s| {
                bg.check_subobject(s).is_ok()
                    && bg.validate_subobject(&bg.to_raw(s)).as_ref() == Ok(s)
            });
            canonical
        }
    })
}

/// Runs every law on `cases` fresh random backgrounds of `target`, all drawn
/// from one generator seeded with `seed`.
pub fn run_law_suite(
    target: &LawTarget,
    cases: usize,
    seed: u64,
) -> Result<Vec<LawReport>, UniverseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports: Vec<LawReport> = Law::ALL
        .iter()
        .map(|&law| LawReport {
            law,
            cases: 0,
            failures: 0,
            first_failure: None,
        })
        .collect();
    for case in 0..cases {
        let id = format!("{target}-{case}");
        let bg = match target {
            LawTarget::Kind(kind) => random_background(&mut rng, *kind, &id, 5)?,
            LawTarget::Scheme(name) => random_diagram(&mut rng, name, &id, 3)?,
        };
        for report in &mut reports {
            report.cases += 1;
            let ok = check_law(report.law, &bg, &mut rng).unwrap_or(false);
            if !ok {
                report.failures += 1;
                report
                    .first_failure
                    .get_or_insert_with(|| format!("case {case}, background {}", bg.id()));
            }
        }
    }
    Ok(reports)
}
