//! Background morphisms, induced reaction systems and morphisms of reaction
//! systems.
//!
//! In every shipped universe a morphism is a family of element maps and a
//! monomorphism is one that is injective in every component. Images of
//! subobjects along a monomorphism are computed elementwise; images commute
//! with intersection and union, which is what makes enabledness and results
//! transfer along `f`.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::background::Background;
use crate::diagram::{check_diagram_morphism, ComponentMaps, DiagramError};
use crate::element::ElementId;
use crate::reaction::{Reaction, ReactionError, ReactionSystem};
use crate::subobject::{Subobject, SubobjectError};
use crate::universes::{
    pair_key, Carrier, GraphCarrier, HypergraphCarrier, Kind, PosetCarrier, SetCarrier,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("cannot map a {from} background into a {to} background")]
    KindMismatch { from: Kind, to: Kind },
    #[error("no map given for component {0}")]
    MissingMap(String),
    #[error("map of component {component} is undefined on {key}")]
    NotTotal { component: String, key: String },
    #[error("map of component {component} sends {key} to {image}, which is not in the target")]
    UnknownImage {
        component: String,
        key: String,
        image: String,
    },
    #[error("not structure preserving: {0}")]
    NotStructurePreserving(String),
    #[error("not injective: {first} and {second} both map to {image}")]
    NotInjective {
        first: Box<ElementId>,
        second: Box<ElementId>,
        image: Box<ElementId>,
    },
    #[error("a monomorphism is required")]
    MonoRequired,
    #[error("expected a subobject of {expected}, got one of {found}")]
    BackgroundMismatch { expected: String, found: String },
    #[error("f(A) is not included in A'")]
    NotAMorphism,
    #[error("f∘res(t) is not included in res'(f∘t) for t = {0}")]
    CorollaryViolated(String),
    #[error(transparent)]
    Subobject(#[from] SubobjectError),
    #[error(transparent)]
    Reaction(#[from] ReactionError),
}

/// A structure-preserving map between two backgrounds of the same kind,
/// compiled to an element-index map.
#[derive(Debug, Clone)]
pub struct BackgroundMorphism {
    source: Arc<Background>,
    target: Arc<Background>,
    map: Vec<usize>,
}

impl BackgroundMorphism {
    /// Validates totality and structure preservation of `maps`. Poset
    /// morphisms only need the `A` map; the relation map is derived.
    pub fn new(
        source: Arc<Background>,
        target: Arc<Background>,
        maps: &ComponentMaps,
    ) -> Result<Self, MorphismError> {
        let element_map = element_map(source.carrier(), target.carrier(), maps)?;
        let mut map = Vec::with_capacity(source.element_count());
        for e in source.elements() {
            let image = element_map.get(e).ok_or_else(|| MorphismError::NotTotal {
                component: e.component.clone(),
                key: e.key.clone(),
            })?;
            let index = target
                .index_of(image)
                .ok_or_else(|| MorphismError::UnknownImage {
                    component: e.component.clone(),
                    key: e.key.clone(),
                    image: image.key.clone(),
                })?;
            map.push(index);
        }
        Ok(BackgroundMorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(background: Arc<Background>) -> Self {
        BackgroundMorphism {
            map: (0..background.element_count()).collect(),
            source: background.clone(),
            target: background,
        }
    }

    /// The morphism that sends every element to the element with the same id.
    pub fn inclusion(
        source: Arc<Background>,
        target: Arc<Background>,
    ) -> Result<Self, MorphismError> {
        let mut maps = ComponentMaps::new();
        for e in source.elements() {
            maps.entry(e.component.clone())
                .or_default()
                .insert(e.key.clone(), e.key.clone());
        }
        for c in source.components() {
            maps.entry(c.clone()).or_default();
        }
        BackgroundMorphism::new(source, target, &maps)
    }

    pub fn source(&self) -> &Arc<Background> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Background> {
        &self.target
    }

    pub fn apply(&self, e: &ElementId) -> Option<&ElementId> {
        let i = self.source.index_of(e)?;
        Some(self.target.element(self.map[i]))
    }

    /// Reports the first pair of elements (in canonical order) with the same
    /// image.
    pub fn check_mono(&self) -> Result<(), MorphismError> {
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, &image) in self.map.iter().enumerate() {
            if let Some(&first) = seen.get(&image) {
                return Err(MorphismError::NotInjective {
                    first: Box::new(self.source.element(first).clone()),
                    second: Box::new(self.source.element(i).clone()),
                    image: Box::new(self.target.element(image).clone()),
                });
            }
            seen.insert(image, i);
        }
        Ok(())
    }

    pub fn is_mono(&self) -> bool {
        self.check_mono().is_ok()
    }

    /// `f ∘ s` as a subobject of the target.
    pub fn image(&self, s: &Subobject) -> Result<Subobject, MorphismError> {
        self.source.owns(s).map_err(|_| MorphismError::BackgroundMismatch {
            expected: self.source.tag().to_string(),
            found: s.background_tag().to_string(),
        })?;
        let mut bits = FixedBitSet::with_capacity(self.target.element_count());
        for i in s.indices() {
            bits.insert(self.map[i]);
        }
        Ok(self.target.wrap(bits))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &BackgroundMorphism) -> Result<BackgroundMorphism, MorphismError> {
        if g.source.tag() != self.target.tag() {
            return Err(MorphismError::BackgroundMismatch {
                expected: self.target.tag().to_string(),
                found: g.source.tag().to_string(),
            });
        }
        Ok(BackgroundMorphism {
            source: self.source.clone(),
            target: g.target.clone(),
            map: self.map.iter().map(|&i| g.map[i]).collect(),
        })
    }
}

/// Builds the morphism and requires it to be a monomorphism.
pub fn check_background_mono(
    source: Arc<Background>,
    target: Arc<Background>,
    maps: &ComponentMaps,
) -> Result<BackgroundMorphism, MorphismError> {
    let f = BackgroundMorphism::new(source, target, maps)?;
    f.check_mono()?;
    Ok(f)
}

fn lookup<'a>(
    maps: &'a ComponentMaps,
    component: &str,
    key: &str,
) -> Result<&'a String, MorphismError> {
    maps.get(component)
        .ok_or_else(|| MorphismError::MissingMap(component.to_string()))?
        .get(key)
        .ok_or_else(|| MorphismError::NotTotal {
            component: component.to_string(),
            key: key.to_string(),
        })
}

fn element_map(
    source: &Carrier,
    target: &Carrier,
    maps: &ComponentMaps,
) -> Result<BTreeMap<ElementId, ElementId>, MorphismError> {
    let mut out = BTreeMap::new();
    let mut put = |component: &str, key: &str, image: &str| {
        out.insert(
            ElementId::new(component, key),
            ElementId::new(component, image),
        );
    };
    match (source, target) {
        (Carrier::Set(s), Carrier::Set(_)) => {
            for x in &s.elements {
                put(SetCarrier::COMPONENT, x, lookup(maps, SetCarrier::COMPONENT, x)?);
            }
        }
        (Carrier::Graph(s), Carrier::Graph(t)) => {
            const V: &str = GraphCarrier::VERTICES;
            const E: &str = GraphCarrier::EDGES;
            for v in &s.vertices {
                put(V, v, lookup(maps, V, v)?);
            }
            for edge in &s.edges {
                let image_id = lookup(maps, E, &edge.id)?;
                let image = t.edge(image_id).ok_or_else(|| MorphismError::UnknownImage {
                    component: E.into(),
                    key: edge.id.clone(),
                    image: image_id.clone(),
                })?;
                let source_ok = lookup(maps, V, &edge.source)? == &image.source;
                let target_ok = lookup(maps, V, &edge.target)? == &image.target;
                if !(source_ok && target_ok) {
                    return Err(MorphismError::NotStructurePreserving(format!(
                        "edge {} is not mapped onto an edge between the images of its endpoints",
                        edge.id
                    )));
                }
                if edge.label != image.label {
                    return Err(MorphismError::NotStructurePreserving(format!(
                        "edge {} changes label {} to {}",
                        edge.id, edge.label, image.label
                    )));
                }
                put(E, &edge.id, image_id);
            }
        }
        (Carrier::Hypergraph(s), Carrier::Hypergraph(t)) => {
            const V: &str = HypergraphCarrier::VERTICES;
            const E: &str = HypergraphCarrier::EDGES;
            for v in &s.vertices {
                put(V, v, lookup(maps, V, v)?);
            }
            let targets = t.hyperedge_map();
            for edge in &s.hyperedges {
                let image_id = lookup(maps, E, &edge.id)?;
                let image = targets
                    .get(image_id.as_str())
                    .ok_or_else(|| MorphismError::UnknownImage {
                        component: E.into(),
                        key: edge.id.clone(),
                        image: image_id.clone(),
                    })?;
                let mapped = edge
                    .attachment
                    .iter()
                    .map(|v| lookup(maps, V, v).cloned())
                    .collect::<Result<Vec<_>, _>>()?;
                if mapped != image.attachment {
                    return Err(MorphismError::NotStructurePreserving(format!(
                        "hyperedge {} attaches to {:?} but its image {} attaches to {:?}",
                        edge.id, mapped, image.id, image.attachment
                    )));
                }
                if edge.label != image.label {
                    return Err(MorphismError::NotStructurePreserving(format!(
                        "hyperedge {} changes label {} to {}",
                        edge.id, edge.label, image.label
                    )));
                }
                put(E, &edge.id, image_id);
            }
        }
        (Carrier::Poset(s), Carrier::Poset(t)) => {
            const A: &str = PosetCarrier::ELEMENTS;
            const R: &str = PosetCarrier::RELATION;
            for a in &s.elements {
                put(A, a, lookup(maps, A, a)?);
            }
            let relation: HashSet<&(String, String)> = t.relation.iter().collect();
            for (a, b) in &s.relation {
                let image = (lookup(maps, A, a)?.clone(), lookup(maps, A, b)?.clone());
                if !relation.contains(&image) {
                    return Err(MorphismError::NotStructurePreserving(format!(
                        "{a} ≤ {b} but not {} ≤ {}",
                        image.0, image.1
                    )));
                }
                let key = pair_key(&image.0, &image.1);
                if let Some(given) = maps.get(R).and_then(|m| m.get(&pair_key(a, b))) {
                    if given != &key {
                        return Err(MorphismError::NotStructurePreserving(format!(
                            "relation map sends {} to {given}, expected {key}",
                            pair_key(a, b)
                        )));
                    }
                }
                put(R, &pair_key(a, b), &key);
            }
        }
        (Carrier::Diagram(s), Carrier::Diagram(t)) => {
            check_diagram_morphism(maps, s, t).map_err(|e| match e {
                DiagramError::NotTotal { map, element } => MorphismError::NotTotal {
                    component: map,
                    key: element,
                },
                other => MorphismError::NotStructurePreserving(other.to_string()),
            })?;
            for c in s.scheme.free_components() {
                for x in &s.sets[&c.name] {
                    put(&c.name, x, &maps[&c.name][x]);
                }
            }
        }
        (s, t) => {
            use crate::background::Structure;
            return Err(MorphismError::KindMismatch {
                from: s.kind(),
                to: t.kind(),
            });
        }
    }
    Ok(out)
}

/// `f(a) = (f∘r, (f∘i, i0), f∘p)`, keeping the id.
pub fn map_reaction(f: &BackgroundMorphism, a: &Reaction) -> Result<Reaction, MorphismError> {
    f.check_mono().map_err(|_| MorphismError::MonoRequired)?;
    Ok(Reaction::new(
        a.id(),
        f.image(a.reactant())?,
        f.image(a.inhibitor())?,
        f.image(a.inhibitor_core())?,
        f.image(a.product())?,
    )?)
}

/// `f(𝒜) = (B', f(A))`.
pub fn induced_system(
    f: &BackgroundMorphism,
    system: &ReactionSystem,
) -> Result<ReactionSystem, MorphismError> {
    check_endpoint(f.source(), system.background())?;
    let reactions = system
        .reactions()
        .iter()
        .map(|a| map_reaction(f, a))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ReactionSystem::new(f.target().clone(), reactions)?)
}

fn check_endpoint(expected: &Background, found: &Background) -> Result<(), MorphismError> {
    if expected.tag() == found.tag() {
        Ok(())
    } else {
        Err(MorphismError::BackgroundMismatch {
            expected: expected.tag().to_string(),
            found: found.tag().to_string(),
        })
    }
}

/// `f(A) ⊆ A'`, comparing reactions by their subobject parts, not their ids.
pub fn is_rs_morphism(
    f: &BackgroundMorphism,
    system: &ReactionSystem,
    other: &ReactionSystem,
) -> Result<bool, MorphismError> {
    check_endpoint(f.target(), other.background())?;
    let induced = induced_system(f, system)?;
    let available: HashSet<_> = other.reactions().iter().map(Reaction::triple).collect();
    Ok(induced
        .reactions()
        .iter()
        .all(|a| available.contains(&a.triple())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrongMode {
    /// Every state of the source background, up to `cap` of them.
    Exhaustive { cap: usize },
    /// `count` pseudo-random states drawn from a generator seeded with `seed`.
    Sample { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongCounterexample {
    pub state: Subobject,
    /// `f ∘ res_𝒜(t)`
    pub mapped_result: Subobject,
    /// `res_𝒜'(f ∘ t)`
    pub target_result: Subobject,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongVerdict {
    pub strong: bool,
    pub states_checked: usize,
    pub counterexample: Option<StrongCounterexample>,
}

/// Checks `f ∘ res_𝒜(t) = res_𝒜'(f ∘ t)` on the states selected by `mode`.
/// Along the way `f ∘ res_𝒜(t) ⊆ res_𝒜'(f ∘ t)`, which holds for every
/// morphism of reaction systems, is asserted for each state.
pub fn is_strong(
    f: &BackgroundMorphism,
    system: &ReactionSystem,
    other: &ReactionSystem,
    mode: StrongMode,
) -> Result<StrongVerdict, MorphismError> {
    if !is_rs_morphism(f, system, other)? {
        return Err(MorphismError::NotAMorphism);
    }
    let states = match mode {
        StrongMode::Exhaustive { cap } => system.background().enumerate(cap)?,
        StrongMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| system.background().sample_subobject(&mut rng))
                .collect()
        }
    };
    let outcomes = states
        .par_iter()
        .map(|t| -> Result<Option<StrongCounterexample>, MorphismError> {
            let mapped_result = f.image(&system.result(t)?)?;
            let target_result = other.result(&f.image(t)?)?;
            if !mapped_result.is_included_in(&target_result)? {
                let raw = system.background().to_raw(t);
                return Err(MorphismError::CorollaryViolated(format!("{raw:?}")));
            }
            Ok((mapped_result != target_result).then(|| StrongCounterexample {
                state: t.clone(),
                mapped_result,
                target_result,
            }))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let counterexample = outcomes.into_iter().flatten().next();
    Ok(StrongVerdict {
        strong: counterexample.is_none(),
        states_checked: states.len(),
        counterexample,
    })
}
