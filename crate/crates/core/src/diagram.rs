//! Diagram categories over finite sets.
//!
//! A [`Scheme`] is a directed graph of components and arrows. A diagram
//! instantiates every free component with a finite set and every arrow with a
//! total map; fixed components are instantiated once, in the scheme, and are
//! never the source of an arrow. Subobjects select a subset per free
//! component such that every arrow maps selected elements to selected
//! elements (arrows into fixed components impose nothing). Empty subobject,
//! intersection and union are all componentwise.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::background::{Background, Layout, Structure};
use crate::element::ElementId;
use crate::universes::{Carrier, Kind, UniverseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("arrow {arrow} leaves the fixed component {component}")]
    FixedSourceArrow { arrow: String, component: String },
    #[error("duplicate name {0} in scheme")]
    DuplicateName(String),
    #[error("arrow {arrow} refers to unknown component {component}")]
    UnknownComponent { arrow: String, component: String },
    #[error("unknown registry scheme {0}")]
    UnknownScheme(String),
    #[error("fixed component {0} needs a set")]
    MissingFixedSet(String),
    #[error("diagram does not match scheme: {0}")]
    SchemeMismatch(String),
    #[error("map {map} is undefined on {element}")]
    NotTotal { map: String, element: String },
    #[error("map {map} sends {element} to {image}, outside {target}")]
    OutOfRange {
        map: String,
        element: String,
        image: String,
        target: String,
    },
    #[error("square for arrow {arrow} fails at {element}")]
    SquareFails { arrow: String, element: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeComponent {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<Vec<String>>,
}

impl SchemeComponent {
    pub fn free(name: impl Into<String>) -> Self {
        SchemeComponent {
            name: name.into(),
            fixed: None,
        }
    }

    pub fn fixed<I, S>(name: impl Into<String>, set: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        SchemeComponent {
            name: name.into(),
            fixed: Some(set.into_iter().map(Into::into).collect()),
        }
    }

    pub fn is_fixed(&self) -> bool {
        self.fixed.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeArrow {
    pub name: String,
    pub source: String,
    pub target: String,
}

impl SchemeArrow {
    pub fn new(name: &str, source: &str, target: &str) -> Self {
        SchemeArrow {
            name: name.into(),
            source: source.into(),
            target: target.into(),
        }
    }
}

/// `(C, A, s, t)` with optional fixed components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemeDoc")]
pub struct Scheme {
    pub components: Vec<SchemeComponent>,
    pub arrows: Vec<SchemeArrow>,
}

/// Wire form of a scheme: either spelled out or taken from the registry.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SchemeDoc {
    Registry {
        registry: String,
        #[serde(default)]
        fixed: BTreeMap<String, Vec<String>>,
    },
    Inline {
        components: Vec<SchemeComponent>,
        arrows: Vec<SchemeArrow>,
    },
}

impl TryFrom<SchemeDoc> for Scheme {
    type Error = DiagramError;

    fn try_from(doc: SchemeDoc) -> Result<Self, Self::Error> {
        match doc {
            SchemeDoc::Registry { registry, fixed } => registry_scheme(&registry, &fixed),
            SchemeDoc::Inline { components, arrows } => Scheme::new(components, arrows),
        }
    }
}

impl Scheme {
    pub fn new(
        components: Vec<SchemeComponent>,
        arrows: Vec<SchemeArrow>,
    ) -> Result<Self, DiagramError> {
        let scheme = Scheme { components, arrows };
        scheme.validate()?;
        Ok(scheme)
    }

    /// No fixed component is the source of an arrow; names are unique.
    pub fn validate(&self) -> Result<(), DiagramError> {
        let mut names = BTreeSet::new();
        for name in self
            .components
            .iter()
            .map(|c| &c.name)
            .chain(self.arrows.iter().map(|a| &a.name))
        {
            if !names.insert(name) {
                return Err(DiagramError::DuplicateName(name.clone()));
            }
        }
        for c in &self.components {
            if let Some(set) = &c.fixed {
                let unique: BTreeSet<&String> = set.iter().collect();
                if unique.len() != set.len() {
                    return Err(DiagramError::DuplicateName(format!(
                        "element of fixed component {}",
                        c.name
                    )));
                }
            }
        }
        for arrow in &self.arrows {
            for end in [&arrow.source, &arrow.target] {
                if self.component(end).is_none() {
                    return Err(DiagramError::UnknownComponent {
                        arrow: arrow.name.clone(),
                        component: end.clone(),
                    });
                }
            }
            if self.component(&arrow.source).is_some_and(|c| c.is_fixed()) {
                return Err(DiagramError::FixedSourceArrow {
                    arrow: arrow.name.clone(),
                    component: arrow.source.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn component(&self, name: &str) -> Option<&SchemeComponent> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn free_components(&self) -> impl Iterator<Item = &SchemeComponent> {
        self.components.iter().filter(|c| !c.is_fixed())
    }
}

pub const REGISTRY: &[&str] = &[
    "sets",
    "pairs",
    "sigma-sets",
    "maps",
    "graphs",
    "sigma-graphs",
    "ve-graphs",
    "bipartite",
    "hg3",
    "hg4",
];

/// Shipped schemes. Fixed components take their sets from `fixed`.
pub fn registry_scheme(
    name: &str,
    fixed: &BTreeMap<String, Vec<String>>,
) -> Result<Scheme, DiagramError> {
    use SchemeArrow as A;
    use SchemeComponent as C;
    let fixed_set = |component: &str| {
        fixed
            .get(component)
            .cloned()
            .map(|set| C::fixed(component, set))
            .ok_or_else(|| DiagramError::MissingFixedSet(component.to_string()))
    };
    let (components, arrows) = match name {
        "sets" => (vec![C::free("X")], vec![]),
        "pairs" => (vec![C::free("X1"), C::free("X2")], vec![]),
        "sigma-sets" => (
            vec![C::free("X"), fixed_set("Sigma")?],
            vec![A::new("l", "X", "Sigma")],
        ),
        "maps" => (
            vec![C::free("X"), C::free("Y")],
            vec![A::new("f", "X", "Y")],
        ),
        "graphs" => (
            vec![C::free("E"), C::free("V")],
            vec![A::new("s", "E", "V"), A::new("t", "E", "V")],
        ),
        "sigma-graphs" => (
            vec![C::free("E"), C::free("V"), fixed_set("Sigma")?],
            vec![
                A::new("s", "E", "V"),
                A::new("t", "E", "V"),
                A::new("l", "E", "Sigma"),
            ],
        ),
        "ve-graphs" => (
            vec![
                C::free("E"),
                C::free("V"),
                fixed_set("SigmaE")?,
                fixed_set("SigmaV")?,
            ],
            vec![
                A::new("s", "E", "V"),
                A::new("t", "E", "V"),
                A::new("le", "E", "SigmaE"),
                A::new("lv", "V", "SigmaV"),
            ],
        ),
        "bipartite" => (
            vec![C::free("E1"), C::free("E2"), C::free("V1"), C::free("V2")],
            vec![
                A::new("s1", "E1", "V1"),
                A::new("t1", "E1", "V2"),
                A::new("s2", "E2", "V2"),
                A::new("t2", "E2", "V1"),
            ],
        ),
        "hg3" => (
            vec![C::free("E"), C::free("V")],
            vec![
                A::new("l", "E", "V"),
                A::new("r", "E", "V"),
                A::new("t", "E", "V"),
            ],
        ),
        "hg4" => (
            vec![C::free("E"), C::free("V")],
            vec![
                A::new("north", "E", "V"),
                A::new("east", "E", "V"),
                A::new("south", "E", "V"),
                A::new("west", "E", "V"),
            ],
        ),
        other => return Err(DiagramError::UnknownScheme(other.to_string())),
    };
    Scheme::new(components, arrows)
}

/// A scheme together with one diagram over it: a finite set per free
/// component and a total map per arrow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramCarrier {
    pub scheme: Scheme,
    pub sets: BTreeMap<String, Vec<String>>,
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

impl DiagramCarrier {
    fn target_set(&self, component: &str) -> Option<&Vec<String>> {
        match self.scheme.component(component)?.fixed.as_ref() {
            Some(fixed) => Some(fixed),
            None => self.sets.get(component),
        }
    }

    pub fn validate(&self) -> Result<(), DiagramError> {
        self.scheme.validate()?;
        let free: BTreeSet<&String> = self.scheme.free_components().map(|c| &c.name).collect();
        let given: BTreeSet<&String> = self.sets.keys().collect();
        if free != given {
            return Err(DiagramError::SchemeMismatch(format!(
                "sets given for {given:?}, free components are {free:?}"
            )));
        }
        for (component, set) in &self.sets {
            let unique: BTreeSet<&String> = set.iter().collect();
            if unique.len() != set.len() {
                return Err(DiagramError::DuplicateName(format!(
                    "element of component {component}"
                )));
            }
        }
        let arrows: BTreeSet<&String> = self.scheme.arrows.iter().map(|a| &a.name).collect();
        let mapped: BTreeSet<&String> = self.maps.keys().collect();
        if arrows != mapped {
            return Err(DiagramError::SchemeMismatch(format!(
                "maps given for {mapped:?}, arrows are {arrows:?}"
            )));
        }
        for arrow in &self.scheme.arrows {
            let map = &self.maps[&arrow.name];
            let source = &self.sets[&arrow.source];
            let target = self.target_set(&arrow.target).expect("validated scheme");
            for x in source {
                let image = map.get(x).ok_or_else(|| DiagramError::NotTotal {
                    map: arrow.name.clone(),
                    element: x.clone(),
                })?;
                if !target.contains(image) {
                    return Err(DiagramError::OutOfRange {
                        map: arrow.name.clone(),
                        element: x.clone(),
                        image: image.clone(),
                        target: arrow.target.clone(),
                    });
                }
            }
            if let Some(extra) = map.keys().find(|k| !source.contains(k)) {
                return Err(DiagramError::SchemeMismatch(format!(
                    "map {} is defined on {extra}, which is not in {}",
                    arrow.name, arrow.source
                )));
            }
        }
        Ok(())
    }
}

impl Structure for DiagramCarrier {
    fn kind(&self) -> Kind {
        Kind::Diagram
    }

    fn components(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .scheme
            .free_components()
            .map(|c| c.name.clone())
            .collect();
        names.sort();
        names
    }

    fn layout(&self) -> Result<Layout, UniverseError> {
        self.validate()?;
        let mut layout = Layout::default();
        for (component, set) in &self.sets {
            for x in set {
                layout
                    .elements
                    .push(ElementId::new(component.clone(), x.clone()));
            }
        }
        for arrow in &self.scheme.arrows {
            if self.scheme.component(&arrow.target).is_some_and(|c| c.is_fixed()) {
                continue;
            }
            for (x, y) in &self.maps[&arrow.name] {
                layout.requires.push((
                    ElementId::new(arrow.source.clone(), x.clone()),
                    ElementId::new(arrow.target.clone(), y.clone()),
                ));
            }
        }
        Ok(layout)
    }
}

/// Builds the background of the diagram universe for one instantiation.
pub fn instantiate_diagram_universe(
    id: impl Into<String>,
    scheme: Scheme,
    sets: BTreeMap<String, Vec<String>>,
    maps: BTreeMap<String, BTreeMap<String, String>>,
) -> Result<Background, UniverseError> {
    Background::new(id, Carrier::Diagram(DiagramCarrier { scheme, sets, maps }))
}

/// Per-component maps of a diagram morphism (fixed components are the
/// identity and are omitted).
pub type ComponentMaps = BTreeMap<String, BTreeMap<String, String>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramMorphismReport {
    /// All component maps are injective.
    pub mono: bool,
}

/// Checks that `g` is a morphism from `source` to `target`: every component
/// map is total and lands in the right set, and `g_t(a) ∘ δ(a) = δ'(a) ∘ g_s(a)`
/// for every arrow `a`.
pub fn check_diagram_morphism(
    g: &ComponentMaps,
    source: &DiagramCarrier,
    target: &DiagramCarrier,
) -> Result<DiagramMorphismReport, DiagramError> {
    if source.scheme != target.scheme {
        return Err(DiagramError::SchemeMismatch(
            "source and target use different schemes".into(),
        ));
    }
    let scheme = &source.scheme;
    let mut mono = true;
    for c in scheme.free_components() {
        let map = g.get(&c.name).ok_or_else(|| {
            DiagramError::SchemeMismatch(format!("no map for component {}", c.name))
        })?;
        let into = &target.sets[&c.name];
        let mut images = BTreeSet::new();
        for x in &source.sets[&c.name] {
            let y = map.get(x).ok_or_else(|| DiagramError::NotTotal {
                map: c.name.clone(),
                element: x.clone(),
            })?;
            if !into.contains(y) {
                return Err(DiagramError::OutOfRange {
                    map: c.name.clone(),
                    element: x.clone(),
                    image: y.clone(),
                    target: c.name.clone(),
                });
            }
            mono &= images.insert(y);
        }
    }
    for arrow in &scheme.arrows {
        let target_fixed = scheme.component(&arrow.target).is_some_and(|c| c.is_fixed());
        for x in &source.sets[&arrow.source] {
            let there = &source.maps[&arrow.name][x];
            let left = if target_fixed {
                there
            } else {
                &g[&arrow.target][there]
            };
            let gx = &g[&arrow.source][x];
            let right = &target.maps[&arrow.name][gx];
            if left != right {
                return Err(DiagramError::SquareFails {
                    arrow: arrow.name.clone(),
                    element: x.clone(),
                });
            }
        }
    }
    Ok(DiagramMorphismReport { mono })
}
