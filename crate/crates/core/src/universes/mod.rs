//! The shipped universe kinds.

mod graph;
mod hypergraph;
mod poset;
mod set;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::background::{Layout, Structure};
use crate::diagram::{DiagramCarrier, DiagramError};

pub use graph::{Edge, GraphCarrier};
pub use hypergraph::{Hyperedge, HypergraphCarrier};
pub use poset::{pair_key, PosetAxiom, PosetCarrier};
pub use set::SetCarrier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Set,
    Graph,
    Hypergraph,
    Poset,
    Diagram,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Kind::Set => "set",
            Kind::Graph => "graph",
            Kind::Hypergraph => "hypergraph",
            Kind::Poset => "poset",
            Kind::Diagram => "diagram",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("{item} refers to missing {missing}")]
    DanglingReference { item: String, missing: String },
    #[error("duplicate id {key} in component {component}")]
    DuplicateId { component: String, key: String },
    #[error("not a partial order: {axiom} fails at ({}, {})", witness.0, witness.1)]
    NotAPartialOrder {
        axiom: PosetAxiom,
        witness: (String, String),
    },
    #[error("{item} carries label {label} outside the declared alphabet")]
    UnknownLabel { item: String, label: String },
    #[error("pair ({}, {}) is not in the background relation", pair.0, pair.1)]
    PairOutsideBackground { pair: (String, String) },
    #[error("empty {what}")]
    EmptyKey { what: String },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Subobject(#[from] crate::subobject::SubobjectError),
}

/// Kind-specific structure data of a background.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Carrier {
    Set(SetCarrier),
    Graph(GraphCarrier),
    Hypergraph(HypergraphCarrier),
    Poset(PosetCarrier),
    Diagram(DiagramCarrier),
}

impl Carrier {
    fn structure(&self) -> &dyn Structure {
        match self {
            Carrier::Set(c) => c,
            Carrier::Graph(c) => c,
            Carrier::Hypergraph(c) => c,
            Carrier::Poset(c) => c,
            Carrier::Diagram(c) => c,
        }
    }
}

impl Structure for Carrier {
    fn kind(&self) -> Kind {
        self.structure().kind()
    }

    fn components(&self) -> Vec<String> {
        self.structure().components()
    }

    fn layout(&self) -> Result<Layout, UniverseError> {
        self.structure().layout()
    }
}

pub(crate) fn check_unique<'a, I>(component: &str, keys: I) -> Result<(), UniverseError>
where
    I: IntoIterator<Item = &'a String>,
{
    let mut seen = std::collections::BTreeSet::new();
    for key in keys {
        if key.is_empty() {
            return Err(UniverseError::EmptyKey {
                what: format!("key in component {component}"),
            });
        }
        if !seen.insert(key) {
            return Err(UniverseError::DuplicateId {
                component: component.to_string(),
                key: key.clone(),
            });
        }
    }
    Ok(())
}
