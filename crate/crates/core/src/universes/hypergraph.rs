use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{check_unique, Kind, UniverseError};
use crate::background::{Layout, Structure};
use crate::element::ElementId;

/// A hyperedge with its attachment string. Order and repetition of the
/// attachment are significant; its length is the hyperedge's type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperedge {
    pub id: String,
    pub attachment: Vec<String>,
    pub label: String,
}

impl Hyperedge {
    pub fn arity(&self) -> usize {
        self.attachment.len()
    }
}

/// Σ-hypergraph `(V, E, att, l)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphCarrier {
    pub alphabet: Vec<String>,
    pub vertices: Vec<String>,
    pub hyperedges: Vec<Hyperedge>,
}

impl HypergraphCarrier {
    pub const VERTICES: &'static str = "V";
    pub const EDGES: &'static str = "E";

    pub fn hyperedge(&self, id: &str) -> Option<&Hyperedge> {
        self.hyperedges.iter().find(|e| e.id == id)
    }

    pub fn hyperedge_map(&self) -> BTreeMap<&str, &Hyperedge> {
        self.hyperedges.iter().map(|e| (e.id.as_str(), e)).collect()
    }
}

impl Structure for HypergraphCarrier {
    fn kind(&self) -> Kind {
        Kind::Hypergraph
    }

    fn components(&self) -> Vec<String> {
        vec![Self::EDGES.to_string(), Self::VERTICES.to_string()]
    }

    fn layout(&self) -> Result<Layout, UniverseError> {
        check_unique(Self::VERTICES, &self.vertices)?;
        check_unique(Self::EDGES, self.hyperedges.iter().map(|e| &e.id))?;
        check_unique("alphabet", &self.alphabet)?;
        let vertices: BTreeSet<&String> = self.vertices.iter().collect();
        let alphabet: BTreeSet<&String> = self.alphabet.iter().collect();

        let mut layout = Layout::default();
        for v in &self.vertices {
            layout.elements.push(ElementId::new(Self::VERTICES, v.clone()));
        }
        for edge in &self.hyperedges {
            if !alphabet.contains(&edge.label) {
                return Err(UniverseError::UnknownLabel {
                    item: format!("hyperedge {}", edge.id),
                    label: edge.label.clone(),
                });
            }
            let id = ElementId::new(Self::EDGES, edge.id.clone());
            for v in &edge.attachment {
                if !vertices.contains(v) {
                    return Err(UniverseError::DanglingReference {
                        item: format!("hyperedge {}", edge.id),
                        missing: format!("vertex {v}"),
                    });
                }
                layout
                    .requires
                    .push((id.clone(), ElementId::new(Self::VERTICES, v.clone())));
            }
            layout.elements.push(id);
        }
        Ok(layout)
    }
}
