use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{check_unique, Kind, UniverseError};
use crate::background::{Layout, Structure};
use crate::element::ElementId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub source: String,
    pub target: String,
    pub label: String,
}

/// Σ-labeled directed multigraph with explicit edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphCarrier {
    pub alphabet: Vec<String>,
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

impl GraphCarrier {
    pub const VERTICES: &'static str = "V";
    pub const EDGES: &'static str = "E";

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }
}

impl Structure for GraphCarrier {
    fn kind(&self) -> Kind {
        Kind::Graph
    }

    fn components(&self) -> Vec<String> {
        vec![Self::EDGES.to_string(), Self::VERTICES.to_string()]
    }

    fn layout(&self) -> Result<Layout, UniverseError> {
        check_unique(Self::VERTICES, &self.vertices)?;
        check_unique(Self::EDGES, self.edges.iter().map(|e| &e.id))?;
        check_unique("alphabet", &self.alphabet)?;
        let vertices: BTreeSet<&String> = self.vertices.iter().collect();
        let alphabet: BTreeSet<&String> = self.alphabet.iter().collect();

        let mut layout = Layout::default();
        for v in &self.vertices {
            layout.elements.push(ElementId::new(Self::VERTICES, v.clone()));
        }
        for edge in &self.edges {
            if !alphabet.contains(&edge.label) {
                return Err(UniverseError::UnknownLabel {
                    item: format!("edge {}", edge.id),
                    label: edge.label.clone(),
                });
            }
            let id = ElementId::new(Self::EDGES, edge.id.clone());
            for end in [&edge.source, &edge.target] {
                if !vertices.contains(end) {
                    return Err(UniverseError::DanglingReference {
                        item: format!("edge {}", edge.id),
                        missing: format!("vertex {end}"),
                    });
                }
                layout
                    .requires
                    .push((id.clone(), ElementId::new(Self::VERTICES, end.clone())));
            }
            layout.elements.push(id);
        }
        Ok(layout)
    }
}
