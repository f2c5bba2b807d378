use serde::{Deserialize, Serialize};

use super::{check_unique, Kind, UniverseError};
use crate::background::{Layout, Structure};
use crate::element::ElementId;

/// A finite set. Every subset is a subobject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCarrier {
    pub elements: Vec<String>,
}

impl SetCarrier {
    pub const COMPONENT: &'static str = "X";

    pub fn new<I, S>(elements: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        SetCarrier {
            elements: elements.into_iter().map(Into::into).collect(),
        }
    }
}

impl Structure for SetCarrier {
    fn kind(&self) -> Kind {
        Kind::Set
    }

    fn components(&self) -> Vec<String> {
        vec![Self::COMPONENT.to_string()]
    }

    fn layout(&self) -> Result<Layout, UniverseError> {
        check_unique(Self::COMPONENT, &self.elements)?;
        Ok(Layout {
            elements: self
                .elements
                .iter()
                .map(|k| ElementId::new(Self::COMPONENT, k.clone()))
                .collect(),
            ..Layout::default()
        })
    }
}
