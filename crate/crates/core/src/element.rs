use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

/// An element of a finite background, addressed by the structural component
/// it lives in (`"V"`, `"E"`, `"R"`, ...) and a key unique within that
/// component.
///
/// Ids order lexicographically by `(component, key)`; every canonical
/// ordering in the crate is derived from this.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElementId {
    pub component: String,
    pub key: String,
}

impl ElementId {
    pub fn new(component: impl Into<String>, key: impl Into<String>) -> Self {
        ElementId {
            component: component.into(),
            key: key.into(),
        }
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.component, self.key)
    }
}

/// Per-component element sets as they arrive from outside (files, builders)
/// before validation against a background.
pub type RawSubobject = BTreeMap<String, BTreeSet<String>>;

/// Builds a [`RawSubobject`] from `(component, key)` pairs.
pub fn raw_from_pairs<'a, I>(pairs: I) -> RawSubobject
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let mut raw = RawSubobject::new();
    for (component, key) in pairs {
        raw.entry(component.to_string())
            .or_default()
            .insert(key.to_string());
    }
    raw
}

pub(crate) fn raw_ids(raw: &RawSubobject) -> impl Iterator<Item = ElementId> + '_ {
    raw.iter().flat_map(|(component, keys)| {
        keys.iter()
            .map(move |key| ElementId::new(component.clone(), key.clone()))
    })
}
