//! Canonical subobjects and the lattice operations that need no background
//! structure: intersection and inclusion.
//!
//! A subobject is stored as the set of background elements it contains. Every
//! shipped universe is concrete, so each subobject class has exactly one such
//! representative and equality is plain set equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::element::ElementId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubobjectError {
    #[error("element {0} does not occur in the background")]
    UnknownElement(ElementId),
    #[error("closure violated: {element} requires {missing}")]
    ClosureViolation {
        element: ElementId,
        missing: ElementId,
    },
    #[error("closure violated: {first} and {second} require {missing}")]
    JoinViolation {
        first: Box<ElementId>,
        second: Box<ElementId>,
        missing: Box<ElementId>,
    },
    #[error("subobjects belong to different backgrounds ({left} vs {right})")]
    BackgroundMismatch { left: String, right: String },
    #[error("background has more than {cap} subobjects")]
    TooLarge { cap: usize },
}

/// Identity of a background as seen by its subobjects: the user-facing id plus
/// a fingerprint of the compiled structure, so two different backgrounds that
/// happen to share an id are still told apart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BackgroundTag {
    pub(crate) id: Arc<str>,
    pub(crate) fingerprint: u64,
}

impl BackgroundTag {
    pub fn id(&self) -> &str {
        &self.id
    }
}

impl fmt::Display for BackgroundTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{:016x}", self.id, self.fingerprint)
    }
}

/// A subobject of a finite background in canonical form.
///
/// Bits are indexed by the background's sorted element list. Values are only
/// produced by [`Background`](crate::Background) methods and the lattice
/// operations here, all of which preserve the closure rules of the universe.
#[derive(Debug, Clone)]
pub struct Subobject {
    pub(crate) tag: BackgroundTag,
    pub(crate) bits: FixedBitSet,
}

impl Subobject {
    pub(crate) fn from_bits(tag: BackgroundTag, bits: FixedBitSet) -> Self {
        Subobject { tag, bits }
    }

    pub fn background_tag(&self) -> &BackgroundTag {
        &self.tag
    }

    pub fn is_empty(&self) -> bool {
        self.bits.count_ones(..) == 0
    }

    /// Number of elements (over all components).
    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    /// Element indices in ascending canonical order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.bits.contains(index)
    }

    pub(crate) fn same_background(&self, other: &Subobject) -> Result<(), SubobjectError> {
        if self.tag == other.tag {
            Ok(())
        } else {
            Err(SubobjectError::BackgroundMismatch {
                left: self.tag.to_string(),
                right: other.tag.to_string(),
            })
        }
    }

    /// Greatest lower bound: componentwise intersection.
    pub fn intersect(&self, other: &Subobject) -> Result<Subobject, SubobjectError> {
        self.same_background(other)?;
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(Subobject::from_bits(self.tag.clone(), bits))
    }

    /// Subobject inclusion `self ⊆ other`.
    pub fn is_included_in(&self, other: &Subobject) -> Result<bool, SubobjectError> {
        self.same_background(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }
}

impl PartialEq for Subobject {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag && self.bits == other.bits
    }
}

impl Eq for Subobject {}

impl Hash for Subobject {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.tag.hash(state);
        self.bits.hash(state);
    }
}

impl Ord for Subobject {
    /// Lexicographic on the ascending element lists, so enumerations and maps
    /// keyed by subobjects come out in sorted canonical form.
    fn cmp(&self, other: &Self) -> Ordering {
        self.tag
            .id
            .cmp(&other.tag.id)
            .then(self.tag.fingerprint.cmp(&other.tag.fingerprint))
            .then_with(|| self.bits.ones().cmp(other.bits.ones()))
    }
}

impl PartialOrd for Subobject {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
