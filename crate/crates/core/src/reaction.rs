//! Reactions, enabledness and the parallel result function.

use std::collections::BTreeSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::background::Background;
use crate::subobject::{Subobject, SubobjectError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReactionError {
    #[error("reaction {0}: reactant is empty")]
    EmptyReactant(String),
    #[error("reaction {0}: product is empty")]
    EmptyProduct(String),
    #[error("reaction {0}: inhibitor core is not included in the inhibitor")]
    InhibitorCoreNotIncluded(String),
    #[error("duplicate reaction id {0}")]
    DuplicateId(String),
    #[error("reaction id is empty")]
    EmptyId,
    #[error(transparent)]
    Subobject(#[from] SubobjectError),
}

/// `(r, (i, i0), p)` over one background. The inhibitor core `i0` is kept as
/// a subobject of the background with `i0 ⊆ i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Reaction {
    id: String,
    reactant: Subobject,
    inhibitor: Subobject,
    inhibitor_core: Subobject,
    product: Subobject,
}

impl Reaction {
    pub fn new(
        id: impl Into<String>,
        reactant: Subobject,
        inhibitor: Subobject,
        inhibitor_core: Subobject,
        product: Subobject,
    ) -> Result<Self, ReactionError> {
        let id = id.into();
        if id.is_empty() {
            return Err(ReactionError::EmptyId);
        }
        reactant.same_background(&inhibitor)?;
        reactant.same_background(&inhibitor_core)?;
        reactant.same_background(&product)?;
        if reactant.is_empty() {
            return Err(ReactionError::EmptyReactant(id));
        }
        if product.is_empty() {
            return Err(ReactionError::EmptyProduct(id));
        }
        if !inhibitor_core.is_included_in(&inhibitor)? {
            return Err(ReactionError::InhibitorCoreNotIncluded(id));
        }
        Ok(Reaction {
            id,
            reactant,
            inhibitor,
            inhibitor_core,
            product,
        })
    }

    /// `(r, −, p)`: inhibitor `(∅_B, 1_INIT)`, which never blocks.
    pub fn uninhibited(
        id: impl Into<String>,
        reactant: Subobject,
        product: Subobject,
    ) -> Result<Self, ReactionError> {
        let empty = Subobject::from_bits(
            reactant.tag.clone(),
            FixedBitSet::with_capacity(reactant.bits.len()),
        );
        Reaction::new(id, reactant, empty.clone(), empty, product)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn reactant(&self) -> &Subobject {
        &self.reactant
    }

    pub fn inhibitor(&self) -> &Subobject {
        &self.inhibitor
    }

    pub fn inhibitor_core(&self) -> &Subobject {
        &self.inhibitor_core
    }

    pub fn product(&self) -> &Subobject {
        &self.product
    }

    pub fn is_uninhibited(&self) -> bool {
        self.inhibitor.is_empty()
    }

    /// The reaction's parts without its id, for comparing reactions
    /// semantically.
    pub fn triple(&self) -> (&Subobject, &Subobject, &Subobject, &Subobject) {
        (
            &self.reactant,
            &self.inhibitor,
            &self.inhibitor_core,
            &self.product,
        )
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    /// `r ⊆ t` and `t ∩ i ⊆ i0`.
    pub fn is_enabled(&self, state: &Subobject) -> Result<bool, SubobjectError> {
        self.reactant.same_background(state)?;
        Ok(self.enabled_unchecked(state))
    }

    pub(crate) fn enabled_unchecked(&self, state: &Subobject) -> bool {
        if !self.reactant.bits.is_subset(&state.bits) {
            return false;
        }
        // t ∩ i ⊆ i0, element by element
        self.inhibitor
            .bits
            .ones()
            .all(|x| !state.bits.contains(x) || self.inhibitor_core.bits.contains(x))
    }

    /// `p` when enabled on `state`, `∅_B` otherwise.
    pub fn result(&self, state: &Subobject) -> Result<Subobject, SubobjectError> {
        if self.is_enabled(state)? {
            Ok(self.product.clone())
        } else {
            Ok(Subobject::from_bits(
                state.tag.clone(),
                FixedBitSet::with_capacity(state.bits.len()),
            ))
        }
    }
}

/// Union of the per-reaction results of `reactions` on `state`.
pub fn result_of_set<'a, I>(
    background: &Background,
    reactions: I,
    state: &Subobject,
) -> Result<Subobject, SubobjectError>
where
    I: IntoIterator<Item = &'a Reaction>,
{
    background.owns(state)?;
    let results = reactions
        .into_iter()
        .map(|a| a.result(state))
        .collect::<Result<Vec<_>, _>>()?;
    background.union_all(&results)
}

/// `𝒜 = (B, A)`: a background with a finite set of uniquely named reactions.
#[derive(Debug, Clone)]
pub struct ReactionSystem {
    background: Arc<Background>,
    reactions: Vec<Reaction>,
}

impl ReactionSystem {
    pub fn new(background: Arc<Background>, reactions: Vec<Reaction>) -> Result<Self, ReactionError> {
        let mut ids = BTreeSet::new();
        for a in &reactions {
            background.owns(a.reactant())?;
            if !ids.insert(a.id()) {
                return Err(ReactionError::DuplicateId(a.id().to_string()));
            }
        }
        Ok(ReactionSystem {
            background,
            reactions,
        })
    }

    pub fn background(&self) -> &Arc<Background> {
        &self.background
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn reaction(&self, id: &str) -> Option<&Reaction> {
        self.reactions.iter().find(|a| a.id() == id)
    }

    /// Ids of the reactions enabled on `state`, in system order.
    pub fn enabled(&self, state: &Subobject) -> Result<Vec<&str>, SubobjectError> {
        self.background.owns(state)?;
        Ok(self
            .reactions
            .iter()
            .filter(|a| a.enabled_unchecked(state))
            .map(|a| a.id())
            .collect())
    }

    /// `res_𝒜(t)`: union of the products of all reactions enabled on `t`.
    pub fn result(&self, state: &Subobject) -> Result<Subobject, SubobjectError> {
        self.background.owns(state)?;
        let mut bits = FixedBitSet::with_capacity(self.background.element_count());
        for a in &self.reactions {
            if a.enabled_unchecked(state) {
                bits.union_with(&a.product.bits);
            }
        }
        if self.background.has_joins() {
            self.background.complete(&mut bits);
        }
        Ok(self.background.wrap(bits))
    }
}
