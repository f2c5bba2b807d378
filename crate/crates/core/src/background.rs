//! Finite backgrounds and the universe contract.
//!
//! Every universe kind compiles its carrier into a [`Layout`]: the sorted list
//! of elements plus closure rules. Two rule shapes cover all shipped kinds:
//!
//! * a *requirement* `x ⇒ y` (an edge needs its endpoints, a vertex of a
//!   poset needs its reflexive pair, ...);
//! * a *join* `x ∧ y ⇒ z` (transitivity of a subposet relation).
//!
//! Subobjects are exactly the element sets closed under these rules. Closed
//! sets of such rules are stable under intersection, and the least closed
//! superset of a union is obtained by forward chaining, which for the rule
//! sets produced here only ever adds composite poset pairs.
//!
//! Whether the universal morphism out of a union is a monomorphism is assumed
//! for user-defined [`Structure`] implementations; only the shipped kinds are
//! checked by the law suite.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::Rng;

use crate::element::{raw_ids, ElementId, RawSubobject};
use crate::subobject::{BackgroundTag, Subobject, SubobjectError};
use crate::universes::{Carrier, Kind, UniverseError};

/// Default cap for [`Background::enumerate`].
pub const DEFAULT_ENUM_CAP: usize = 1 << 20;

/// Compiled element set and closure rules of a carrier.
#[derive(Debug, Clone, Default)]
pub struct Layout {
    pub elements: Vec<ElementId>,
    /// `(x, y)`: whenever `x` is present, `y` must be.
    pub requires: Vec<(ElementId, ElementId)>,
    /// `(x, y, z)`: whenever `x` and `y` are present, `z` must be.
    pub joins: Vec<(ElementId, ElementId, ElementId)>,
}

/// A concrete universe kind.
pub trait Structure {
    fn kind(&self) -> Kind;

    /// Names of the components subobjects select from.
    fn components(&self) -> Vec<String>;

    /// Validates the carrier and compiles it.
    fn layout(&self) -> Result<Layout, UniverseError>;
}

#[derive(Debug, Clone, Copy)]
struct Join {
    first: usize,
    second: usize,
    then: usize,
}

#[derive(Debug, Clone, Copy)]
enum Check {
    Requires(usize, usize),
    Join(usize),
}

/// A finite object of some universe together with its compiled subobject
/// structure.
#[derive(Debug, Clone)]
pub struct Background {
    tag: BackgroundTag,
    carrier: Carrier,
    components: Vec<String>,
    elements: Vec<ElementId>,
    index: HashMap<ElementId, usize>,
    requires: Vec<Vec<usize>>,
    joins: Vec<Join>,
    joins_by_premise: Vec<Vec<usize>>,
}

impl Background {
    pub fn new(id: impl Into<String>, carrier: Carrier) -> Result<Self, UniverseError> {
        let id: String = id.into();
        if id.is_empty() {
            return Err(UniverseError::EmptyKey {
                what: "background id".into(),
            });
        }
        let layout = carrier.layout()?;
        let components = carrier.components();

        let mut elements = layout.elements;
        elements.sort();
        for pair in elements.windows(2) {
            if pair[0] == pair[1] {
                return Err(UniverseError::DuplicateId {
                    component: pair[0].component.clone(),
                    key: pair[0].key.clone(),
                });
            }
        }
        for element in &elements {
            if element.key.is_empty() {
                return Err(UniverseError::EmptyKey {
                    what: format!("element of component {}", element.component),
                });
            }
        }
        let index: HashMap<ElementId, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let lookup = |e: &ElementId| {
            index
                .get(e)
                .copied()
                .ok_or_else(|| UniverseError::DanglingReference {
                    item: e.to_string(),
                    missing: e.to_string(),
                })
        };

        let mut requires = vec![Vec::new(); elements.len()];
        for (x, y) in &layout.requires {
            let (x, y) = (lookup(x)?, lookup(y)?);
            if x != y && !requires[x].contains(&y) {
                requires[x].push(y);
            }
        }
        for list in &mut requires {
            list.sort_unstable();
        }
        let mut joins = Vec::with_capacity(layout.joins.len());
        let mut joins_by_premise = vec![Vec::new(); elements.len()];
        for (x, y, z) in &layout.joins {
            let join = Join {
                first: lookup(x)?,
                second: lookup(y)?,
                then: lookup(z)?,
            };
            joins_by_premise[join.first].push(joins.len());
            if join.second != join.first {
                joins_by_premise[join.second].push(joins.len());
            }
            joins.push(join);
        }

        let mut hasher = DefaultHasher::new();
        id.hash(&mut hasher);
        elements.hash(&mut hasher);
        requires.hash(&mut hasher);
        for j in &joins {
            (j.first, j.second, j.then).hash(&mut hasher);
        }
        let tag = BackgroundTag {
            id: Arc::from(id.as_str()),
            fingerprint: hasher.finish(),
        };

        let background = Background {
            tag,
            carrier,
            components,
            elements,
            index,
            requires,
            joins,
            joins_by_premise,
        };
        // the background itself must be a subobject of itself
        background.check_bits(&background.full_bits())?;
        Ok(background)
    }

    pub fn id(&self) -> &str {
        self.tag.id()
    }

    pub fn tag(&self) -> &BackgroundTag {
        &self.tag
    }

    pub fn kind(&self) -> Kind {
        self.carrier.kind()
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    /// All elements in canonical order; a subobject's bit `i` refers to
    /// `elements()[i]`.
    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, id: &ElementId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn element(&self, index: usize) -> &ElementId {
        &self.elements[index]
    }

    pub(crate) fn has_joins(&self) -> bool {
        !self.joins.is_empty()
    }

    fn empty_bits(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.elements.len())
    }

    fn full_bits(&self) -> FixedBitSet {
        let mut bits = self.empty_bits();
        bits.insert_range(..);
        bits
    }

    pub(crate) fn wrap(&self, bits: FixedBitSet) -> Subobject {
        debug_assert_eq!(bits.len(), self.elements.len());
        Subobject::from_bits(self.tag.clone(), bits)
    }

    /// The empty subobject `∅_B`.
    pub fn empty_subobject(&self) -> Subobject {
        self.wrap(self.empty_bits())
    }

    /// The background as a subobject of itself.
    pub fn full_subobject(&self) -> Subobject {
        self.wrap(self.full_bits())
    }

    pub fn owns(&self, s: &Subobject) -> Result<(), SubobjectError> {
        if s.tag == self.tag {
            Ok(())
        } else {
            Err(SubobjectError::BackgroundMismatch {
                left: self.tag.to_string(),
                right: s.tag.to_string(),
            })
        }
    }

    fn check_bits(&self, bits: &FixedBitSet) -> Result<(), SubobjectError> {
        for x in bits.ones() {
            for &y in &self.requires[x] {
                if !bits.contains(y) {
                    return Err(SubobjectError::ClosureViolation {
                        element: self.elements[x].clone(),
                        missing: self.elements[y].clone(),
                    });
                }
            }
        }
        for j in &self.joins {
            if bits.contains(j.first) && bits.contains(j.second) && !bits.contains(j.then) {
                return Err(SubobjectError::JoinViolation {
                    first: Box::new(self.elements[j.first].clone()),
                    second: Box::new(self.elements[j.second].clone()),
                    missing: Box::new(self.elements[j.then].clone()),
                });
            }
        }
        Ok(())
    }

    fn bits_of<I>(&self, ids: I) -> Result<FixedBitSet, SubobjectError>
    where
        I: IntoIterator<Item = ElementId>,
    {
        let mut bits = self.empty_bits();
        for id in ids {
            let i = self
                .index_of(&id)
                .ok_or(SubobjectError::UnknownElement(id))?;
            bits.insert(i);
        }
        Ok(bits)
    }

    /// Ingestion guard: accepts `raw` only if it names elements of this
    /// background and satisfies every closure rule.
    pub fn validate_subobject(&self, raw: &RawSubobject) -> Result<Subobject, SubobjectError> {
        self.subobject_from_ids(raw_ids(raw))
    }

    pub fn subobject_from_ids<I>(&self, ids: I) -> Result<Subobject, SubobjectError>
    where
        I: IntoIterator<Item = ElementId>,
    {
        let bits = self.bits_of(ids)?;
        self.check_bits(&bits)?;
        Ok(self.wrap(bits))
    }

    /// Re-checks an already constructed subobject against the closure rules.
    pub fn check_subobject(&self, s: &Subobject) -> Result<(), SubobjectError> {
        self.owns(s)?;
        self.check_bits(&s.bits)
    }

    /// Least subobject containing the given elements.
    pub fn generated_by<I>(&self, ids: I) -> Result<Subobject, SubobjectError>
    where
        I: IntoIterator<Item = ElementId>,
    {
        let mut bits = self.bits_of(ids)?;
        self.complete(&mut bits);
        Ok(self.wrap(bits))
    }

    /// Forward chaining of the closure rules until fixpoint.
    pub(crate) fn complete(&self, bits: &mut FixedBitSet) {
        let mut stack: Vec<usize> = bits.ones().collect();
        while let Some(x) = stack.pop() {
            for &y in &self.requires[x] {
                if !bits.put(y) {
                    stack.push(y);
                }
            }
            for &ji in &self.joins_by_premise[x] {
                let j = self.joins[ji];
                if bits.contains(j.first) && bits.contains(j.second) && !bits.put(j.then) {
                    stack.push(j.then);
                }
            }
        }
    }

    /// Least upper bound of a finite family. The empty family yields `∅_B`.
    pub fn union_all<'a, I>(&self, family: I) -> Result<Subobject, SubobjectError>
    where
        I: IntoIterator<Item = &'a Subobject>,
    {
        let mut bits = self.empty_bits();
        for s in family {
            self.owns(s)?;
            bits.union_with(&s.bits);
        }
        if self.has_joins() {
            self.complete(&mut bits);
        }
        Ok(self.wrap(bits))
    }

    /// Binary union, `union_all(B, {a, b})`.
    pub fn union(&self, a: &Subobject, b: &Subobject) -> Result<Subobject, SubobjectError> {
        self.union_all([a, b])
    }

    pub fn contains(&self, s: &Subobject, id: &ElementId) -> bool {
        self.index_of(id).is_some_and(|i| s.bits.contains(i))
    }

    pub fn element_ids<'a>(&'a self, s: &'a Subobject) -> impl Iterator<Item = &'a ElementId> + 'a {
        s.bits.ones().map(move |i| &self.elements[i])
    }

    /// Per-component sorted key sets; every component of the universe is
    /// present, possibly empty.
    pub fn to_raw(&self, s: &Subobject) -> RawSubobject {
        let mut raw: RawSubobject = self
            .components
            .iter()
            .map(|c| (c.clone(), Default::default()))
            .collect();
        for id in self.element_ids(s) {
            raw.entry(id.component.clone())
                .or_default()
                .insert(id.key.clone());
        }
        raw
    }

    /// All subobjects, sorted, each exactly once. Declines with `TooLarge`
    /// once more than `cap` have been found.
    pub fn enumerate(&self, cap: usize) -> Result<Vec<Subobject>, SubobjectError> {
        let n = self.elements.len();
        // each rule is checked as soon as its highest-indexed element is decided
        let mut checks: Vec<Vec<Check>> = vec![Vec::new(); n];
        for (x, reqs) in self.requires.iter().enumerate() {
            for &y in reqs {
                checks[x.max(y)].push(Check::Requires(x, y));
            }
        }
        for (ji, j) in self.joins.iter().enumerate() {
            checks[j.first.max(j.second).max(j.then)].push(Check::Join(ji));
        }

        let mut found = Vec::new();
        let mut bits = self.empty_bits();
        self.enumerate_from(0, &checks, &mut bits, &mut found, cap)?;
        let mut subobjects: Vec<Subobject> = found.into_iter().map(|b| self.wrap(b)).collect();
        subobjects.sort();
        Ok(subobjects)
    }

    fn enumerate_from(
        &self,
        at: usize,
        checks: &[Vec<Check>],
        bits: &mut FixedBitSet,
        found: &mut Vec<FixedBitSet>,
        cap: usize,
    ) -> Result<(), SubobjectError> {
        if at == self.elements.len() {
            if found.len() == cap {
                return Err(SubobjectError::TooLarge { cap });
            }
            found.push(bits.clone());
            return Ok(());
        }
        for present in [false, true] {
            bits.set(at, present);
            let consistent = checks[at].iter().all(|check| match *check {
                Check::Requires(x, y) => !bits.contains(x) || bits.contains(y),
                Check::Join(ji) => {
                    let j = self.joins[ji];
                    !(bits.contains(j.first) && bits.contains(j.second)) || bits.contains(j.then)
                }
            });
            if consistent {
                self.enumerate_from(at + 1, checks, bits, found, cap)?;
            }
        }
        bits.set(at, false);
        Ok(())
    }

    /// A pseudo-random subobject: a random element set at a random density,
    /// closed upwards under the rules.
    pub fn sample_subobject<R: Rng + ?Sized>(&self, rng: &mut R) -> Subobject {
        let density: f64 = rng.gen();
        let mut bits = self.empty_bits();
        for i in 0..self.elements.len() {
            if rng.gen_bool(density) {
                bits.insert(i);
            }
        }
        self.complete(&mut bits);
        self.wrap(bits)
    }

    /// Groups elements by component, in canonical order.
    pub fn elements_by_component(&self) -> BTreeMap<&str, Vec<&ElementId>> {
        let mut map: BTreeMap<&str, Vec<&ElementId>> = self
            .components
            .iter()
            .map(|c| (c.as_str(), Vec::new()))
            .collect();
        for e in &self.elements {
            map.entry(e.component.as_str()).or_default().push(e);
        }
        map
    }
}
