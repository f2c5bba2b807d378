use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{check_unique, Kind, UniverseError};
use crate::background::{Layout, Structure};
use crate::element::ElementId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PosetAxiom {
    Reflexivity,
    AntiSymmetry,
    Transitivity,
}

impl fmt::Display for PosetAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PosetAxiom::Reflexivity => "reflexivity",
            PosetAxiom::AntiSymmetry => "anti-symmetry",
            PosetAxiom::Transitivity => "transitivity",
        })
    }
}

/// Key of the relation element `(a, b)` in component `R`.
pub fn pair_key(a: &str, b: &str) -> String {
    format!("{a}<={b}")
}

/// A finite poset `(A, R)`. The relation must already be a partial order;
/// nothing is completed at construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetCarrier {
    pub elements: Vec<String>,
    pub relation: Vec<(String, String)>,
}

type Relation = BTreeSet<(String, String)>;

impl PosetCarrier {
    pub const ELEMENTS: &'static str = "A";
    pub const RELATION: &'static str = "R";

    /// Chain `e0 ≤ e1 ≤ ...` with all reflexive and transitive pairs.
    pub fn chain<I, S>(elements: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut relation = Vec::new();
        for (i, a) in elements.iter().enumerate() {
            for b in &elements[i..] {
                relation.push((a.clone(), b.clone()));
            }
        }
        PosetCarrier { elements, relation }
    }

    fn relation_set(&self) -> Relation {
        self.relation.iter().cloned().collect()
    }

    /// Least transitive relation containing `pairs`, all of which must be
    /// pairs of this poset. Computed by composing the relation with itself
    /// until nothing new appears.
    pub fn closure(&self, pairs: &[(String, String)]) -> Result<Relation, UniverseError> {
        let background = self.relation_set();
        let mut closed: Relation = BTreeSet::new();
        for pair in pairs {
            if !background.contains(pair) {
                return Err(UniverseError::PairOutsideBackground { pair: pair.clone() });
            }
            closed.insert(pair.clone());
        }
        loop {
            let mut composed = Vec::new();
            for (a, b) in &closed {
                for (b2, c) in closed.range((b.clone(), String::new())..) {
                    if b2 != b {
                        break;
                    }
                    let pair = (a.clone(), c.clone());
                    if !closed.contains(&pair) {
                        composed.push(pair);
                    }
                }
            }
            if composed.is_empty() {
                return Ok(closed);
            }
            closed.extend(composed);
        }
    }

    fn check_order(&self) -> Result<(), UniverseError> {
        let elements: BTreeSet<&String> = self.elements.iter().collect();
        let relation = self.relation_set();
        if relation.len() != self.relation.len() {
            let mut seen = BTreeSet::new();
            for (a, b) in &self.relation {
                if !seen.insert((a, b)) {
                    return Err(UniverseError::DuplicateId {
                        component: Self::RELATION.into(),
                        key: pair_key(a, b),
                    });
                }
            }
        }
        for (a, b) in &relation {
            for end in [a, b] {
                if !elements.contains(end) {
                    return Err(UniverseError::DanglingReference {
                        item: format!("pair ({a}, {b})"),
                        missing: format!("element {end}"),
                    });
                }
            }
        }
        let mut sorted: Vec<&String> = elements.into_iter().collect();
        sorted.sort();
        for a in &sorted {
            if !relation.contains(&((*a).clone(), (*a).clone())) {
                return Err(UniverseError::NotAPartialOrder {
                    axiom: PosetAxiom::Reflexivity,
                    witness: ((*a).clone(), (*a).clone()),
                });
            }
        }
        for (a, b) in &relation {
            if a != b && relation.contains(&(b.clone(), a.clone())) {
                return Err(UniverseError::NotAPartialOrder {
                    axiom: PosetAxiom::AntiSymmetry,
                    witness: (a.clone(), b.clone()),
                });
            }
        }
        for (a, b) in &relation {
            for (b2, c) in relation.range((b.clone(), String::new())..) {
                if b2 != b {
                    break;
                }
                if !relation.contains(&(a.clone(), c.clone())) {
                    return Err(UniverseError::NotAPartialOrder {
                        axiom: PosetAxiom::Transitivity,
                        witness: (a.clone(), c.clone()),
                    });
                }
            }
        }
        Ok(())
    }
}

impl Structure for PosetCarrier {
    fn kind(&self) -> Kind {
        Kind::Poset
    }

    fn components(&self) -> Vec<String> {
        vec![Self::ELEMENTS.to_string(), Self::RELATION.to_string()]
    }

    fn layout(&self) -> Result<Layout, UniverseError> {
        check_unique(Self::ELEMENTS, &self.elements)?;
        self.check_order()?;
        let pair = |a: &str, b: &str| ElementId::new(Self::RELATION, pair_key(a, b));

        let mut layout = Layout::default();
        for a in &self.elements {
            let id = ElementId::new(Self::ELEMENTS, a.clone());
            layout.requires.push((id.clone(), pair(a, a)));
            layout.elements.push(id);
        }
        let relation = self.relation_set();
        for (a, b) in &relation {
            let id = pair(a, b);
            layout
                .requires
                .push((id.clone(), ElementId::new(Self::ELEMENTS, a.clone())));
            layout
                .requires
                .push((id.clone(), ElementId::new(Self::ELEMENTS, b.clone())));
            layout.elements.push(id);
            if a == b {
                continue;
            }
            for (b2, c) in relation.range((b.clone(), String::new())..) {
                if b2 != b {
                    break;
                }
                if b != c {
                    layout.joins.push((pair(a, b), pair(b, c), pair(a, c)));
                }
            }
        }
        Ok(layout)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    #[test]
    fn closure_adds_composite() {
        let chain = PosetCarrier::chain(["a", "b", "c"]);
        let closed = chain.closure(&[p("a", "b"), p("b", "c")]).unwrap();
        let expected: Relation = [p("a", "b"), p("b", "c"), p("a", "c")].into_iter().collect();
        assert_eq!(closed, expected);
    }

    #[test]
    fn closure_is_idempotent_and_trivial_on_empty() {
        let chain = PosetCarrier::chain(["a", "b", "c"]);
        assert!(chain.closure(&[]).unwrap().is_empty());
        let once: Vec<_> = chain
            .closure(&[p("a", "b"), p("b", "c")])
            .unwrap()
            .into_iter()
            .collect();
        let twice: Vec<_> = chain.closure(&once).unwrap().into_iter().collect();
        assert_eq!(once, twice);
    }

    #[test]
    fn closure_rejects_foreign_pairs() {
        let chain = PosetCarrier::chain(["a", "b"]);
        assert_eq!(
            chain.closure(&[p("b", "a")]),
            Err(UniverseError::PairOutsideBackground { pair: p("b", "a") })
        );
    }

    #[test]
    fn anti_symmetry_violation_names_witness() {
        let carrier = PosetCarrier {
            elements: vec!["a".into(), "b".into()],
            relation: vec![p("a", "a"), p("b", "b"), p("a", "b"), p("b", "a")],
        };
        assert_eq!(
            carrier.layout().unwrap_err(),
            UniverseError::NotAPartialOrder {
                axiom: PosetAxiom::AntiSymmetry,
                witness: p("a", "b"),
            }
        );
    }

    #[test]
    fn missing_reflexive_and_transitive_pairs() {
        let carrier = PosetCarrier {
            elements: vec!["a".into()],
            relation: vec![],
        };
        assert!(matches!(
            carrier.layout(),
            Err(UniverseError::NotAPartialOrder {
                axiom: PosetAxiom::Reflexivity,
                ..
            })
        ));
        let mut chain = PosetCarrier::chain(["a", "b", "c"]);
        chain.relation.retain(|pair| pair != &p("a", "c"));
        assert_eq!(
            chain.layout().unwrap_err(),
            UniverseError::NotAPartialOrder {
                axiom: PosetAxiom::Transitivity,
                witness: p("a", "c"),
            }
        );
    }
}
