//! Element classification: dual atoms, boolean, dense and complemented
//! elements, annihilators and the projection onto the boolean elements.

use serde::Serialize;
use thiserror::Error;

use crate::filters::{filter_join, principal_filter, Filter};
use crate::nearlattice::Nearlattice;
use crate::set::ElemSet;
use crate::ElementId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("NotBooleanBase: [{a}) is not a boolean lattice")]
    NotBooleanBase { a: ElementId },
    #[error("NotInUpset: {x} is not above {a}")]
    NotInUpset { a: ElementId, x: ElementId },
    #[error("complement of {x} in [{a}) is not unique: {first} and {second}")]
    ComplementNotUnique {
        a: ElementId,
        x: ElementId,
        first: ElementId,
        second: ElementId,
    },
    #[error("{x} has no complement in [{a})")]
    NoComplement { a: ElementId, x: ElementId },
}

/// Elements `a != 1` covered only by the top.
pub fn dual_atoms(nl: &Nearlattice) -> ElemSet {
    let top = nl.top();
    (0..nl.size()).filter(|&a| a != top && nl.upset(a).len() == 2).collect()
}

/// `X_a`: the dual atoms above `a`.
pub fn x_set(nl: &Nearlattice, a: ElementId) -> ElemSet {
    dual_atoms(nl).intersection(nl.upset(a))
}

fn complements_in(nl: &Nearlattice, a: ElementId, x: ElementId) -> impl Iterator<Item = ElementId> + '_ {
    nl.upset(a)
        .clone()
        .into_iter()
        .filter(move |&y| nl.join(x, y) == nl.top() && nl.meet(x, y) == Some(a))
}

/// Whether `[a)` is a boolean lattice: every member has a complement in it.
pub fn is_boolean_element(nl: &Nearlattice, a: ElementId) -> bool {
    nl.upset(a).iter().all(|x| complements_in(nl, a, x).next().is_some())
}

pub fn boolean_elements(nl: &Nearlattice) -> ElemSet {
    (0..nl.size()).filter(|&a| is_boolean_element(nl, a)).collect()
}

/// `¬_a x`, the complement of `x` in the boolean lattice `[a)`.
pub fn complement_in(nl: &Nearlattice, a: ElementId, x: ElementId) -> Result<ElementId, StructureError> {
    if !is_boolean_element(nl, a) {
        return Err(StructureError::NotBooleanBase { a });
    }
    if !nl.leq(a, x) {
        return Err(StructureError::NotInUpset { a, x });
    }
    let mut found = complements_in(nl, a, x);
    let first = found.next().ok_or(StructureError::NoComplement { a, x })?;
    if let Some(second) = found.next() {
        return Err(StructureError::ComplementNotUnique { a, x, first, second });
    }
    Ok(first)
}

/// `a^⊤ = {x : a ∨ x = 1}`, always a filter.
pub fn annihilator(nl: &Nearlattice, a: ElementId) -> Filter {
    Filter::new_unchecked((0..nl.size()).filter(|&x| nl.join(a, x) == nl.top()).collect())
}

/// Elements with `a^⊤ = {1}`.
pub fn dense_elements(nl: &Nearlattice) -> ElemSet {
    let only_top = ElemSet::singleton(nl.top());
    (0..nl.size())
        .filter(|&a| annihilator(nl, a).members() == &only_top)
        .collect()
}

/// Elements with `[a) ⋎ a^⊤ = A` in the filter lattice.
pub fn complemented_elements(nl: &Nearlattice) -> ElemSet {
    let carrier = nl.carrier();
    (0..nl.size())
        .filter(|&a| filter_join(nl, &principal_filter(nl, a), &annihilator(nl, a)).members() == &carrier)
        .collect()
}

/// `π(a) = ⋀ X_a`, with the empty meet equal to the top.
pub fn pi(nl: &Nearlattice, a: ElementId) -> ElementId {
    nl.meet_of_set(&x_set(nl, a))
        .expect("dual atoms above an element always have a meet")
}

pub fn is_semi_boolean(nl: &Nearlattice) -> bool {
    boolean_elements(nl).len() == nl.size()
}

/// Elements complemented in the classical sense of a bounded lattice:
/// `a ∧ b = 0` and `a ∨ b = 1` for some `b`. Empty when `nl` has no bottom.
pub fn classically_complemented(nl: &Nearlattice) -> ElemSet {
    let Some(bottom) = nl.bottom() else {
        return ElemSet::new();
    };
    (0..nl.size())
        .filter(|&a| (0..nl.size()).any(|b| nl.join(a, b) == nl.top() && nl.meet(a, b) == Some(bottom)))
        .collect()
}

/// Everything the classification operations compute for one nearlattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementClassification {
    pub dual_atoms: ElemSet,
    pub boolean_elements: ElemSet,
    pub complemented_elements: ElemSet,
    pub dense_elements: ElemSet,
    pub pi_table: Vec<ElementId>,
}

impl ElementClassification {
    pub fn of(nl: &Nearlattice) -> Self {
        Self {
            dual_atoms: dual_atoms(nl),
            boolean_elements: boolean_elements(nl),
            complemented_elements: complemented_elements(nl),
            dense_elements: dense_elements(nl),
            pi_table: (0..nl.size()).map(|a| pi(nl, a)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nearlattice::fixtures::*;

    fn set(xs: &[ElementId]) -> ElemSet {
        xs.iter().copied().collect()
    }

    // chain3: 0, a=1, 1=2. vee: a=0, b=1, 1=2. diamond: 0, a=1, b=2, 1=3.

    #[test]
    fn dual_atom_examples() {
        assert_eq!(dual_atoms(&chain3()), set(&[1]));
        assert_eq!(dual_atoms(&vee()), set(&[0, 1]));
        assert_eq!(dual_atoms(&diamond()), set(&[1, 2]));
        assert!(dual_atoms(&one()).is_empty());
    }

    #[test]
    fn x_set_examples() {
        for nl in [chain3(), vee(), diamond()] {
            assert!(x_set(&nl, nl.top()).is_empty());
        }
        assert_eq!(x_set(&chain3(), 0), set(&[1]));
        assert_eq!(x_set(&diamond(), 1), set(&[1]));
        assert_eq!(x_set(&diamond(), 0), set(&[1, 2]));
    }

    #[test]
    fn boolean_examples() {
        for nl in [one(), chain3(), vee(), diamond()] {
            assert!(is_boolean_element(&nl, nl.top()));
        }
        assert!(!is_boolean_element(&chain3(), 0));
        assert!(is_boolean_element(&diamond(), 0));
        assert_eq!(boolean_elements(&chain3()), set(&[1, 2]));
        assert_eq!(boolean_elements(&vee()), set(&[0, 1, 2]));
        assert_eq!(boolean_elements(&diamond()), ElemSet::full(4));
    }

    #[test]
    fn complement_examples() {
        let d = diamond();
        assert_eq!(complement_in(&d, 0, 1), Ok(2));
        for nl in [one(), chain3(), vee(), diamond()] {
            for a in boolean_elements(&nl).iter() {
                assert_eq!(complement_in(&nl, a, nl.top()), Ok(a));
            }
        }
        assert_eq!(
            complement_in(&chain3(), 0, 1),
            Err(StructureError::NotBooleanBase { a: 0 })
        );
        assert_eq!(complement_in(&d, 1, 2), Err(StructureError::NotInUpset { a: 1, x: 2 }));
    }

    #[test]
    fn annihilator_examples() {
        for nl in [one(), chain3(), vee(), diamond()] {
            assert_eq!(annihilator(&nl, nl.top()).members(), &nl.carrier());
            for a in 0..nl.size() {
                assert!(Filter::new(&nl, annihilator(&nl, a).members().clone()).is_ok());
            }
        }
        assert_eq!(annihilator(&vee(), 0).members(), &set(&[1, 2]));
        assert_eq!(annihilator(&chain3(), 0).members(), &set(&[2]));
    }

    #[test]
    fn dense_examples() {
        assert_eq!(dense_elements(&chain3()), set(&[0, 1]));
        assert!(dense_elements(&vee()).is_empty());
        assert_eq!(dense_elements(&diamond()), set(&[0]));
    }

    #[test]
    fn complemented_examples() {
        assert_eq!(complemented_elements(&chain3()), set(&[0, 2]));
        assert_eq!(complemented_elements(&diamond()), ElemSet::full(4));
        assert_eq!(complemented_elements(&vee()), ElemSet::full(3));
        assert_eq!(classically_complemented(&diamond()), ElemSet::full(4));
        assert_eq!(classically_complemented(&chain3()), set(&[0, 2]));
    }

    #[test]
    fn pi_examples() {
        assert_eq!(pi(&chain3(), 0), 1);
        assert_eq!(pi(&vee(), 0), 0);
        for nl in [one(), chain3(), vee(), diamond(), vee3()] {
            for b in boolean_elements(&nl).iter() {
                assert_eq!(pi(&nl, b), b);
            }
        }
    }

    #[test]
    fn semi_boolean_examples() {
        assert!(is_semi_boolean(&vee()));
        assert!(!is_semi_boolean(&chain3()));
        assert!(is_semi_boolean(&one()));
        assert!(is_semi_boolean(&vee3()));
    }

    #[test]
    fn classification_record() {
        let c = ElementClassification::of(&chain3());
        assert!(c.dual_atoms.is_subset(&c.boolean_elements));
        assert_eq!(c.pi_table, vec![1, 1, 2]);
    }
}
