//! Filters, ideals and prime separation.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::nearlattice::Nearlattice;
use crate::set::ElemSet;
use crate::ElementId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("filter must contain the top element")]
    MissingTop,
    #[error("not upward closed: {x} is a member, {y} >= {x} is not")]
    NotUpward { x: ElementId, y: ElementId },
    #[error("not closed under existing meets: {x} ∧ {y} is not a member")]
    NotMeetClosed { x: ElementId, y: ElementId },
    #[error("ideal must be nonempty")]
    EmptyIdeal,
    #[error("not downward closed: {x} is a member, {y} <= {x} is not")]
    NotDownward { x: ElementId, y: ElementId },
    #[error("not closed under join: {x} ∨ {y} is not a member")]
    NotJoinClosed { x: ElementId, y: ElementId },
    #[error("element {x} is not in the carrier")]
    OutOfRange { x: ElementId },
}

/// An upward-closed set containing the top and closed under the meets that
/// exist.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Filter(ElemSet);

impl Filter {
    pub fn new(nl: &Nearlattice, members: ElemSet) -> Result<Self, FilterError> {
        if let Some(x) = members.iter().find(|&x| x >= nl.size()) {
            return Err(FilterError::OutOfRange { x });
        }
        if !members.contains(nl.top()) {
            return Err(FilterError::MissingTop);
        }
        for x in &members {
            if let Some(y) = nl.upset(x).difference(&members).first() {
                return Err(FilterError::NotUpward { x, y });
            }
        }
        for x in &members {
            for y in &members {
                if nl.meet(x, y).is_some_and(|m| !members.contains(m)) {
                    return Err(FilterError::NotMeetClosed { x, y });
                }
            }
        }
        Ok(Self(members))
    }

    pub(crate) fn new_unchecked(members: ElemSet) -> Self {
        Self(members)
    }

    pub fn members(&self) -> &ElemSet {
        &self.0
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.0.contains(x)
    }

    /// `F ∩ G`, again a filter.
    pub fn intersection(&self, other: &Filter) -> Filter {
        Filter(self.0.intersection(&other.0))
    }
}

/// A nonempty downward-closed set closed under join.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal(ElemSet);

impl Ideal {
    pub fn new(nl: &Nearlattice, members: ElemSet) -> Result<Self, FilterError> {
        if let Some(x) = members.iter().find(|&x| x >= nl.size()) {
            return Err(FilterError::OutOfRange { x });
        }
        if members.is_empty() {
            return Err(FilterError::EmptyIdeal);
        }
        for x in &members {
            if let Some(y) = nl.downset(x).difference(&members).first() {
                return Err(FilterError::NotDownward { x, y });
            }
        }
        for x in &members {
            for y in &members {
                if !members.contains(nl.join(x, y)) {
                    return Err(FilterError::NotJoinClosed { x, y });
                }
            }
        }
        Ok(Self(members))
    }

    /// The principal ideal `(x]`.
    pub fn principal(nl: &Nearlattice, x: ElementId) -> Self {
        Self(nl.downset(x).clone())
    }

    pub fn members(&self) -> &ElemSet {
        &self.0
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.0.contains(x)
    }
}

/// The least filter containing `generators`.
pub fn filter_generated(nl: &Nearlattice, generators: &ElemSet) -> Filter {
    let mut current = generators.clone();
    current.insert(nl.top());
    loop {
        let mut next = nl.order().upset_closure(&current);
        let members: Vec<_> = next.iter().collect();
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                if let Some(m) = nl.meet(x, y) {
                    next.insert(m);
                }
            }
        }
        if next == current {
            return Filter(current);
        }
        current = next;
    }
}

/// `F ⋎ G`, the filter generated by `F ∪ G`.
pub fn filter_join(nl: &Nearlattice, f: &Filter, g: &Filter) -> Filter {
    filter_generated(nl, &f.0.union(&g.0))
}

/// The principal filter `[x)`.
pub fn principal_filter(nl: &Nearlattice, x: ElementId) -> Filter {
    Filter(nl.upset(x).clone())
}

/// Every filter of `nl`, in ascending bit-pattern order.
///
/// Filters are reached from `{1}` by repeatedly adjoining one element and
/// closing; every filter is the closure of its own members, so the search
/// is complete.
pub fn all_filters(nl: &Nearlattice) -> Vec<Filter> {
    let bottom = filter_generated(nl, &ElemSet::new());
    let mut seen = BTreeSet::from([bottom.clone()]);
    let mut stack = vec![bottom];
    while let Some(f) = stack.pop() {
        for x in f.0.complement(nl.size()).iter() {
            let mut gens = f.0.clone();
            gens.insert(x);
            let g = filter_generated(nl, &gens);
            if seen.insert(g.clone()) {
                stack.push(g);
            }
        }
    }
    seen.into_iter().collect()
}

/// Every ideal of `nl` in ascending bit-pattern order. In a finite
/// join-semilattice each ideal contains the join of its members, so the
/// ideals are exactly the principal downsets.
pub fn all_ideals(nl: &Nearlattice) -> Vec<Ideal> {
    let mut out: Vec<Ideal> = (0..nl.size()).map(|x| Ideal::principal(nl, x)).collect();
    out.sort();
    out
}

/// Proper, and whenever `x ∧ y` exists and lies in the ideal, `x` or `y`
/// does.
pub fn is_prime_ideal(nl: &Nearlattice, ideal: &Ideal) -> bool {
    if ideal.0.len() == nl.size() {
        return false;
    }
    for x in 0..nl.size() {
        for y in x + 1..nl.size() {
            if let Some(m) = nl.meet(x, y) {
                if ideal.contains(m) && !ideal.contains(x) && !ideal.contains(y) {
                    return false;
                }
            }
        }
    }
    true
}

/// A prime ideal containing `ideal` and disjoint from `filter`: the first
/// in ascending bit-pattern order. `None` when the two already meet.
pub fn prime_separation(nl: &Nearlattice, ideal: &Ideal, filter: &Filter) -> Option<Ideal> {
    if !ideal.0.is_disjoint(&filter.0) {
        return None;
    }
    all_ideals(nl)
        .into_iter()
        .find(|p| ideal.0.is_subset(&p.0) && p.0.is_disjoint(&filter.0) && is_prime_ideal(nl, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nearlattice::fixtures::*;

    fn set(xs: &[ElementId]) -> ElemSet {
        xs.iter().copied().collect()
    }

    fn members(fs: &[Filter]) -> Vec<Vec<ElementId>> {
        fs.iter().map(|f| f.members().iter().collect()).collect()
    }

    #[test]
    fn generated_examples() {
        // vee: a=0, b=1, 1=2; diamond: 0, a=1, b=2, 1=3
        assert_eq!(filter_generated(&vee(), &set(&[0, 1])).members(), &set(&[0, 1, 2]));
        assert_eq!(filter_generated(&diamond(), &set(&[1, 2])).members(), &ElemSet::full(4));
        for nl in [one(), chain3(), vee(), diamond()] {
            assert_eq!(
                filter_generated(&nl, &ElemSet::new()).members(),
                &ElemSet::singleton(nl.top())
            );
        }
    }

    #[test]
    fn all_filters_examples() {
        assert_eq!(
            members(&all_filters(&chain3())),
            vec![vec![2], vec![1, 2], vec![0, 1, 2]]
        );
        assert_eq!(
            members(&all_filters(&vee())),
            vec![vec![2], vec![0, 2], vec![1, 2], vec![0, 1, 2]]
        );
        assert_eq!(all_filters(&one()).len(), 1);
    }

    #[test]
    fn all_filters_matches_subset_scan() {
        for nl in [one(), chain2(), chain3(), vee(), diamond(), vee3()] {
            let brute: Vec<Filter> = (0u64..1 << nl.size())
                .filter_map(|b| Filter::new(&nl, ElemSet::from_bits(b)).ok())
                .collect();
            assert_eq!(all_filters(&nl), brute);
        }
    }

    #[test]
    fn join_examples() {
        let v = vee();
        let fa = principal_filter(&v, 0);
        let fb = principal_filter(&v, 1);
        assert_eq!(filter_join(&v, &fa, &fb).members(), &set(&[0, 1, 2]));
        let d = diamond();
        let ja = filter_join(&d, &principal_filter(&d, 1), &principal_filter(&d, 2));
        assert_eq!(ja.members(), &ElemSet::full(4));
        let bottom = filter_generated(&d, &ElemSet::new());
        for f in all_filters(&d) {
            assert_eq!(filter_join(&d, &f, &bottom), f);
        }
    }

    #[test]
    fn validation_errors() {
        let d = diamond();
        assert_eq!(Filter::new(&d, set(&[1])), Err(FilterError::MissingTop));
        assert_eq!(
            Filter::new(&d, set(&[0, 3])),
            Err(FilterError::NotUpward { x: 0, y: 1 })
        );
        assert_eq!(
            Filter::new(&d, set(&[1, 2, 3])),
            Err(FilterError::NotMeetClosed { x: 1, y: 2 })
        );
        assert_eq!(Ideal::new(&d, ElemSet::new()), Err(FilterError::EmptyIdeal));
        assert_eq!(Ideal::new(&d, set(&[1])), Err(FilterError::NotDownward { x: 1, y: 0 }));
        assert_eq!(
            Ideal::new(&d, set(&[0, 1, 2])),
            Err(FilterError::NotJoinClosed { x: 1, y: 2 })
        );
        assert!(Ideal::new(&d, set(&[0, 1])).is_ok());
        assert_eq!(Filter::new(&d, set(&[3, 9])), Err(FilterError::OutOfRange { x: 9 }));
    }

    #[test]
    fn ideals_are_principal() {
        for nl in [one(), chain3(), vee(), diamond(), vee3()] {
            let brute: Vec<Ideal> = (0u64..1 << nl.size())
                .filter_map(|b| Ideal::new(&nl, ElemSet::from_bits(b)).ok())
                .collect();
            assert_eq!(all_ideals(&nl), brute);
        }
    }

    #[test]
    fn prime_examples() {
        let c = chain3();
        assert!(is_prime_ideal(&c, &Ideal::new(&c, set(&[0, 1])).unwrap()));
        assert!(!is_prime_ideal(&c, &Ideal::principal(&c, 2)));
        let d = diamond();
        assert!(is_prime_ideal(&d, &Ideal::new(&d, set(&[0, 1])).unwrap()));
        assert!(!is_prime_ideal(&d, &Ideal::principal(&d, 0)));
    }

    #[test]
    fn separation_examples() {
        let c = chain3();
        let p = prime_separation(&c, &Ideal::principal(&c, 0), &principal_filter(&c, 2)).unwrap();
        assert_eq!(p.members(), &set(&[0]));
        let v = vee();
        let i = Ideal::new(&v, set(&[0])).unwrap();
        let p = prime_separation(&v, &i, &principal_filter(&v, 1)).unwrap();
        assert_eq!(p.members(), &set(&[0]));
        assert!(prime_separation(&c, &Ideal::principal(&c, 1), &principal_filter(&c, 1)).is_none());
    }
}
