//! Finite posets, downsets and upsets.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::set::ElemSet;
use crate::ElementId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("relation table is not {size}x{size}")]
    Shape { size: usize },
    #[error("not reflexive: {x} </= {x}")]
    NotReflexive { x: ElementId },
    #[error("not antisymmetric: {x} <= {y} and {y} <= {x}")]
    NotAntisymmetric { x: ElementId, y: ElementId },
    #[error("not transitive: {x} <= {y} <= {z} but {x} </= {z}")]
    NotTransitive { x: ElementId, y: ElementId, z: ElementId },
    #[error("element {x} out of range for a carrier of size {size}")]
    OutOfRange { x: ElementId, size: usize },
}

/// A finite partial order on `0..size`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    size: usize,
    leq: Vec<bool>,
    labels: Option<Vec<String>>,
    ups: Vec<ElemSet>,
    downs: Vec<ElemSet>,
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Poset")
            .field("size", &self.size)
            .field("covers", &self.covering_pairs())
            .finish()
    }
}

/// Checks a `size`x`size` truth table and wraps it as a [`Poset`].
pub fn validate_poset(size: usize, leq: &[Vec<bool>]) -> Result<Poset, OrderError> {
    if leq.len() != size || leq.iter().any(|row| row.len() != size) {
        return Err(OrderError::Shape { size });
    }
    for x in 0..size {
        if !leq[x][x] {
            return Err(OrderError::NotReflexive { x });
        }
    }
    for x in 0..size {
        for y in x + 1..size {
            if leq[x][y] && leq[y][x] {
                return Err(OrderError::NotAntisymmetric { x, y });
            }
        }
    }
    for x in 0..size {
        for y in 0..size {
            if !leq[x][y] {
                continue;
            }
            for z in 0..size {
                if leq[y][z] && !leq[x][z] {
                    return Err(OrderError::NotTransitive { x, y, z });
                }
            }
        }
    }
    Ok(Poset::from_table_unchecked(
        size,
        leq.iter().flatten().copied().collect(),
    ))
}

impl Poset {
    fn from_table_unchecked(size: usize, leq: Vec<bool>) -> Self {
        let ups = (0..size)
            .map(|x| (0..size).filter(|&y| leq[x * size + y]).collect())
            .collect();
        let downs = (0..size)
            .map(|x| (0..size).filter(|&y| leq[y * size + x]).collect())
            .collect();
        Self {
            size,
            leq,
            labels: None,
            ups,
            downs,
        }
    }

    /// Builds a poset from a predicate already known to be a partial order.
    pub(crate) fn from_fn(size: usize, f: impl Fn(ElementId, ElementId) -> bool) -> Self {
        let leq = (0..size)
            .flat_map(|x| (0..size).map(move |y| (x, y)))
            .map(|(x, y)| f(x, y));
        Self::from_table_unchecked(size, leq.collect())
    }

    /// Reflexive-transitive closure of `pairs`, then validated (antisymmetry
    /// is the only law that can fail).
    pub fn from_pairs(size: usize, pairs: &[(ElementId, ElementId)]) -> Result<Self, OrderError> {
        let mut table = vec![vec![false; size]; size];
        for (x, row) in table.iter_mut().enumerate() {
            row[x] = true;
        }
        for &(x, y) in pairs {
            for v in [x, y] {
                if v >= size {
                    return Err(OrderError::OutOfRange { x: v, size });
                }
            }
            table[x][y] = true;
        }
        for k in 0..size {
            for i in 0..size {
                if table[i][k] {
                    for j in 0..size {
                        if table[k][j] {
                            table[i][j] = true;
                        }
                    }
                }
            }
        }
        validate_poset(size, &table)
    }

    pub fn antichain(size: usize) -> Self {
        Self::from_fn(size, |x, y| x == y)
    }

    pub fn chain(size: usize) -> Self {
        Self::from_fn(size, |x, y| x <= y)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.size, "one label per element");
        self.labels = Some(labels);
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, x: ElementId, y: ElementId) -> bool {
        self.leq[x * self.size + y]
    }

    pub fn lt(&self, x: ElementId, y: ElementId) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: ElementId) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.size)
    }

    /// `[x) = {y : x <= y}`.
    pub fn principal_upset(&self, x: ElementId) -> &ElemSet {
        &self.ups[x]
    }

    /// `(x] = {y : y <= x}`.
    pub fn principal_downset(&self, x: ElementId) -> &ElemSet {
        &self.downs[x]
    }

    pub fn is_downset(&self, s: &ElemSet) -> bool {
        s.bound() <= self.size && s.iter().all(|y| self.downs[y].is_subset(s))
    }

    pub fn is_upset(&self, s: &ElemSet) -> bool {
        s.bound() <= self.size && s.iter().all(|y| self.ups[y].is_subset(s))
    }

    pub fn downset_closure(&self, s: &ElemSet) -> ElemSet {
        s.iter().fold(ElemSet::new(), |acc, x| acc.union(&self.downs[x]))
    }

    pub fn upset_closure(&self, s: &ElemSet) -> ElemSet {
        s.iter().fold(ElemSet::new(), |acc, x| acc.union(&self.ups[x]))
    }

    /// Whether `y` covers `x`.
    pub fn covers(&self, x: ElementId, y: ElementId) -> bool {
        self.lt(x, y) && !(0..self.size).any(|z| self.lt(x, z) && self.lt(z, y))
    }

    /// Covering pairs `(lower, upper)` in lexicographic order.
    pub fn covering_pairs(&self) -> Vec<(ElementId, ElementId)> {
        let mut out = Vec::new();
        for x in 0..self.size {
            for y in 0..self.size {
                if self.covers(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn minimal_elements(&self, s: &ElemSet) -> ElemSet {
        s.iter()
            .filter(|&x| s.iter().all(|y| y == x || !self.leq(y, x)))
            .collect()
    }

    pub fn maximal_elements(&self, s: &ElemSet) -> ElemSet {
        s.iter()
            .filter(|&x| s.iter().all(|y| y == x || !self.leq(x, y)))
            .collect()
    }

    /// The sub-poset on `members`, re-indexed in ascending order.
    pub fn restrict(&self, members: &[ElementId]) -> Poset {
        let sub = Poset::from_fn(members.len(), |i, j| self.leq(members[i], members[j]));
        match &self.labels {
            Some(l) => sub.with_labels(members.iter().map(|&m| l[m].clone()).collect()),
            None => sub,
        }
    }

    /// The order-dual poset.
    pub fn dual(&self) -> Poset {
        Poset::from_fn(self.size, |x, y| self.leq(y, x))
    }

    /// Canonical code of the order up to isomorphism, for posets with at
    /// most 8 elements.
    ///
    /// Elements are grouped by `(|down|, |up|)`; the code is the minimal
    /// row-major bit matrix over all relabelings that list the groups in
    /// ascending order.
    pub fn canonical_code(&self) -> (Vec<(usize, usize)>, u64) {
        assert!(self.size <= 8, "canonical codes are limited to 8 elements");
        let n = self.size;
        let key = |x: ElementId| (self.downs[x].len(), self.ups[x].len());
        let mut order: Vec<ElementId> = (0..n).collect();
        order.sort_by_key(|&x| key(x));
        let invariant: Vec<_> = order.iter().map(|&x| key(x)).collect();
        let mut best = u64::MAX;
        let mut perm = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.search_code(&invariant, &key, &mut perm, &mut used, &mut best);
        (invariant, best)
    }

    fn search_code(
        &self,
        invariant: &[(usize, usize)],
        key: &dyn Fn(ElementId) -> (usize, usize),
        perm: &mut Vec<ElementId>,
        used: &mut [bool],
        best: &mut u64,
    ) {
        let n = self.size;
        let pos = perm.len();
        if pos == n {
            let mut code = 0u64;
            for i in 0..n {
                for j in 0..n {
                    if self.leq(perm[i], perm[j]) {
                        code |= 1 << (i * n + j);
                    }
                }
            }
            *best = (*best).min(code);
            return;
        }
        for x in 0..n {
            if !used[x] && key(x) == invariant[pos] {
                used[x] = true;
                perm.push(x);
                self.search_code(invariant, key, perm, used, best);
                perm.pop();
                used[x] = false;
            }
        }
    }
}

/// A downward-closed subset of some poset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Downset(ElemSet);

impl Downset {
    pub fn new(poset: &Poset, members: ElemSet) -> Result<Self, ElemSet> {
        if poset.is_downset(&members) {
            Ok(Self(members))
        } else {
            Err(members)
        }
    }

    pub(crate) fn new_unchecked(members: ElemSet) -> Self {
        Self(members)
    }

    pub fn members(&self) -> &ElemSet {
        &self.0
    }

    pub fn into_members(self) -> ElemSet {
        self.0
    }
}

/// All downsets of `poset` in ascending bit-pattern order.
pub fn enumerate_downsets(poset: &Poset) -> Vec<Downset> {
    // A linear extension: an element never precedes anything below it.
    let mut linear: Vec<ElementId> = (0..poset.size()).collect();
    linear.sort_by_key(|&x| poset.principal_downset(x).len());
    let mut out = Vec::new();
    let mut current = ElemSet::new();
    extend_downsets(poset, &linear, 0, &mut current, &mut out);
    out.sort();
    out
}

fn extend_downsets(poset: &Poset, linear: &[ElementId], i: usize, current: &mut ElemSet, out: &mut Vec<Downset>) {
    if i == linear.len() {
        out.push(Downset(current.clone()));
        return;
    }
    let x = linear[i];
    extend_downsets(poset, linear, i + 1, current, out);
    let mut strict = poset.principal_downset(x).clone();
    strict.remove(x);
    if strict.is_subset(current) {
        current.insert(x);
        extend_downsets(poset, linear, i + 1, current, out);
        current.remove(x);
    }
}

/// `[x)` as a standalone function over [`Poset`].
pub fn principal_upset(poset: &Poset, x: ElementId) -> ElemSet {
    poset.principal_upset(x).clone()
}

/// `(x]` as a standalone function over [`Poset`].
pub fn principal_downset(poset: &Poset, x: ElementId) -> ElemSet {
    poset.principal_downset(x).clone()
}

/// All posets on `n` elements up to isomorphism, ordered by canonical code.
///
/// Every poset arises from a smaller one by adding a new maximal element
/// whose strict downset is a downset of the smaller poset; duplicates are
/// removed by canonical code.
pub fn enumerate_posets(n: usize) -> Vec<Poset> {
    assert!(n <= 8, "poset enumeration is limited to 8 elements");
    let mut level: Vec<Poset> = vec![Poset::antichain(0)];
    for k in 1..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for p in &level {
            for d in enumerate_downsets(p) {
                let below = d.members();
                let q = Poset::from_fn(k, |x, y| {
                    if y == k - 1 {
                        x == k - 1 || below.contains(x)
                    } else {
                        x != k - 1 && p.leq(x, y)
                    }
                });
                let code = q.canonical_code();
                if seen.insert(code.clone()) {
                    next.push((code, q));
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next.into_iter().map(|(_, q)| q).collect();
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(size: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut t = vec![vec![false; size]; size];
        for &(x, y) in pairs {
            t[x][y] = true;
        }
        t
    }

    fn vee_poset() -> Poset {
        // x=0, y=1, z=2 with x<z, y<z
        Poset::from_pairs(3, &[(0, 2), (1, 2)]).unwrap()
    }

    fn sets(ds: &[Downset]) -> Vec<Vec<usize>> {
        ds.iter().map(|d| d.members().iter().collect()).collect()
    }

    #[test]
    fn validate_examples() {
        let id = table(3, &[(0, 0), (1, 1), (2, 2)]);
        let p = validate_poset(3, &id).unwrap();
        assert!((0..3).all(|x| (0..3).all(|y| p.leq(x, y) == (x == y))));

        // 0 <= a <= 1 with indices 0, 1, 2
        let chain = table(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)]);
        assert!(validate_poset(3, &chain).is_ok());

        let broken = table(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]);
        assert_eq!(
            validate_poset(3, &broken),
            Err(OrderError::NotTransitive { x: 0, y: 1, z: 2 })
        );
    }

    #[test]
    fn validate_errors() {
        assert_eq!(
            validate_poset(2, &table(2, &[(0, 0)])),
            Err(OrderError::NotReflexive { x: 1 })
        );
        assert_eq!(
            validate_poset(2, &table(2, &[(0, 0), (1, 1), (0, 1), (1, 0)])),
            Err(OrderError::NotAntisymmetric { x: 0, y: 1 })
        );
        assert_eq!(validate_poset(2, &table(3, &[])), Err(OrderError::Shape { size: 2 }));
    }

    #[test]
    fn downset_examples() {
        assert_eq!(
            sets(&enumerate_downsets(&Poset::antichain(2))),
            vec![vec![], vec![0], vec![1], vec![0, 1]]
        );
        assert_eq!(
            sets(&enumerate_downsets(&Poset::chain(3))),
            vec![vec![], vec![0], vec![0, 1], vec![0, 1, 2]]
        );
        assert_eq!(
            sets(&enumerate_downsets(&vee_poset())),
            vec![vec![], vec![0], vec![1], vec![0, 1], vec![0, 1, 2]]
        );
        assert_eq!(enumerate_downsets(&Poset::antichain(0)).len(), 1);
    }

    #[test]
    fn downsets_match_subset_scan() {
        for n in 0..=5 {
            for p in enumerate_posets(n) {
                let brute: Vec<Downset> = (0u64..1 << n)
                    .map(ElemSet::from_bits)
                    .filter(|s| s.iter().all(|y| (0..n).all(|x| !p.leq(x, y) || s.contains(x))))
                    .map(Downset)
                    .collect();
                assert_eq!(enumerate_downsets(&p), brute);
            }
        }
    }

    #[test]
    fn principal_examples() {
        let c = Poset::chain(3);
        assert_eq!(principal_upset(&c, 1).iter().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(principal_upset(&c, 2), ElemSet::singleton(2));
        assert_eq!(principal_downset(&c, 1).iter().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(principal_downset(&c, 0), ElemSet::singleton(0));
        let v = vee_poset();
        assert_eq!(principal_upset(&v, 0).iter().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(principal_downset(&v, 2), ElemSet::full(3));
    }

    #[test]
    fn poset_counts_up_to_isomorphism() {
        // OEIS A000112
        let counts: Vec<usize> = (0..=6).map(|n| enumerate_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63, 318]);
    }

    #[test]
    fn invariants_on_all_small_posets() {
        for n in 0..=5 {
            for p in enumerate_posets(n) {
                let ds = enumerate_downsets(&p);
                assert!(ds.len() > n && ds.len() <= 1 << n);
                for d in &ds {
                    assert!(p.is_upset(&d.members().complement(n)));
                }
                for x in 0..n {
                    assert!(p.is_upset(p.principal_upset(x)));
                    assert!(p.is_downset(p.principal_downset(x)));
                }
            }
        }
    }
}
