//! The nearlattice data type: a finite join table with a top element.
//!
//! The order is derived from the join (`x <= y` iff `x ∨ y = y`) and meets
//! are partial: `x ∧ y` exists exactly when `x` and `y` have a common lower
//! bound. In a finite join-semilattice with top, every principal upset
//! `[a)` is automatically a bounded lattice (the meet of two elements of
//! `[a)` is the join of their common lower bounds), so validation only has
//! to check the semilattice laws and distributivity inside each `[a)`.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::order::{OrderError, Poset};
use crate::set::ElemSet;
use crate::ElementId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NearlatticeError {
    #[error("EmptyCarrier: a nearlattice needs at least its top element")]
    EmptyCarrier,
    #[error("Shape: join table is not {size}x{size}")]
    Shape { size: usize },
    #[error("OutOfRange: join({x},{y}) = {value} is not an element")]
    OutOfRange {
        x: ElementId,
        y: ElementId,
        value: ElementId,
    },
    #[error("OutOfRange: top {top} is not an element")]
    TopOutOfRange { top: ElementId },
    #[error("NotIdempotent x={x}")]
    NotIdempotent { x: ElementId },
    #[error("NotCommutative x={x} y={y}")]
    NotCommutative { x: ElementId, y: ElementId },
    #[error("NotAssociative x={x} y={y} z={z}")]
    NotAssociative { x: ElementId, y: ElementId, z: ElementId },
    #[error("TopNotAbsorbing x={x}")]
    TopNotAbsorbing { x: ElementId },
    #[error("UpsetNotDistributive a={a} x={x} y={y} z={z}")]
    UpsetNotDistributive {
        a: ElementId,
        x: ElementId,
        y: ElementId,
        z: ElementId,
    },
    #[error("NoJoin x={x} y={y}: no least upper bound")]
    NoJoin { x: ElementId, y: ElementId },
    #[error("NotClosed x={x} y={y}: join leaves the subset")]
    NotClosed { x: ElementId, y: ElementId },
    #[error("expected {expected} labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error(transparent)]
    Order(#[from] OrderError),
}

impl NearlatticeError {
    /// Element indices named by the error, in the order they are displayed.
    pub fn witness(&self) -> Vec<ElementId> {
        use NearlatticeError::*;
        match *self {
            NotIdempotent { x } | TopNotAbsorbing { x } => vec![x],
            NotCommutative { x, y } | NoJoin { x, y } | NotClosed { x, y } => vec![x, y],
            NotAssociative { x, y, z } => vec![x, y, z],
            UpsetNotDistributive { a, x, y, z } => vec![a, x, y, z],
            OutOfRange { x, y, value } => vec![x, y, value],
            TopOutOfRange { top } => vec![top],
            _ => vec![],
        }
    }
}

/// A validated finite distributive nearlattice.
#[derive(Clone)]
pub struct Nearlattice {
    size: usize,
    join: Vec<ElementId>,
    top: ElementId,
    labels: Vec<String>,
    order: Poset,
    meet: Vec<Option<ElementId>>,
}

impl PartialEq for Nearlattice {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.top == other.top && self.join == other.join
    }
}

impl Eq for Nearlattice {}

impl std::fmt::Debug for Nearlattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Nearlattice")
            .field("labels", &self.labels)
            .field("top", &self.top)
            .field("covers", &self.order.covering_pairs())
            .finish()
    }
}

/// Validates a join table and builds the nearlattice it presents.
pub fn from_join_table(size: usize, join: &[Vec<ElementId>], top: ElementId) -> Result<Nearlattice, NearlatticeError> {
    if size == 0 {
        return Err(NearlatticeError::EmptyCarrier);
    }
    if join.len() != size || join.iter().any(|row| row.len() != size) {
        return Err(NearlatticeError::Shape { size });
    }
    if top >= size {
        return Err(NearlatticeError::TopOutOfRange { top });
    }
    for (x, row) in join.iter().enumerate() {
        for (y, &value) in row.iter().enumerate() {
            if value >= size {
                return Err(NearlatticeError::OutOfRange { x, y, value });
            }
        }
    }
    let j = |x: usize, y: usize| join[x][y];
    for x in 0..size {
        if j(x, x) != x {
            return Err(NearlatticeError::NotIdempotent { x });
        }
    }
    for x in 0..size {
        for y in x + 1..size {
            if j(x, y) != j(y, x) {
                return Err(NearlatticeError::NotCommutative { x, y });
            }
        }
    }
    for x in 0..size {
        for y in 0..size {
            for z in 0..size {
                if j(j(x, y), z) != j(x, j(y, z)) {
                    return Err(NearlatticeError::NotAssociative { x, y, z });
                }
            }
        }
    }
    for x in 0..size {
        if j(x, top) != top {
            return Err(NearlatticeError::TopNotAbsorbing { x });
        }
    }
    let flat: Vec<ElementId> = join.iter().flatten().copied().collect();
    let nl = Nearlattice::assemble(size, flat, top);
    nl.check_upsets_distributive()?;
    Ok(nl)
}

impl Nearlattice {
    fn assemble(size: usize, join: Vec<ElementId>, top: ElementId) -> Self {
        let order = Poset::from_fn(size, |x, y| join[x * size + y] == y);
        let mut meet = vec![None; size * size];
        for x in 0..size {
            for y in x..size {
                let lower = order.principal_downset(x).intersection(order.principal_downset(y));
                let m = lower.iter().reduce(|acc, z| join[acc * size + z]);
                meet[x * size + y] = m;
                meet[y * size + x] = m;
            }
        }
        Self {
            size,
            join,
            top,
            labels: (0..size).map(|i| i.to_string()).collect(),
            order,
            meet,
        }
    }

    // For every a and x, y, z in [a): x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z). The
    // identity does not depend on a, so each triple with a common lower bound
    // is checked once and the least-index common lower bound is reported.
    fn check_upsets_distributive(&self) -> Result<(), NearlatticeError> {
        let n = self.size;
        for x in 0..n {
            for y in 0..n {
                let Some(xy) = self.meet(x, y) else { continue };
                for z in y..n {
                    let lower = self
                        .order
                        .principal_downset(xy)
                        .intersection(self.order.principal_downset(z));
                    let Some(a) = lower.first() else { continue };
                    let xz = self.meet(x, z).expect("common lower bound");
                    let lhs = self.meet(x, self.join(y, z)).expect("common lower bound");
                    if lhs != self.join(xy, xz) {
                        return Err(NearlatticeError::UpsetNotDistributive { a, x, y, z });
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds a nearlattice from a partial order whose pairs all have least
    /// upper bounds; `pairs` are closed reflexively and transitively.
    pub fn from_order_pairs(
        labels: Vec<String>,
        pairs: &[(ElementId, ElementId)],
        top: ElementId,
    ) -> Result<Self, NearlatticeError> {
        let size = labels.len();
        let poset = Poset::from_pairs(size, pairs)?;
        let table = join_table_of(&poset)?;
        from_join_table(size, &table, top)?.with_labels(labels)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, NearlatticeError> {
        if labels.len() != self.size {
            return Err(NearlatticeError::LabelCount {
                expected: self.size,
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn top(&self) -> ElementId {
        self.top
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: ElementId) -> &str {
        &self.labels[x]
    }

    /// Index of the element carrying `label`.
    pub fn element(&self, label: &str) -> Option<ElementId> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.size)
    }

    pub fn join(&self, x: ElementId, y: ElementId) -> ElementId {
        self.join[x * self.size + y]
    }

    pub fn join_table(&self) -> Vec<Vec<ElementId>> {
        self.join.chunks(self.size).map(<[_]>::to_vec).collect()
    }

    /// `x <= y` iff `x ∨ y = y`.
    pub fn leq(&self, x: ElementId, y: ElementId) -> bool {
        self.join(x, y) == y
    }

    /// The binary meet, when `x` and `y` have a common lower bound.
    pub fn meet(&self, x: ElementId, y: ElementId) -> Option<ElementId> {
        self.meet[x * self.size + y]
    }

    /// The derived order.
    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn upset(&self, x: ElementId) -> &ElemSet {
        self.order.principal_upset(x)
    }

    pub fn downset(&self, x: ElementId) -> &ElemSet {
        self.order.principal_downset(x)
    }

    /// Join of a set of elements, `None` for the empty set.
    pub fn join_of(&self, s: &ElemSet) -> Option<ElementId> {
        s.iter().reduce(|a, b| self.join(a, b))
    }

    /// Greatest lower bound of `s`; the empty meet is the top.
    pub fn meet_of_set(&self, s: &ElemSet) -> Option<ElementId> {
        if s.is_empty() {
            return Some(self.top);
        }
        let lower = s
            .iter()
            .map(|x| self.downset(x).clone())
            .reduce(|acc, d| acc.intersection(&d))
            .expect("nonempty");
        self.join_of(&lower)
    }

    /// Whether every pair has a meet (then `self` is a bounded lattice).
    pub fn is_lattice(&self) -> bool {
        self.meet.iter().all(Option::is_some)
    }

    pub fn bottom(&self) -> Option<ElementId> {
        (0..self.size).find(|&x| self.upset(x).len() == self.size)
    }

    /// The subalgebra on `members` (closed under join, containing the top),
    /// re-indexed in ascending order; returns it with the index map back
    /// into `self`.
    pub fn subalgebra(&self, members: &ElemSet) -> Result<(Nearlattice, Vec<ElementId>), NearlatticeError> {
        let elems: Vec<ElementId> = members.iter().collect();
        if !members.contains(self.top) {
            return Err(NearlatticeError::NotClosed {
                x: self.top,
                y: self.top,
            });
        }
        let pos: HashMap<ElementId, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut table = vec![vec![0; elems.len()]; elems.len()];
        for (i, &x) in elems.iter().enumerate() {
            for (k, &y) in elems.iter().enumerate() {
                let j = self.join(x, y);
                table[i][k] = *pos.get(&j).ok_or(NearlatticeError::NotClosed { x, y })?;
            }
        }
        let sub = from_join_table(elems.len(), &table, pos[&self.top])?
            .with_labels(elems.iter().map(|&x| self.labels[x].clone()).collect())?;
        Ok((sub, elems))
    }

    /// Per-element structural signatures from iterated refinement over the
    /// covering relation. Equal nearlattices up to isomorphism have equal
    /// signature multisets, and isomorphisms preserve signatures.
    pub fn signatures(&self) -> Vec<u64> {
        let n = self.size;
        let mut up_covers = vec![Vec::new(); n];
        let mut down_covers = vec![Vec::new(); n];
        for (x, y) in self.order.covering_pairs() {
            up_covers[x].push(y);
            down_covers[y].push(x);
        }
        let mut sig: Vec<u64> = (0..n)
            .map(|x| hash_of(&(self.downset(x).len(), self.upset(x).len(), x == self.top)))
            .collect();
        let mut classes = distinct(&sig);
        for _ in 0..n {
            let next: Vec<u64> = (0..n)
                .map(|x| {
                    let mut ups: Vec<u64> = up_covers[x].iter().map(|&y| sig[y]).collect();
                    let mut downs: Vec<u64> = down_covers[x].iter().map(|&y| sig[y]).collect();
                    ups.sort_unstable();
                    downs.sort_unstable();
                    hash_of(&(sig[x], ups, downs))
                })
                .collect();
            let c = distinct(&next);
            sig = next;
            if c == classes {
                break;
            }
            classes = c;
        }
        sig
    }

    /// Isomorphism-invariant key: size plus the sorted signature multiset.
    pub fn invariant_key(&self) -> (usize, Vec<u64>) {
        let mut s = self.signatures();
        s.sort_unstable();
        (self.size, s)
    }
}

fn hash_of<T: Hash>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

fn distinct(sig: &[u64]) -> usize {
    let mut s = sig.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

/// The join table of a poset in which every pair has a least upper bound.
pub fn join_table_of(poset: &Poset) -> Result<Vec<Vec<ElementId>>, NearlatticeError> {
    let n = poset.size();
    let mut table = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            let upper = poset.principal_upset(x).intersection(poset.principal_upset(y));
            let least = upper.iter().find(|&u| upper.is_subset(poset.principal_upset(u)));
            table[x][y] = least.ok_or(NearlatticeError::NoJoin { x, y })?;
        }
    }
    Ok(table)
}

/// `x <= y` in `nl`.
pub fn leq(nl: &Nearlattice, x: ElementId, y: ElementId) -> bool {
    nl.leq(x, y)
}

/// Greatest lower bound of `s` in `nl`, if it exists.
pub fn meet_of_set(nl: &Nearlattice, s: &ElemSet) -> Option<ElementId> {
    nl.meet_of_set(s)
}

/// A total map between the carriers of two nearlattices.
#[derive(Debug, Clone)]
pub struct NMap<'a> {
    pub source: &'a Nearlattice,
    pub target: &'a Nearlattice,
    pub table: Vec<ElementId>,
}

impl<'a> NMap<'a> {
    pub fn new(source: &'a Nearlattice, target: &'a Nearlattice, table: Vec<ElementId>) -> Self {
        assert_eq!(table.len(), source.size(), "map must be total on the source");
        assert!(
            table.iter().all(|&y| y < target.size()),
            "map values must be target elements"
        );
        Self { source, target, table }
    }

    pub fn identity(nl: &'a Nearlattice) -> Self {
        Self::new(nl, nl, (0..nl.size()).collect())
    }

    pub fn apply(&self, x: ElementId) -> ElementId {
        self.table[x]
    }

    /// `other ∘ self`.
    pub fn then<'b>(&self, other: &NMap<'b>) -> NMap<'b>
    where
        'a: 'b,
    {
        assert!(std::ptr::eq(self.target, other.source) || self.target == other.source);
        NMap::new(
            self.source,
            other.target,
            self.table.iter().map(|&y| other.table[y]).collect(),
        )
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size() == self.target.size() && {
            let mut seen = vec![false; self.target.size()];
            self.table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        }
    }

    pub fn inverse(&self) -> Option<NMap<'a>> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.table.len()];
        for (x, &y) in self.table.iter().enumerate() {
            inv[y] = x;
        }
        Some(NMap::new(self.target, self.source, inv))
    }

    /// Preserves the top, every join, and every meet that exists in the
    /// source.
    pub fn is_n_homomorphism(&self) -> bool {
        let (a, b, f) = (self.source, self.target, &self.table);
        if f[a.top()] != b.top() {
            return false;
        }
        for x in 0..a.size() {
            for y in x..a.size() {
                if f[a.join(x, y)] != b.join(f[x], f[y]) {
                    return false;
                }
                if let Some(m) = a.meet(x, y) {
                    if b.meet(f[x], f[y]) != Some(f[m]) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn is_n_homomorphism(f: &NMap<'_>) -> bool {
    f.is_n_homomorphism()
}

/// Searches for an isomorphism `a -> b`.
///
/// Elements of `a` are assigned in index order; candidates in `b` are tried
/// in ascending index order among those with a matching signature and a
/// consistent order relation to everything assigned so far. The first
/// complete assignment is returned.
pub fn find_isomorphism<'a>(a: &'a Nearlattice, b: &'a Nearlattice) -> Option<NMap<'a>> {
    if a.size() != b.size() {
        return None;
    }
    let sa = a.signatures();
    let sb = b.signatures();
    let mut ka = sa.clone();
    let mut kb = sb.clone();
    ka.sort_unstable();
    kb.sort_unstable();
    if ka != kb {
        return None;
    }
    let mut table = Vec::with_capacity(a.size());
    let mut used = vec![false; b.size()];
    if !extend_isomorphism(a, b, &sa, &sb, &mut table, &mut used) {
        return None;
    }
    let f = NMap::new(a, b, table);
    debug_assert!(f.is_n_homomorphism() && f.inverse().is_some_and(|g| g.is_n_homomorphism()));
    Some(f)
}

fn extend_isomorphism(
    a: &Nearlattice,
    b: &Nearlattice,
    sa: &[u64],
    sb: &[u64],
    table: &mut Vec<ElementId>,
    used: &mut [bool],
) -> bool {
    let x = table.len();
    if x == a.size() {
        return true;
    }
    for y in 0..b.size() {
        if used[y] || sa[x] != sb[y] {
            continue;
        }
        let consistent = table
            .iter()
            .enumerate()
            .all(|(x2, &y2)| a.leq(x, x2) == b.leq(y, y2) && a.leq(x2, x) == b.leq(y2, y));
        if !consistent {
            continue;
        }
        used[y] = true;
        table.push(y);
        if extend_isomorphism(a, b, sa, sb, table, used) {
            return true;
        }
        table.pop();
        used[y] = false;
    }
    false
}

/// Small named nearlattices used throughout the tests and documentation.
pub mod fixtures {
    use super::*;

    fn build(labels: &[&str], pairs: &[(ElementId, ElementId)]) -> Nearlattice {
        let top = labels.len() - 1;
        Nearlattice::from_order_pairs(labels.iter().map(|s| s.to_string()).collect(), pairs, top)
            .expect("fixture is a distributive nearlattice")
    }

    /// The one-element nearlattice `{1}`.
    pub fn one() -> Nearlattice {
        build(&["1"], &[])
    }

    /// `m < 1`.
    pub fn chain2() -> Nearlattice {
        build(&["m", "1"], &[(0, 1)])
    }

    /// `0 < a < 1`.
    pub fn chain3() -> Nearlattice {
        build(&["0", "a", "1"], &[(0, 1), (1, 2)])
    }

    /// Two incomparable dual atoms `a`, `b` below `1`; `a ∧ b` does not exist.
    pub fn vee() -> Nearlattice {
        build(&["a", "b", "1"], &[(0, 2), (1, 2)])
    }

    /// The four-element boolean lattice.
    pub fn diamond() -> Nearlattice {
        build(&["0", "a", "b", "1"], &[(0, 1), (0, 2), (1, 3), (2, 3)])
    }

    /// Three pairwise incomparable dual atoms below `1`.
    pub fn vee3() -> Nearlattice {
        build(&["a", "b", "c", "1"], &[(0, 3), (1, 3), (2, 3)])
    }

    /// Labels and join table of the pentagon `0 < a < c < 1`, `0 < b < 1`,
    /// which is not distributive.
    pub fn n5_table() -> (Vec<String>, Vec<Vec<ElementId>>, ElementId) {
        let labels = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        let poset = Poset::from_pairs(5, &[(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)]).expect("poset");
        (labels, join_table_of(&poset).expect("lattice"), 4)
    }

    /// Labels and join table of the diamond `M3`, not distributive.
    pub fn m3_table() -> (Vec<String>, Vec<Vec<ElementId>>, ElementId) {
        let labels = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        let poset = Poset::from_pairs(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).expect("poset");
        (labels, join_table_of(&poset).expect("lattice"), 4)
    }
}
