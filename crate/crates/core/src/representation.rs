//! DN-structures and the representation of finite distributive
//! nearlattices.
//!
//! A DN-structure is a finite poset `X` together with the family of its
//! downsets valued 1 by a monotone valuation `γ`. The family must contain
//! `X` itself (S1) and every `[x)^c` (S2), and be closed upward under
//! inclusion (S3). Its members under union form a distributive nearlattice
//! `N(X)`; conversely every finite distributive nearlattice `A` yields the
//! structure `S(A)` on its irreducible poset, and `A ≅ N(S(A))`.
//!
//! The generator enumerates posets up to isomorphism and then every
//! admissible family, so by the representation it produces every finite
//! distributive nearlattice with a given number of irreducibles.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::extension::{downset_label, irreducible_poset, irreducibles};
use crate::nearlattice::{find_isomorphism, from_join_table, NMap, Nearlattice};
use crate::order::{enumerate_downsets, enumerate_posets, Downset, Poset};
use crate::set::ElemSet;
use crate::ElementId;

/// Default largest poset size for [`enumerate_dn`].
pub const DEFAULT_MAX_SIZE: usize = 5;
/// Hard ceiling on the enumeration bound, whatever the environment says.
pub const ENUMERATION_LIMIT: usize = 7;
/// Largest poset size accepted by [`sample_dn`].
pub const SAMPLE_LIMIT: usize = 6;
/// Environment variable overriding [`DEFAULT_MAX_SIZE`].
pub const MAX_SIZE_ENV: &str = "NEARLAT_MAX_SIZE";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DnError {
    #[error("{members:?} is not a downset of the poset")]
    NotADownset { members: ElemSet },
    #[error("S1Violation: the full carrier is not valued 1")]
    S1Violation,
    #[error("S2Violation x={x}: the complement of [{x}) is not valued 1")]
    S2Violation { x: ElementId },
    #[error("S3Violation U={lower:?} V={upper:?}: U is valued 1, V contains U and is not")]
    S3Violation { lower: ElemSet, upper: ElemSet },
    #[error("BoundExceeded: size {requested} exceeds the bound {bound}")]
    BoundExceeded { requested: usize, bound: usize },
}

/// The enumeration bound: `NEARLAT_MAX_SIZE` when set and valid, else
/// [`DEFAULT_MAX_SIZE`]; never above [`ENUMERATION_LIMIT`].
pub fn configured_max_size() -> usize {
    std::env::var(MAX_SIZE_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_SIZE)
        .min(ENUMERATION_LIMIT)
}

/// A poset with the family of downsets valued 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DNStructure {
    poset: Poset,
    one_family: Vec<Downset>,
}

/// `X` and every `[x)^c`.
pub fn forced_members(poset: &Poset) -> Vec<ElemSet> {
    let n = poset.size();
    let mut out = vec![ElemSet::full(n)];
    out.extend((0..n).map(|x| poset.principal_upset(x).complement(n)));
    out
}

/// Checks S1, S3 and S2 in that order.
pub fn validate_dn(poset: Poset, one_family: Vec<ElemSet>) -> Result<DNStructure, DnError> {
    let n = poset.size();
    let family: BTreeSet<ElemSet> = one_family.into_iter().collect();
    if let Some(bad) = family.iter().find(|u| !poset.is_downset(u)) {
        return Err(DnError::NotADownset { members: bad.clone() });
    }
    if !family.contains(&ElemSet::full(n)) {
        return Err(DnError::S1Violation);
    }
    let all = enumerate_downsets(&poset);
    for u in &family {
        for v in &all {
            if u.is_subset(v.members()) && !family.contains(v.members()) {
                return Err(DnError::S3Violation {
                    lower: u.clone(),
                    upper: v.members().clone(),
                });
            }
        }
    }
    for x in 0..n {
        if !family.contains(&poset.principal_upset(x).complement(n)) {
            return Err(DnError::S2Violation { x });
        }
    }
    let one_family = family.into_iter().map(Downset::new_unchecked).collect();
    Ok(DNStructure { poset, one_family })
}

impl DNStructure {
    /// Builds the structure from its minimal members: closes upward among
    /// downsets and adds the members S1 and S2 force.
    pub fn from_minimal(poset: Poset, generators: Vec<ElemSet>) -> Result<Self, DnError> {
        if let Some(bad) = generators.iter().find(|u| !poset.is_downset(u)) {
            return Err(DnError::NotADownset { members: bad.clone() });
        }
        let mut gens = generators;
        gens.extend(forced_members(&poset));
        let family = enumerate_downsets(&poset)
            .into_iter()
            .map(Downset::into_members)
            .filter(|v| gens.iter().any(|g| g.is_subset(v)))
            .collect();
        validate_dn(poset, family)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    /// The downsets valued 1, ascending.
    pub fn one_family(&self) -> &[Downset] {
        &self.one_family
    }

    pub fn gamma(&self, u: &ElemSet) -> bool {
        self.one_family.binary_search_by(|d| d.members().cmp(u)).is_ok()
    }

    /// The minimal members of the family, ascending.
    pub fn minimal_members(&self) -> Vec<ElemSet> {
        self.one_family
            .iter()
            .map(Downset::members)
            .filter(|u| {
                !self
                    .one_family
                    .iter()
                    .any(|v| v.members() != *u && v.members().is_subset(u))
            })
            .cloned()
            .collect()
    }

    fn index_of(&self, u: &ElemSet) -> Option<ElementId> {
        self.one_family.binary_search_by(|d| d.members().cmp(u)).ok()
    }
}

/// `N(X)`: the family under union, with the full carrier as top.
pub fn n_of(dn: &DNStructure) -> Nearlattice {
    let members: Vec<&ElemSet> = dn.one_family.iter().map(Downset::members).collect();
    let index: HashMap<&ElemSet, ElementId> = members.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let table: Vec<Vec<ElementId>> = members
        .iter()
        .map(|u| members.iter().map(|v| index[&u.union(v)]).collect())
        .collect();
    let top = index[&dn.poset.carrier()];
    let labels = members.iter().map(|u| downset_label(&dn.poset, u)).collect();
    from_join_table(members.len(), &table, top)
        .and_then(|nl| nl.with_labels(labels))
        .expect("the family of a DN-structure is a distributive nearlattice")
}

/// `S(A)`: the irreducible poset, with `γ(U) = 1` iff `⋀(Irr(A) \ U)`
/// exists in `A`.
pub fn s_of(nl: &Nearlattice) -> DNStructure {
    let (irr, poset) = irreducible_poset(nl);
    let n = irr.len();
    let family = enumerate_downsets(&poset)
        .into_iter()
        .map(Downset::into_members)
        .filter(|u| {
            let rest: ElemSet = u.complement(n).iter().map(|i| irr[i]).collect();
            nl.meet_of_set(&rest).is_some()
        })
        .collect();
    validate_dn(poset, family).expect("S(A) satisfies S1-S3")
}

/// The map `a ↦ ê(a) = {x ∈ Irr(A) : a ≰ x}` from `A` into the carrier of
/// `N(S(A))`, when every image is a member of the family.
pub fn representation_map(nl: &Nearlattice, dn: &DNStructure) -> Option<Vec<ElementId>> {
    let irr = irreducibles(nl);
    (0..nl.size())
        .map(|a| {
            let image: ElemSet = (0..irr.len()).filter(|&i| !nl.leq(a, irr[i])).collect();
            dn.index_of(&image)
        })
        .collect()
}

/// `A ≅ N(S(A))`, with `ê` itself an isomorphism.
pub fn check_representation(nl: &Nearlattice) -> bool {
    let dn = s_of(nl);
    let rep = n_of(&dn);
    if find_isomorphism(nl, &rep).is_none() {
        return false;
    }
    let Some(table) = representation_map(nl, &dn) else {
        return false;
    };
    let f = NMap::new(nl, &rep, table);
    f.is_n_homomorphism() && f.inverse().is_some_and(|g| g.is_n_homomorphism())
}

/// `x ↦ [x)^c` is an order isomorphism from the poset onto the irreducible
/// elements of `N(X)` ordered by inclusion.
pub fn check_round_trip(dn: &DNStructure) -> bool {
    let n = dn.poset.size();
    let rep = n_of(dn);
    let irr: BTreeSet<ElementId> = irreducibles(&rep).into_iter().collect();
    let Some(image) = (0..n)
        .map(|x| dn.index_of(&dn.poset.principal_upset(x).complement(n)))
        .collect::<Option<Vec<_>>>()
    else {
        return false;
    };
    let image_set: BTreeSet<ElementId> = image.iter().copied().collect();
    if image_set != irr || image_set.len() != n {
        return false;
    }
    (0..n).all(|x| {
        (0..n).all(|y| {
            let inclusion = dn.one_family[image[x]]
                .members()
                .is_subset(dn.one_family[image[y]].members());
            dn.poset.leq(x, y) == inclusion
        })
    })
}

/// The generated corpus with its bookkeeping.
#[derive(Debug, Clone)]
pub struct DnCorpus {
    /// Structures in deterministic order: by poset size, then poset
    /// canonical code, then family.
    pub structures: Vec<DNStructure>,
    /// Number of distinct nearlattices per poset size.
    pub counts: Vec<usize>,
    /// Number of (poset up to isomorphism, admissible family) pairs per
    /// poset size, before any deduplication.
    pub raw_counts: Vec<usize>,
}

/// Every DN-structure with at most `max_size` points, one per isomorphism
/// class of the resulting nearlattice.
pub fn enumerate_dn(max_size: usize) -> Result<Vec<DNStructure>, DnError> {
    dn_corpus(max_size).map(|c| c.structures)
}

pub fn dn_corpus(max_size: usize) -> Result<DnCorpus, DnError> {
    let bound = configured_max_size();
    if max_size > bound {
        return Err(DnError::BoundExceeded {
            requested: max_size,
            bound,
        });
    }
    Ok(build_corpus(max_size))
}

pub(crate) fn build_corpus(max_size: usize) -> DnCorpus {
    let mut corpus = DnCorpus {
        structures: Vec::new(),
        counts: Vec::new(),
        raw_counts: Vec::new(),
    };
    for size in 0..=max_size {
        let per_poset: Vec<(usize, Vec<DNStructure>)> = enumerate_posets(size)
            .into_par_iter()
            .map(|p| structures_on(&p))
            .collect();
        corpus.raw_counts.push(per_poset.iter().map(|(raw, _)| raw).sum());
        let candidates: Vec<DNStructure> = per_poset.into_iter().flat_map(|(_, s)| s).collect();
        let kept = dedupe_by_nearlattice(candidates);
        corpus.counts.push(kept.len());
        corpus.structures.extend(kept);
    }
    corpus
}

// All admissible families on one poset: the forced members closed upward,
// plus any upset of the remaining downsets. Families related by an
// automorphism of the poset are collapsed here; returns the raw count too.
fn structures_on(poset: &Poset) -> (usize, Vec<DNStructure>) {
    let downsets: Vec<ElemSet> = enumerate_downsets(poset)
        .into_iter()
        .map(Downset::into_members)
        .collect();
    let forced = forced_members(poset);
    let (fixed, free): (Vec<ElemSet>, Vec<ElemSet>) = downsets
        .iter()
        .cloned()
        .partition(|v| forced.iter().any(|f| f.is_subset(v)));
    // Downsets of this reversed-inclusion order are the upsets of `free`.
    let reversed = Poset::from_fn(free.len(), |i, j| free[j].is_subset(&free[i]));
    let automorphisms = automorphisms(poset);
    let mut raw = 0;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for choice in enumerate_downsets(&reversed) {
        raw += 1;
        let mut family: Vec<ElemSet> = fixed.clone();
        family.extend(choice.members().iter().map(|i| free[i].clone()));
        family.sort();
        let canonical = automorphisms
            .iter()
            .map(|perm| {
                let mut image: Vec<ElemSet> = family.iter().map(|u| u.iter().map(|x| perm[x]).collect()).collect();
                image.sort();
                image
            })
            .min()
            .unwrap_or_else(|| family.clone());
        if seen.insert(canonical) {
            out.push(validate_dn(poset.clone(), family).expect("admissible family"));
        }
    }
    (raw, out)
}

fn automorphisms(poset: &Poset) -> Vec<Vec<ElementId>> {
    fn extend(poset: &Poset, perm: &mut Vec<ElementId>, used: &mut [bool], out: &mut Vec<Vec<ElementId>>) {
        let x = perm.len();
        if x == poset.size() {
            out.push(perm.clone());
            return;
        }
        for y in 0..poset.size() {
            if used[y]
                || poset.principal_downset(x).len() != poset.principal_downset(y).len()
                || poset.principal_upset(x).len() != poset.principal_upset(y).len()
            {
                continue;
            }
            let ok =
                (0..x).all(|w| poset.leq(w, x) == poset.leq(perm[w], y) && poset.leq(x, w) == poset.leq(y, perm[w]));
            if ok {
                used[y] = true;
                perm.push(y);
                extend(poset, perm, used, out);
                perm.pop();
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(poset, &mut Vec::new(), &mut vec![false; poset.size()], &mut out);
    out
}

// Keeps the first structure of each isomorphism class of N(X), preserving
// input order.
fn dedupe_by_nearlattice(candidates: Vec<DNStructure>) -> Vec<DNStructure> {
    let built: Vec<(Nearlattice, (usize, Vec<u64>))> = candidates
        .par_iter()
        .map(|d| {
            let nl = n_of(d);
            let key = nl.invariant_key();
            (nl, key)
        })
        .collect();
    let mut buckets: BTreeMap<(usize, Vec<u64>), Vec<usize>> = BTreeMap::new();
    let mut keep = vec![false; candidates.len()];
    for (i, (nl, key)) in built.iter().enumerate() {
        let bucket = buckets.entry(key.clone()).or_default();
        if bucket.iter().all(|&j| find_isomorphism(&built[j].0, nl).is_none()) {
            bucket.push(i);
            keep[i] = true;
        }
    }
    candidates
        .into_iter()
        .zip(keep)
        .filter_map(|(d, k)| k.then_some(d))
        .collect()
}

/// A pseudo-random DN-structure on `n` points, determined by `(n, seed)`.
///
/// The generator is ChaCha8 seeded with `seed`. It draws each relation
/// `i < j` (for `i < j`) with probability 0.3 and takes the transitive
/// closure; then marks each downset with probability 0.25, keeps the
/// minimal marked downsets as generators, and closes upward together with
/// the S1/S2-forced members.
pub fn sample_dn(n: usize, seed: u64) -> Result<DNStructure, DnError> {
    if n > SAMPLE_LIMIT {
        return Err(DnError::BoundExceeded {
            requested: n,
            bound: SAMPLE_LIMIT,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.3) {
                pairs.push((i, j));
            }
        }
    }
    let poset = Poset::from_pairs(n, &pairs).expect("relations respect the index order");
    let marked: Vec<ElemSet> = enumerate_downsets(&poset)
        .into_iter()
        .map(Downset::into_members)
        .filter(|_| rng.gen_bool(0.25))
        .collect();
    let minimal: Vec<ElemSet> = marked
        .iter()
        .filter(|u| !marked.iter().any(|v| v != *u && v.is_subset(u)))
        .cloned()
        .collect();
    DNStructure::from_minimal(poset, minimal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nearlattice::fixtures::*;

    fn set(xs: &[ElementId]) -> ElemSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn validate_examples() {
        let p = Poset::antichain(2);
        assert!(validate_dn(p.clone(), vec![set(&[0]), set(&[1]), set(&[0, 1])]).is_ok());
        assert_eq!(
            validate_dn(p.clone(), vec![set(&[0, 1])]),
            Err(DnError::S2Violation { x: 0 })
        );
        assert_eq!(
            validate_dn(p.clone(), vec![set(&[]), set(&[0, 1]), set(&[1])]),
            Err(DnError::S3Violation {
                lower: set(&[]),
                upper: set(&[0])
            })
        );
        assert_eq!(validate_dn(p, vec![set(&[0]), set(&[1])]), Err(DnError::S1Violation));
        let c = Poset::chain(2);
        assert_eq!(
            validate_dn(c, vec![set(&[1]), set(&[0, 1])]),
            Err(DnError::NotADownset { members: set(&[1]) })
        );
    }

    #[test]
    fn n_of_examples() {
        let p = Poset::antichain(2);
        let vee_like = validate_dn(p.clone(), vec![set(&[0]), set(&[1]), set(&[0, 1])]).unwrap();
        assert!(find_isomorphism(&n_of(&vee_like), &vee()).is_some());
        let all = validate_dn(p, vec![set(&[]), set(&[0]), set(&[1]), set(&[0, 1])]).unwrap();
        assert!(find_isomorphism(&n_of(&all), &diamond()).is_some());
        let point = DNStructure::from_minimal(Poset::antichain(1), vec![]).unwrap();
        assert_eq!(point.one_family().len(), 2);
        assert!(find_isomorphism(&n_of(&point), &chain2()).is_some());
    }

    #[test]
    fn s_of_examples() {
        let d = s_of(&vee());
        assert_eq!(d.poset().size(), 2);
        assert!(!d.poset().leq(0, 1));
        let fam: Vec<_> = d.one_family().iter().map(|u| u.members().clone()).collect();
        assert_eq!(fam, vec![set(&[0]), set(&[1]), set(&[0, 1])]);
        assert!(!d.gamma(&ElemSet::new()));
        let d = s_of(&chain3());
        assert!(d.poset().leq(0, 1));
        assert_eq!(d.one_family().len(), 3);
        let d = s_of(&diamond());
        assert_eq!(d.one_family().len(), 4);
        assert_eq!(d.minimal_members(), vec![ElemSet::new()]);
    }

    #[test]
    fn representation_examples() {
        for nl in [one(), chain2(), chain3(), vee(), diamond(), vee3()] {
            assert!(check_representation(&nl), "{nl:?}");
        }
        let v = vee();
        let d = s_of(&v);
        // family = [{a}, {b}, {a,b}]; ê: a ↦ {b}, b ↦ {a}, 1 ↦ {a,b}
        assert_eq!(representation_map(&v, &d), Some(vec![1, 0, 2]));
        // The first isomorphism in ascending order is the automorphic twin.
        let rep = n_of(&d);
        assert_eq!(find_isomorphism(&v, &rep).unwrap().table, vec![0, 1, 2]);
    }

    #[test]
    fn round_trip_examples() {
        let p = Poset::antichain(2);
        let vee_like = validate_dn(p, vec![set(&[0]), set(&[1]), set(&[0, 1])]).unwrap();
        assert!(check_round_trip(&vee_like));
        let chain = DNStructure::from_minimal(Poset::chain(2), vec![]).unwrap();
        assert_eq!(chain.one_family().len(), 3);
        assert!(check_round_trip(&chain));
        let empty = DNStructure::from_minimal(Poset::antichain(0), vec![]).unwrap();
        assert!(check_round_trip(&empty));
        assert_eq!(n_of(&empty).size(), 1);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_dn(0).unwrap().len(), 1);
        assert_eq!(enumerate_dn(1).unwrap().len(), 2);
        let corpus = dn_corpus(2).unwrap();
        assert_eq!(corpus.counts, vec![1, 1, 3]);
        assert_eq!(corpus.raw_counts, vec![1, 1, 3]);
        let mut sizes: Vec<usize> = corpus.structures.iter().map(|d| n_of(d).size()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3, 3, 4]);
    }

    #[test]
    fn enumeration_bound() {
        assert_eq!(
            enumerate_dn(ENUMERATION_LIMIT + 1).map(|v| v.len()),
            Err(DnError::BoundExceeded {
                requested: ENUMERATION_LIMIT + 1,
                bound: configured_max_size()
            })
        );
    }

    #[test]
    fn sampling() {
        let empty = sample_dn(0, 3).unwrap();
        assert_eq!(empty.poset().size(), 0);
        assert_eq!(sample_dn(5, 11).unwrap(), sample_dn(5, 11).unwrap());
        let d = sample_dn(4, 7).unwrap();
        assert!(validate_dn(
            d.poset().clone(),
            d.one_family().iter().map(|u| u.members().clone()).collect()
        )
        .is_ok());
        assert!(check_round_trip(&d));
        assert_eq!(
            sample_dn(SAMPLE_LIMIT + 1, 0),
            Err(DnError::BoundExceeded { requested: 7, bound: 6 })
        );
    }
}
