//! Meet-irreducible elements and the free distributive lattice extension.
//!
//! The extension of a finite distributive nearlattice `A` is built directly
//! as the lattice of downsets of its irreducible poset `Irr(A)`, ordered by
//! inclusion, with the embedding `ê(a) = {x ∈ Irr(A) : a ≰ x}`. The
//! `check_*` functions verify the properties that make this pair the free
//! extension rather than assuming them.

use std::collections::HashMap;

use thiserror::Error;

use crate::filters::{all_filters, filter_generated, filter_join, Filter};
use crate::nearlattice::{from_join_table, NMap, Nearlattice};
use crate::order::{enumerate_downsets, Downset, Poset};
use crate::set::ElemSet;
use crate::structure::{
    annihilator, boolean_elements, classically_complemented, complemented_elements, dual_atoms, pi,
};
use crate::ElementId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("NotALattice: {x} ∧ {y} does not exist in the target")]
    NotALattice { x: ElementId, y: ElementId },
    #[error("BoundExceeded: {what} has {size} elements, bound is {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },
}

/// Non-top elements that are not a meet of two strictly larger elements.
pub fn irreducibles(nl: &Nearlattice) -> Vec<ElementId> {
    (0..nl.size())
        .filter(|&a| a != nl.top())
        .filter(|&a| !(0..nl.size()).any(|x| (0..nl.size()).any(|y| x != a && y != a && nl.meet(x, y) == Some(a))))
        .collect()
}

/// `Irr(A)` with the order induced from `A`, labelled like `A`.
pub fn irreducible_poset(nl: &Nearlattice) -> (Vec<ElementId>, Poset) {
    let irr = irreducibles(nl);
    let poset = nl
        .order()
        .restrict(&irr)
        .with_labels(irr.iter().map(|&x| nl.label(x).to_string()).collect());
    (irr, poset)
}

/// Whenever `x ∧ y` exists and lies below `a`, so does `x` or `y`.
pub fn is_irreducible_prime_form(nl: &Nearlattice, a: ElementId) -> bool {
    (0..nl.size()).all(|x| {
        (0..nl.size()).all(|y| match nl.meet(x, y) {
            Some(m) if nl.leq(m, a) => nl.leq(x, a) || nl.leq(y, a),
            _ => true,
        })
    })
}

/// Renders a downset of a labelled poset as `{x,y}`.
pub fn downset_label(poset: &Poset, members: &ElemSet) -> String {
    let inner: Vec<String> = members.iter().map(|x| poset.label(x)).collect();
    format!("{{{}}}", inner.join(","))
}

/// The free distributive lattice extension `⟨D(Irr(A)), ê⟩`.
#[derive(Debug, Clone)]
pub struct FreeExtension {
    base: Nearlattice,
    irr: Vec<ElementId>,
    irr_poset: Poset,
    downsets: Vec<Downset>,
    lattice: Nearlattice,
    embed: Vec<ElementId>,
}

pub fn free_extension(nl: &Nearlattice) -> FreeExtension {
    let (irr, irr_poset) = irreducible_poset(nl);
    let downsets = enumerate_downsets(&irr_poset);
    let index: HashMap<&ElemSet, ElementId> = downsets.iter().enumerate().map(|(i, d)| (d.members(), i)).collect();
    let table: Vec<Vec<ElementId>> = downsets
        .iter()
        .map(|u| {
            downsets
                .iter()
                .map(|v| index[&u.members().union(v.members())])
                .collect()
        })
        .collect();
    let top = index[&irr_poset.carrier()];
    let labels = downsets
        .iter()
        .map(|d| downset_label(&irr_poset, d.members()))
        .collect();
    let lattice = from_join_table(downsets.len(), &table, top)
        .and_then(|l| l.with_labels(labels))
        .expect("the downsets of a poset form a distributive lattice");
    let embed = (0..nl.size())
        .map(|a| {
            let image: ElemSet = (0..irr.len()).filter(|&i| !nl.leq(a, irr[i])).collect();
            index[&image]
        })
        .collect();
    FreeExtension {
        base: nl.clone(),
        irr,
        irr_poset,
        downsets,
        lattice,
        embed,
    }
}

impl FreeExtension {
    pub fn base(&self) -> &Nearlattice {
        &self.base
    }

    /// Irreducible elements of the base, ascending.
    pub fn irr(&self) -> &[ElementId] {
        &self.irr
    }

    pub fn irr_poset(&self) -> &Poset {
        &self.irr_poset
    }

    pub fn lattice(&self) -> &Nearlattice {
        &self.lattice
    }

    /// The downset of `Irr(A)` behind each lattice element.
    pub fn downsets(&self) -> &[Downset] {
        &self.downsets
    }

    /// `ê(a)` as a lattice element.
    pub fn embed(&self, a: ElementId) -> ElementId {
        self.embed[a]
    }

    /// `ê(a)` as a set of positions in [`Self::irr`].
    pub fn embed_set(&self, a: ElementId) -> &ElemSet {
        self.downsets[self.embed[a]].members()
    }

    pub fn embed_map(&self) -> NMap<'_> {
        NMap::new(&self.base, &self.lattice, self.embed.clone())
    }

    /// `ê[S]` as a set of lattice elements.
    pub fn image(&self, s: &ElemSet) -> ElemSet {
        s.iter().map(|a| self.embed[a]).collect()
    }
}

/// Every lattice element is an intersection of embedded elements.
pub fn check_meet_density(ext: &FreeExtension) -> bool {
    let n_irr = ext.irr.len();
    ext.downsets.iter().all(|u| {
        let above = (0..ext.base.size())
            .map(|a| ext.embed_set(a))
            .filter(|e| u.members().is_subset(e))
            .fold(ElemSet::full(n_irr), |acc, e| acc.intersection(e));
        &above == u.members()
    })
}

/// Size limits for [`check_universal_property`].
#[derive(Debug, Clone, Copy)]
pub struct SearchBounds {
    pub max_base: usize,
    pub max_target: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self {
            max_base: 6,
            max_target: 6,
        }
    }
}

/// All N-homomorphisms `source -> target`, as tables, in lexicographic
/// order.
pub fn n_homomorphisms(source: &Nearlattice, target: &Nearlattice) -> Vec<Vec<ElementId>> {
    let n = source.size();
    let m = target.size();
    let mut out = Vec::new();
    let mut table = vec![0; n];
    loop {
        if NMap::new(source, target, table.clone()).is_n_homomorphism() {
            out.push(table.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            table[i] += 1;
            if table[i] < m {
                break;
            }
            table[i] = 0;
        }
    }
}

/// For every N-homomorphism `h: A -> M` into the lattice `M`, there is
/// exactly one lattice homomorphism `ĥ: L(A) -> M` with `h = ĥ ∘ ê`.
pub fn check_universal_property(
    ext: &FreeExtension,
    target: &Nearlattice,
    bounds: SearchBounds,
) -> Result<bool, ExtensionError> {
    if ext.base.size() > bounds.max_base {
        return Err(ExtensionError::BoundExceeded {
            what: "base",
            size: ext.base.size(),
            bound: bounds.max_base,
        });
    }
    if target.size() > bounds.max_target {
        return Err(ExtensionError::BoundExceeded {
            what: "target",
            size: target.size(),
            bound: bounds.max_target,
        });
    }
    for x in 0..target.size() {
        for y in 0..target.size() {
            if target.meet(x, y).is_none() {
                return Err(ExtensionError::NotALattice { x, y });
            }
        }
    }
    Ok(n_homomorphisms(&ext.base, target)
        .iter()
        .all(|h| count_factorizations(ext, target, h, 2) == 1))
}

/// Number of lattice homomorphisms `ĥ: L(A) -> M` with `ĥ ∘ ê = h`,
/// counted up to `limit`.
pub fn count_factorizations(ext: &FreeExtension, target: &Nearlattice, h: &[ElementId], limit: usize) -> usize {
    let lattice = &ext.lattice;
    let mut value: Vec<Option<ElementId>> = vec![None; lattice.size()];
    for (a, &ha) in h.iter().enumerate() {
        value[ext.embed[a]] = Some(ha);
    }
    let free: Vec<ElementId> = (0..lattice.size()).filter(|&u| value[u].is_none()).collect();
    if !consistent(lattice, target, &value) {
        return 0;
    }
    let mut count = 0;
    search_factorizations(lattice, target, &free, &mut value, limit, &mut count);
    count
}

fn search_factorizations(
    lattice: &Nearlattice,
    target: &Nearlattice,
    free: &[ElementId],
    value: &mut [Option<ElementId>],
    limit: usize,
    count: &mut usize,
) {
    let Some((&u, rest)) = free.split_first() else {
        *count += 1;
        return;
    };
    for v in 0..target.size() {
        value[u] = Some(v);
        if consistent(lattice, target, value) {
            search_factorizations(lattice, target, rest, value, limit, count);
            if *count >= limit {
                break;
            }
        }
    }
    value[u] = None;
}

// Joins and meets hold on every pair whose operands and result are assigned.
fn consistent(lattice: &Nearlattice, target: &Nearlattice, value: &[Option<ElementId>]) -> bool {
    for u in 0..lattice.size() {
        let Some(fu) = value[u] else { continue };
        for w in u..lattice.size() {
            let Some(fw) = value[w] else { continue };
            if let Some(fj) = value[lattice.join(u, w)] {
                if fj != target.join(fu, fw) {
                    return false;
                }
            }
            let m = lattice.meet(u, w).expect("lattice");
            if let Some(fm) = value[m] {
                if Some(fm) != target.meet(fu, fw) {
                    return false;
                }
            }
        }
    }
    true
}

/// `ê[[a)] = [ê(a))` and the lattice filter generated by `ê[a^⊤]` is
/// `ê(a)^⊤`, for every `a`.
pub fn check_lemma_upset_and_annihilator(ext: &FreeExtension) -> bool {
    let (base, lattice) = (&ext.base, &ext.lattice);
    (0..base.size()).all(|a| {
        let upset_image = ext.image(base.upset(a));
        let generated = filter_generated(lattice, &ext.image(annihilator(base, a).members()));
        &upset_image == lattice.upset(ext.embed(a))
            && generated.members() == annihilator(lattice, ext.embed(a)).members()
    })
}

/// Dual atoms, boolean elements, complemented elements and irreducibles
/// are carried to their lattice counterparts.
pub fn check_preservation(ext: &FreeExtension) -> bool {
    let (base, lattice) = (&ext.base, &ext.lattice);
    let irr_base: ElemSet = irreducibles(base).into_iter().collect();
    let irr_lattice: ElemSet = irreducibles(lattice).into_iter().collect();
    ext.image(&dual_atoms(base)) == dual_atoms(lattice)
        && ext.image(&boolean_elements(base)).is_subset(&boolean_elements(lattice))
        && ext
            .image(&complemented_elements(base))
            .is_subset(&classically_complemented(lattice))
        && ext.image(&irr_base) == irr_lattice
}

/// `Φ(F) = Fig(ê[F])` is a bijection `Fi(A) -> Fi(L(A))` preserving `∩`
/// and `⋎`.
pub fn check_phi_isomorphism(ext: &FreeExtension) -> bool {
    let (base, lattice) = (&ext.base, &ext.lattice);
    let source = all_filters(base);
    let target = all_filters(lattice);
    let phi = |f: &Filter| filter_generated(lattice, &ext.image(f.members()));
    let images: Vec<Filter> = source.iter().map(phi).collect();
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    if sorted != target || sorted.len() != images.len() {
        return false;
    }
    for (i, f) in source.iter().enumerate() {
        for (j, g) in source.iter().enumerate() {
            if phi(&f.intersection(g)) != images[i].intersection(&images[j]) {
                return false;
            }
            if phi(&filter_join(base, f, g)) != filter_join(lattice, &images[i], &images[j]) {
                return false;
            }
        }
    }
    true
}

/// `π_L(ê(a)) = ê(π_A(a))` for every `a`.
pub fn check_commuting_diagram(ext: &FreeExtension) -> bool {
    (0..ext.base.size()).all(|a| pi(&ext.lattice, ext.embed(a)) == ext.embed(pi(&ext.base, a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nearlattice::find_isomorphism;
    use crate::nearlattice::fixtures::*;

    fn set(xs: &[ElementId]) -> ElemSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn irreducible_examples() {
        assert_eq!(irreducibles(&chain3()), vec![0, 1]);
        assert_eq!(irreducibles(&vee()), vec![0, 1]);
        assert_eq!(irreducibles(&diamond()), vec![1, 2]);
        assert!(irreducibles(&one()).is_empty());
        let (_, p) = irreducible_poset(&chain3());
        assert!(p.leq(0, 1));
        let (_, p) = irreducible_poset(&vee());
        assert!(!p.leq(0, 1) && !p.leq(1, 0));
    }

    #[test]
    fn prime_form_examples() {
        assert!(is_irreducible_prime_form(&chain3(), 0));
        assert!(!is_irreducible_prime_form(&diamond(), 0));
        for nl in [one(), chain3(), vee(), diamond(), vee3()] {
            assert!(is_irreducible_prime_form(&nl, nl.top()));
            let irr = irreducibles(&nl);
            for a in (0..nl.size()).filter(|&a| a != nl.top()) {
                assert_eq!(is_irreducible_prime_form(&nl, a), irr.contains(&a));
            }
        }
    }

    #[test]
    fn extension_of_vee_is_diamond() {
        let v = vee();
        let e = free_extension(&v);
        assert!(find_isomorphism(e.lattice(), &diamond()).is_some());
        // irr = [a, b]; ê(a) = {b}, ê(b) = {a}, ê(1) = {a, b}
        assert_eq!(e.embed_set(0), &set(&[1]));
        assert_eq!(e.embed_set(1), &set(&[0]));
        assert_eq!(e.embed_set(2), &set(&[0, 1]));
        assert_eq!(e.lattice().label(e.embed(0)), "{b}");
    }

    #[test]
    fn extension_of_chain3_is_chain3() {
        let c = chain3();
        let e = free_extension(&c);
        assert!(find_isomorphism(e.lattice(), &c).is_some());
        assert_eq!(e.embed_set(0), &ElemSet::new());
        assert_eq!(e.embed_set(1), &set(&[0]));
        assert_eq!(e.embed_set(2), &set(&[0, 1]));
    }

    #[test]
    fn extension_of_one() {
        let e = free_extension(&one());
        assert_eq!(e.lattice().size(), 1);
        assert_eq!(e.embed_set(0), &ElemSet::new());
        assert_eq!(e.lattice().bottom(), Some(e.lattice().top()));
    }

    #[test]
    fn embedding_is_injective_homomorphism() {
        for nl in [one(), chain2(), chain3(), vee(), diamond(), vee3()] {
            let e = free_extension(&nl);
            let f = e.embed_map();
            assert!(f.is_n_homomorphism());
            assert_eq!(e.image(&nl.carrier()).len(), nl.size());
            assert!(e.lattice().is_lattice());
        }
    }

    #[test]
    fn meet_density_examples() {
        for nl in [one(), chain3(), vee(), diamond(), vee3()] {
            assert!(check_meet_density(&free_extension(&nl)));
        }
        // For a lattice input the embedding is onto.
        let e = free_extension(&diamond());
        assert_eq!(e.image(&ElemSet::full(4)), ElemSet::full(4));
    }

    #[test]
    fn universal_property_examples() {
        let b = SearchBounds::default();
        assert_eq!(
            check_universal_property(&free_extension(&vee()), &diamond(), b),
            Ok(true)
        );
        assert_eq!(
            check_universal_property(&free_extension(&chain3()), &chain3(), b),
            Ok(true)
        );
        for nl in [one(), chain3(), vee(), diamond()] {
            assert_eq!(check_universal_property(&free_extension(&nl), &one(), b), Ok(true));
        }
        assert_eq!(
            check_universal_property(&free_extension(&vee()), &vee(), b),
            Err(ExtensionError::NotALattice { x: 0, y: 1 })
        );
        let tight = SearchBounds {
            max_base: 2,
            max_target: 6,
        };
        assert!(matches!(
            check_universal_property(&free_extension(&vee()), &diamond(), tight),
            Err(ExtensionError::BoundExceeded { what: "base", .. })
        ));
    }

    #[test]
    fn constant_top_map_factors_through_top() {
        // ĥ(∅) = h(a) ∧ h(b) = 1, so ĥ need not preserve the bottom.
        let v = vee();
        let e = free_extension(&v);
        let d = diamond();
        assert_eq!(count_factorizations(&e, &d, &[3, 3, 3], 5), 1);
    }

    #[test]
    fn lemma_preservation_phi_diagram_examples() {
        for nl in [one(), chain2(), chain3(), vee(), diamond(), vee3()] {
            let e = free_extension(&nl);
            assert!(check_lemma_upset_and_annihilator(&e), "{nl:?}");
            assert!(check_preservation(&e), "{nl:?}");
            assert!(check_phi_isomorphism(&e), "{nl:?}");
            assert!(check_commuting_diagram(&e), "{nl:?}");
        }
        let e = free_extension(&chain3());
        // π(0) = a, ê(a) = {0}; π_L(ê(0)) = π_L(∅) = {0}
        assert_eq!(e.embed_set(pi(&chain3(), 0)), &set(&[0]));
        assert_eq!(pi(e.lattice(), e.embed(0)), e.embed(1));
    }
}
