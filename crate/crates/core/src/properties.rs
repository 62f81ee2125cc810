//! The invariant harness: every structural law the library promises, as a
//! named property that either passes or returns a re-checkable witness.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::extension::{
    check_commuting_diagram, check_lemma_upset_and_annihilator, check_meet_density, check_phi_isomorphism,
    check_preservation, check_universal_property, free_extension, is_irreducible_prime_form, FreeExtension,
    SearchBounds,
};
use crate::filters::{
    all_filters, all_ideals, filter_generated, filter_join, is_prime_ideal, prime_separation, principal_filter, Filter,
};
use crate::nearlattice::{find_isomorphism, NMap, Nearlattice};
use crate::order::{enumerate_downsets, Poset};
use crate::representation::{
    build_corpus, check_representation, check_round_trip, dn_corpus, n_of, representation_map, s_of, validate_dn,
    DNStructure, DnError,
};
use crate::set::ElemSet;
use crate::structure::{
    annihilator, boolean_elements, classically_complemented, complement_in, complemented_elements, dense_elements,
    dual_atoms, is_semi_boolean, pi, x_set,
};
use crate::ElementId;

/// Largest base for which the universal property is checked.
pub const UNIVERSAL_BASE_LIMIT: usize = 5;
/// Largest target lattice used for the universal property.
pub const UNIVERSAL_TARGET_LIMIT: usize = 5;

/// Elements (indices into the checked nearlattice) and a description of the
/// failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub elements: Vec<ElementId>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub property: &'static str,
    pub structure: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// One structure under test, with the derived data most properties share.
pub struct Subject {
    pub id: String,
    pub nl: Nearlattice,
    pub dn: Option<DNStructure>,
    ext: FreeExtension,
    booleans: ElemSet,
}

impl Subject {
    pub fn new(id: impl Into<String>, nl: Nearlattice) -> Self {
        Self::build(id.into(), nl, None)
    }

    pub fn from_dn(id: impl Into<String>, dn: DNStructure) -> Self {
        let nl = n_of(&dn);
        Self::build(id.into(), nl, Some(dn))
    }

    fn build(id: String, nl: Nearlattice, dn: Option<DNStructure>) -> Self {
        let ext = free_extension(&nl);
        let booleans = boolean_elements(&nl);
        Self {
            id,
            nl,
            dn,
            ext,
            booleans,
        }
    }

    /// The DN-structure under test: the given one, or `S(A)`.
    fn structure(&self) -> DNStructure {
        self.dn.clone().unwrap_or_else(|| s_of(&self.nl))
    }
}

type Check = fn(&Subject, &Context) -> Result<(), Witness>;

pub struct Property {
    pub name: &'static str,
    pub check: Check,
}

/// Shared inputs: the target lattices for the universal property.
pub struct Context {
    pub targets: Vec<Nearlattice>,
}

impl Context {
    /// Every distributive lattice with at most [`UNIVERSAL_TARGET_LIMIT`]
    /// elements, one per isomorphism class.
    pub fn standard() -> &'static Context {
        static CONTEXT: OnceLock<Context> = OnceLock::new();
        CONTEXT.get_or_init(|| Context {
            targets: build_corpus(UNIVERSAL_TARGET_LIMIT - 1)
                .structures
                .iter()
                .map(n_of)
                .filter(|m| m.is_lattice() && m.size() <= UNIVERSAL_TARGET_LIMIT)
                .collect(),
        })
    }
}

fn fail(elements: &[ElementId], detail: impl Into<String>) -> Witness {
    Witness {
        elements: elements.to_vec(),
        detail: detail.into(),
    }
}

fn ensure(cond: bool, elements: &[ElementId], detail: impl FnOnce() -> String) -> Result<(), Witness> {
    if cond {
        Ok(())
    } else {
        Err(fail(elements, detail()))
    }
}

macro_rules! properties {
    ($($name:literal => $f:ident,)*) => {
        /// Every property, in report order.
        pub const PROPERTIES: &[Property] = &[$(Property { name: $name, check: $f },)*];
    };
}

properties! {
    "order.principal_sets" => order_principal_sets,
    "order.downset_count" => order_downset_count,
    "order.downset_complement" => order_downset_complement,
    "nl.meet_oracle" => nl_meet_oracle,
    "nl.upset_distributive_lattice" => nl_upset_distributive_lattice,
    "nl.identity_and_composition" => nl_identity_and_composition,
    "nl.isomorphism_symmetric" => nl_isomorphism_symmetric,
    "fi.filter_lattice" => fi_filter_lattice,
    "fi.principal_and_annihilator" => fi_principal_and_annihilator,
    "fi.prime_separation" => fi_prime_separation,
    "fi.closure_operator" => fi_closure_operator,
    "st.classification" => st_classification,
    "st.unique_complements" => st_unique_complements,
    "st.dual_atom_dichotomy" => st_dual_atom_dichotomy,
    "st.x_set_laws" => st_x_set_laws,
    "st.boolean_meet_of_x" => st_boolean_meet_of_x,
    "st.boolean_subalgebra" => st_boolean_subalgebra,
    "st.boolean_semi_boolean" => st_boolean_semi_boolean,
    "st.dual_atom_meet_equivalence" => st_dual_atom_meet_equivalence,
    "st.lattice_complement_formula" => st_lattice_complement_formula,
    "st.dense_equivalence" => st_dense_equivalence,
    "st.annihilator_order" => st_annihilator_order,
    "st.pi_homomorphism" => st_pi_homomorphism,
    "st.complemented_subalgebra" => st_complemented_subalgebra,
    "st.semi_boolean_equivalence" => st_semi_boolean_equivalence,
    "st.classical_complements" => st_classical_complements,
    "ext.embedding" => ext_embedding,
    "ext.irreducible_meet" => ext_irreducible_meet,
    "ext.irreducible_prime_form" => ext_irreducible_prime_form,
    "ext.lattice_bounded_distributive" => ext_lattice_bounded_distributive,
    "ext.meet_density" => ext_meet_density,
    "ext.complement_transport" => ext_complement_transport,
    "ext.universal_property" => ext_universal_property,
    "ext.lemma_upset_annihilator" => ext_lemma_upset_annihilator,
    "ext.preservation" => ext_preservation,
    "ext.phi_isomorphism" => ext_phi_isomorphism,
    "ext.commuting_diagram" => ext_commuting_diagram,
    "rep.structure_valid" => rep_structure_valid,
    "rep.gamma_axioms" => rep_gamma_axioms,
    "rep.representation" => rep_representation,
    "rep.round_trip" => rep_round_trip,
    "rep.meet_characterization" => rep_meet_characterization,
    "rep.birkhoff" => rep_birkhoff,
}

pub fn property(name: &str) -> Option<&'static Property> {
    PROPERTIES.iter().find(|p| p.name == name)
}

/// Runs every property on one subject, in [`PROPERTIES`] order.
pub fn check_subject(subject: &Subject, ctx: &Context) -> Vec<CheckOutcome> {
    PROPERTIES
        .iter()
        .map(|p| {
            let result = (p.check)(subject, ctx);
            CheckOutcome {
                property: p.name,
                structure: subject.id.clone(),
                pass: result.is_ok(),
                witness: result.err(),
            }
        })
        .collect()
}

/// Runs every property on every subject; the output order follows the
/// input order whatever the scheduling.
pub fn check_all(subjects: &[Subject], ctx: &Context) -> Vec<CheckOutcome> {
    subjects
        .par_iter()
        .map(|s| check_subject(s, ctx))
        .collect::<Vec<_>>()
        .concat()
}

/// The generated corpus up to `max_size`, as subjects named
/// `corpus/<poset size>/<index>`.
pub fn corpus_subjects(max_size: usize) -> Result<Vec<Subject>, DnError> {
    let corpus = dn_corpus(max_size)?;
    let mut index = vec![0; max_size + 1];
    Ok(corpus
        .structures
        .into_iter()
        .map(|dn| {
            let size = dn.poset().size();
            let id = format!("corpus/{size}/{}", index[size]);
            index[size] += 1;
            Subject::from_dn(id, dn)
        })
        .collect())
}

/// Re-runs a failed outcome's property and confirms it fails again with
/// the same witness.
pub fn recheck(outcome: &CheckOutcome, subject: &Subject, ctx: &Context) -> bool {
    match (property(outcome.property), &outcome.witness) {
        (Some(p), Some(w)) => (p.check)(subject, ctx).err().as_ref() == Some(w),
        _ => false,
    }
}

fn subsets_up_to(n: usize, k: usize) -> Vec<ElemSet> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<ElementId>, out: &mut Vec<ElemSet>) {
        out.push(cur.iter().copied().collect());
        if cur.len() == k {
            return;
        }
        for x in start..n {
            cur.push(x);
            go(n, k, x + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn pairs(n: usize) -> impl Iterator<Item = (ElementId, ElementId)> {
    (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)))
}

fn least(nl: &Nearlattice, s: &ElemSet) -> Option<ElementId> {
    s.iter().find(|&c| s.iter().all(|x| nl.leq(c, x)))
}

// order

fn poset_checks(p: &Poset) -> Result<(), Witness> {
    for x in 0..p.size() {
        ensure(p.is_upset(p.principal_upset(x)), &[x], || {
            "principal upset is not an upset".into()
        })?;
        ensure(p.is_downset(p.principal_downset(x)), &[x], || {
            "principal downset is not a downset".into()
        })?;
    }
    Ok(())
}

fn order_principal_sets(s: &Subject, _: &Context) -> Result<(), Witness> {
    poset_checks(s.nl.order())?;
    poset_checks(s.ext.irr_poset())?;
    if let Some(dn) = &s.dn {
        poset_checks(dn.poset())?;
    }
    Ok(())
}

fn order_downset_count(s: &Subject, _: &Context) -> Result<(), Witness> {
    for p in [s.nl.order(), s.ext.irr_poset()] {
        let n = p.size();
        let count = enumerate_downsets(p).len();
        let upper = if n < usize::BITS as usize {
            1usize << n
        } else {
            usize::MAX
        };
        ensure((n + 1..=upper).contains(&count), &[], || {
            format!("{count} downsets on {n} points")
        })?;
    }
    Ok(())
}

fn order_downset_complement(s: &Subject, _: &Context) -> Result<(), Witness> {
    let p = s.ext.irr_poset();
    for d in enumerate_downsets(p) {
        let c = d.members().complement(p.size());
        ensure(p.is_upset(&c), &d.members().iter().collect::<Vec<_>>(), || {
            "complement of a downset of Irr is not an upset".into()
        })?;
    }
    Ok(())
}

// nearlattice

fn brute_glb(nl: &Nearlattice, s: &ElemSet) -> Option<ElementId> {
    let lower: Vec<ElementId> = (0..nl.size()).filter(|&l| s.iter().all(|x| nl.leq(l, x))).collect();
    lower.iter().copied().find(|&g| lower.iter().all(|&l| nl.leq(l, g)))
}

fn nl_meet_oracle(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    for set in subsets_up_to(nl.size(), 3) {
        let expected = brute_glb(nl, &set);
        let got = nl.meet_of_set(&set);
        ensure(got == expected, &set.iter().collect::<Vec<_>>(), || {
            format!("meet_of_set gives {got:?}, greatest lower bound search gives {expected:?}")
        })?;
    }
    for (x, y) in pairs(nl.size()) {
        let common = nl.downset(x).intersection(nl.downset(y));
        let expected = nl.join_of(&common);
        ensure(nl.meet(x, y) == expected, &[x, y], || {
            "meet differs from the join of common lower bounds".into()
        })?;
    }
    Ok(())
}

fn nl_upset_distributive_lattice(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    for a in 0..nl.size() {
        let up: Vec<ElementId> = nl.upset(a).iter().collect();
        for &x in &up {
            for &y in &up {
                let Some(m) = nl.meet(x, y) else {
                    return Err(fail(&[a, x, y], "meet missing inside a principal upset"));
                };
                for &z in &up {
                    let left = nl.meet(x, nl.join(y, z));
                    let right = nl.meet(x, z).map(|xz| nl.join(m, xz));
                    ensure(left == right, &[a, x, y, z], || {
                        "distributive law fails in the upset".into()
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn nl_identity_and_composition(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    ensure(NMap::identity(nl).is_n_homomorphism(), &[], || {
        "identity is not an N-homomorphism".into()
    })?;
    let p = NMap::new(nl, nl, (0..nl.size()).map(|a| pi(nl, a)).collect());
    ensure(p.is_n_homomorphism(), &[], || {
        "pi is not an N-homomorphism into A".into()
    })?;
    ensure(p.then(&p).is_n_homomorphism(), &[], || {
        "pi then pi is not an N-homomorphism".into()
    })?;
    let lattice = s.ext.lattice();
    let pl = NMap::new(lattice, lattice, (0..lattice.size()).map(|u| pi(lattice, u)).collect());
    let composite = s.ext.embed_map().then(&pl);
    ensure(composite.is_n_homomorphism(), &[], || {
        "embedding then pi is not an N-homomorphism".into()
    })
}

fn nl_isomorphism_symmetric(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    ensure(find_isomorphism(nl, nl).is_some(), &[], || {
        "no automorphism found".into()
    })?;
    let rep = n_of(&s.structure());
    let forward = find_isomorphism(nl, &rep).is_some();
    let backward = find_isomorphism(&rep, nl).is_some();
    ensure(forward == backward, &[], || {
        format!("forward {forward}, backward {backward}")
    })?;
    let lattice = s.ext.lattice();
    let forward = find_isomorphism(nl, lattice).is_some();
    let backward = find_isomorphism(lattice, nl).is_some();
    ensure(forward == backward, &[], || {
        format!("against L(A): forward {forward}, backward {backward}")
    })
}

// filters

fn fi_filter_lattice(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    let filters = all_filters(nl);
    let top_only = ElemSet::singleton(nl.top());
    let members = |f: &Filter| f.members().iter().collect::<Vec<_>>();
    ensure(filters.iter().any(|f| f.members() == &top_only), &[nl.top()], || {
        "{1} is not a filter".into()
    })?;
    ensure(filters.iter().any(|f| f.members() == &nl.carrier()), &[], || {
        "the carrier is not a filter".into()
    })?;
    for f in &filters {
        ensure(top_only.is_subset(f.members()), &members(f), || {
            "filter misses the top".into()
        })?;
        for g in &filters {
            ensure(filters.binary_search(&f.intersection(g)).is_ok(), &members(f), || {
                "intersection not a filter".into()
            })?;
            let fg = filter_join(nl, f, g);
            ensure(filters.binary_search(&fg).is_ok(), &members(f), || {
                "filter join not a filter".into()
            })?;
            for h in &filters {
                let left = f.intersection(&filter_join(nl, g, h));
                let right = filter_join(nl, &f.intersection(g), &f.intersection(h));
                ensure(left == right, &members(f), || {
                    "filter lattice is not distributive".into()
                })?;
            }
        }
    }
    Ok(())
}

fn fi_principal_and_annihilator(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    for a in 0..nl.size() {
        let up = principal_filter(nl, a);
        ensure(Filter::new(nl, up.members().clone()).is_ok(), &[a], || {
            "[a) fails the filter laws".into()
        })?;
        let ann = annihilator(nl, a);
        ensure(Filter::new(nl, ann.members().clone()).is_ok(), &[a], || {
            "annihilator fails the filter laws".into()
        })?;
    }
    Ok(())
}

fn fi_prime_separation(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    let filters = all_filters(nl);
    for ideal in all_ideals(nl) {
        for f in &filters {
            if !ideal.members().is_disjoint(f.members()) {
                continue;
            }
            let elements: Vec<ElementId> = ideal.members().iter().chain(f.members().iter()).collect();
            match prime_separation(nl, &ideal, f) {
                Some(p) => ensure(
                    ideal.members().is_subset(p.members())
                        && p.members().is_disjoint(f.members())
                        && is_prime_ideal(nl, &p),
                    &elements,
                    || "separating ideal is not a prime ideal between I and F".into(),
                )?,
                None => return Err(fail(&elements, "no prime ideal separates a disjoint ideal and filter")),
            }
        }
    }
    Ok(())
}

fn fi_closure_operator(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    let small = subsets_up_to(nl.size(), 2);
    let closed: Vec<Filter> = small.iter().map(|g| filter_generated(nl, g)).collect();
    for (g, f) in small.iter().zip(&closed) {
        let elements: Vec<ElementId> = g.iter().collect();
        ensure(g.is_subset(f.members()), &elements, || "not extensive".into())?;
        ensure(&filter_generated(nl, f.members()) == f, &elements, || {
            "not idempotent".into()
        })?;
    }
    for (g, f) in small.iter().zip(&closed) {
        for (h, k) in small.iter().zip(&closed) {
            if g.is_subset(h) {
                let elements: Vec<ElementId> = g.union(h).iter().collect();
                ensure(f.members().is_subset(k.members()), &elements, || "not monotone".into())?;
            }
        }
    }
    Ok(())
}

// structure

fn st_classification(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    let at = dual_atoms(nl);
    ensure(at.is_subset(&s.booleans), &at.iter().collect::<Vec<_>>(), || {
        "a dual atom is not boolean".into()
    })?;
    for b in s.booleans.iter() {
        ensure(pi(nl, b) == b, &[b], || "pi moves a boolean element".into())?;
    }
    Ok(())
}

fn st_unique_complements(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    for a in s.booleans.iter() {
        for x in nl.upset(a).iter() {
            if let Err(e) = complement_in(nl, a, x) {
                return Err(fail(&[a, x], e.to_string()));
            }
        }
    }
    Ok(())
}

fn st_dual_atom_dichotomy(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    for a in dual_atoms(nl).iter() {
        for x in 0..nl.size() {
            ensure(nl.leq(x, a) || nl.join(x, a) == nl.top(), &[a, x], || {
                "neither x ≤ a nor x ∨ a = 1".into()
            })?;
        }
    }
    Ok(())
}

fn st_x_set_laws(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    for (a, b) in pairs(nl.size()) {
        let (xa, xb) = (x_set(nl, a), x_set(nl, b));
        ensure(x_set(nl, nl.join(a, b)) == xa.intersection(&xb), &[a, b], || {
            "X of a join".into()
        })?;
        if let Some(m) = nl.meet(a, b) {
            ensure(x_set(nl, m) == xa.union(&xb), &[a, b], || "X of a meet".into())?;
        }
    }
    Ok(())
}

fn st_boolean_meet_of_x(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    for a in s.booleans.iter() {
        ensure(nl.meet_of_set(&x_set(nl, a)) == Some(a), &[a], || {
            "a is not the meet of X_a".into()
        })?;
    }
    Ok(())
}

fn closed_under_operations(nl: &Nearlattice, set: &ElemSet, name: &str) -> Result<(), Witness> {
    for x in set.iter() {
        for y in set.iter() {
            ensure(set.contains(nl.join(x, y)), &[x, y], || {
                format!("{name} not closed under join")
            })?;
            if let Some(m) = nl.meet(x, y) {
                ensure(set.contains(m), &[x, y], || {
                    format!("{name} not closed under existing meets")
                })?;
            }
        }
    }
    Ok(())
}

fn semi_boolean_sub(nl: &Nearlattice, set: &ElemSet, name: &str) -> Result<(), Witness> {
    match nl.subalgebra(set) {
        Ok((sub, _)) => ensure(is_semi_boolean(&sub), &set.iter().collect::<Vec<_>>(), || {
            format!("{name} is not semi-boolean")
        }),
        Err(e) => Err(fail(&e.witness(), format!("{name} is not a subalgebra: {e}"))),
    }
}

fn st_boolean_subalgebra(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    closed_under_operations(nl, &s.booleans, "B(A)")?;
    for a in s.booleans.iter() {
        ensure(nl.upset(a).is_subset(&s.booleans), &[a], || {
            "B(A) not upward closed".into()
        })?;
    }
    Ok(())
}

fn st_boolean_semi_boolean(s: &Subject, _: &Context) -> Result<(), Witness> {
    semi_boolean_sub(&s.nl, &s.booleans, "B(A)")
}

fn st_dual_atom_meet_equivalence(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    let b = &s.booleans;
    let meet_exists = nl.meet_of_set(&dual_atoms(nl)).is_some();
    let principal = (0..nl.size()).any(|a| nl.upset(a) == b);
    let boolean_lattice = least(nl, b).is_some_and(|c| {
        b.iter()
            .all(|x| b.iter().any(|y| nl.join(x, y) == nl.top() && nl.meet(x, y) == Some(c)))
    });
    ensure(meet_exists == principal && principal == boolean_lattice, &[], || {
        format!("⋀At exists {meet_exists}, B principal {principal}, B boolean lattice {boolean_lattice}")
    })
}

fn st_lattice_complement_formula(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    if !nl.is_lattice() {
        return Ok(());
    }
    let Some(c) = least(nl, &s.booleans) else {
        return Err(fail(&[], "lattice without a least boolean element"));
    };
    for a in s.booleans.iter() {
        for x in nl.upset(a).iter() {
            let left = complement_in(nl, a, x).ok();
            let right = complement_in(nl, c, x).ok().map(|nx| nl.join(nx, a));
            ensure(left.is_some() && left == right, &[a, x], || {
                "¬_a x differs from ¬x ∨ a".into()
            })?;
        }
    }
    Ok(())
}

fn st_dense_equivalence(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    let dense = dense_elements(nl);
    let meet_exists = nl.meet_of_set(&dual_atoms(nl)).is_some();
    let principal = (0..nl.size()).any(|a| nl.downset(a) == &dense);
    ensure(
        meet_exists == principal && principal == !dense.is_empty(),
        &dense.iter().collect::<Vec<_>>(),
        || {
            format!(
                "⋀At exists {meet_exists}, D principal {principal}, D nonempty {}",
                !dense.is_empty()
            )
        },
    )
}

fn st_annihilator_order(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    for a in s.booleans.iter() {
        for b in s.booleans.iter() {
            let inclusion = annihilator(nl, a).members().is_subset(annihilator(nl, b).members());
            ensure(nl.leq(a, b) == inclusion, &[a, b], || {
                "order on B(A) differs from annihilator inclusion".into()
            })?;
        }
    }
    for a in 0..nl.size() {
        let m = nl.meet_of_set(&x_set(nl, a)).expect("X_a has a meet");
        ensure(annihilator(nl, a) == annihilator(nl, m), &[a], || {
            "a^⊤ differs from (⋀X_a)^⊤".into()
        })?;
    }
    Ok(())
}

fn st_pi_homomorphism(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    let (sub, members) = nl
        .subalgebra(&s.booleans)
        .map_err(|e| fail(&e.witness(), format!("B(A) is not a subalgebra: {e}")))?;
    let table: Vec<ElementId> = (0..nl.size())
        .map(|a| {
            members
                .binary_search(&pi(nl, a))
                .map_err(|_| fail(&[a], "pi(a) is not boolean"))
        })
        .collect::<Result<_, _>>()?;
    let map = NMap::new(nl, &sub, table.clone());
    ensure(map.is_n_homomorphism(), &[], || {
        "pi is not an N-homomorphism onto B(A)".into()
    })?;
    let image: ElemSet = table.iter().copied().collect();
    ensure(image == sub.carrier(), &[], || "pi is not onto B(A)".into())?;
    for a in 0..nl.size() {
        let above = s.booleans.intersection(nl.upset(a));
        ensure(least(nl, &above) == Some(pi(nl, a)), &[a], || {
            "pi(a) is not the least boolean element above a".into()
        })?;
    }
    Ok(())
}

fn st_complemented_subalgebra(s: &Subject, _: &Context) -> Result<(), Witness> {
    let c = complemented_elements(&s.nl);
    closed_under_operations(&s.nl, &c, "C(A)")?;
    semi_boolean_sub(&s.nl, &c, "C(A)")
}

fn st_semi_boolean_equivalence(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    let c = complemented_elements(nl);
    let semi = is_semi_boolean(nl);
    let all = c == nl.carrier();
    let equal = s.booleans == c;
    ensure(semi == all && all == equal, &c.iter().collect::<Vec<_>>(), || {
        format!("semi-boolean {semi}, A = C(A) {all}, B(A) = C(A) {equal}")
    })
}

fn st_classical_complements(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    if !nl.is_lattice() {
        return Ok(());
    }
    let c = complemented_elements(nl);
    let classical = classically_complemented(nl);
    let diff: Vec<ElementId> = c
        .difference(&classical)
        .union(&classical.difference(&c))
        .iter()
        .collect();
    ensure(diff.is_empty(), &diff, || {
        "C(A) differs from the classically complemented elements".into()
    })
}

// extension

fn ext_embedding(s: &Subject, _: &Context) -> Result<(), Witness> {
    let e = s.ext.embed_map();
    ensure(e.is_n_homomorphism(), &[], || {
        "embedding is not an N-homomorphism".into()
    })?;
    let image: ElemSet = (0..s.nl.size()).map(|a| s.ext.embed(a)).collect();
    ensure(image.len() == s.nl.size(), &[], || "embedding is not injective".into())
}

fn ext_irreducible_meet(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    let irr = s.ext.irr();
    for a in 0..nl.size() {
        let above: ElemSet = irr.iter().copied().filter(|&x| nl.leq(a, x)).collect();
        ensure(nl.meet_of_set(&above) == Some(a), &[a], || {
            "a is not the meet of the irreducibles above it".into()
        })?;
    }
    Ok(())
}

fn ext_irreducible_prime_form(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    ensure(is_irreducible_prime_form(nl, nl.top()), &[nl.top()], || {
        "top fails the prime form".into()
    })?;
    for a in (0..nl.size()).filter(|&a| a != nl.top()) {
        let member = s.ext.irr().contains(&a);
        ensure(is_irreducible_prime_form(nl, a) == member, &[a], || {
            "prime form disagrees with irreducibility".into()
        })?;
    }
    Ok(())
}

fn ext_lattice_bounded_distributive(s: &Subject, _: &Context) -> Result<(), Witness> {
    let l = s.ext.lattice();
    ensure(l.is_lattice(), &[], || "meet of the free extension is not total".into())?;
    ensure(l.bottom().is_some(), &[], || "free extension has no bottom".into())?;
    for (x, y) in pairs(l.size()) {
        for z in 0..l.size() {
            let left = l.meet(x, l.join(y, z));
            let right = Some(l.join(l.meet(x, y).unwrap(), l.meet(x, z).unwrap()));
            ensure(left == right, &[x, y, z], || {
                "free extension is not distributive".into()
            })?;
        }
    }
    Ok(())
}

fn ext_meet_density(s: &Subject, _: &Context) -> Result<(), Witness> {
    ensure(check_meet_density(&s.ext), &[], || {
        "image of the embedding is not meet-dense".into()
    })
}

fn ext_complement_transport(s: &Subject, _: &Context) -> Result<(), Witness> {
    let (nl, ext) = (&s.nl, &s.ext);
    let l = ext.lattice();
    let Some(c) = least(l, &boolean_elements(l)) else {
        return Err(fail(&[], "free extension has no least boolean element"));
    };
    for a in s.booleans.iter() {
        for x in nl.upset(a).iter() {
            let transported = complement_in(nl, a, x).ok().map(|y| ext.embed(y));
            let direct = complement_in(l, ext.embed(a), ext.embed(x)).ok();
            let global = complement_in(l, c, ext.embed(x)).ok().map(|y| l.join(y, ext.embed(a)));
            ensure(
                transported.is_some() && transported == direct && direct == global,
                &[a, x],
                || format!("e(¬_a x) {transported:?}, ¬_e(a) e(x) {direct:?}, ¬e(x) ∨ e(a) {global:?}"),
            )?;
        }
    }
    Ok(())
}

fn ext_universal_property(s: &Subject, ctx: &Context) -> Result<(), Witness> {
    if s.nl.size() > UNIVERSAL_BASE_LIMIT {
        return Ok(());
    }
    let bounds = SearchBounds {
        max_base: UNIVERSAL_BASE_LIMIT,
        max_target: UNIVERSAL_TARGET_LIMIT,
    };
    for (i, m) in ctx.targets.iter().enumerate() {
        match check_universal_property(&s.ext, m, bounds) {
            Ok(true) => {}
            Ok(false) => {
                return Err(fail(
                    &[],
                    format!("factorization not unique into target {i} ({} elements)", m.size()),
                ))
            }
            Err(e) => return Err(fail(&[], format!("target {i}: {e}"))),
        }
    }
    Ok(())
}

fn ext_lemma_upset_annihilator(s: &Subject, _: &Context) -> Result<(), Witness> {
    ensure(check_lemma_upset_and_annihilator(&s.ext), &[], || {
        "image of [a) or of a^⊤ is wrong".into()
    })
}

fn ext_preservation(s: &Subject, _: &Context) -> Result<(), Witness> {
    ensure(check_preservation(&s.ext), &[], || {
        "dual atoms, boolean, complemented or irreducible elements not preserved".into()
    })
}

fn ext_phi_isomorphism(s: &Subject, _: &Context) -> Result<(), Witness> {
    ensure(check_phi_isomorphism(&s.ext), &[], || {
        "filter map is not a lattice isomorphism".into()
    })
}

fn ext_commuting_diagram(s: &Subject, _: &Context) -> Result<(), Witness> {
    let ext = &s.ext;
    if check_commuting_diagram(ext) {
        return Ok(());
    }
    let bad: Vec<ElementId> = (0..s.nl.size())
        .filter(|&a| pi(ext.lattice(), ext.embed(a)) != ext.embed(pi(&s.nl, a)))
        .collect();
    Err(fail(&bad, "pi does not commute with the embedding"))
}

// representation

fn rep_structure_valid(s: &Subject, _: &Context) -> Result<(), Witness> {
    let dn = s.structure();
    let family = dn.one_family().iter().map(|u| u.members().clone()).collect();
    validate_dn(dn.poset().clone(), family)
        .map(drop)
        .map_err(|e| fail(&[], e.to_string()))
}

fn rep_gamma_axioms(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    ensure(nl.meet_of_set(&ElemSet::new()) == Some(nl.top()), &[], || {
        "empty meet is not the top".into()
    })?;
    let irr = s.ext.irr();
    for (i, &x) in irr.iter().enumerate() {
        let above: ElemSet = irr.iter().copied().filter(|&y| nl.leq(x, y)).collect();
        ensure(nl.meet_of_set(&above) == Some(x), &[x], || {
            format!("irreducible {i} is not the meet of [x) in Irr")
        })?;
    }
    Ok(())
}

fn rep_representation(s: &Subject, _: &Context) -> Result<(), Witness> {
    let nl = &s.nl;
    ensure(check_representation(nl), &[], || {
        "A is not isomorphic to N(S(A)) via ê".into()
    })?;
    let dn = s_of(nl);
    let irr = s.ext.irr();
    let table = representation_map(nl, &dn).ok_or_else(|| fail(&[], "ê leaves the family"))?;
    for a in 0..nl.size() {
        let expected: ElemSet = (0..irr.len()).filter(|&i| !nl.leq(a, irr[i])).collect();
        ensure(dn.one_family()[table[a]].members() == &expected, &[a], || {
            "witness differs from ê".into()
        })?;
    }
    Ok(())
}

fn rep_round_trip(s: &Subject, _: &Context) -> Result<(), Witness> {
    if let Some(dn) = &s.dn {
        ensure(check_round_trip(dn), &[], || "X is not isomorphic to Irr(N(X))".into())?;
    }
    ensure(check_round_trip(&s_of(&s.nl)), &[], || {
        "Irr(A) is not isomorphic to Irr(N(S(A)))".into()
    })
}

fn rep_meet_characterization(s: &Subject, _: &Context) -> Result<(), Witness> {
    let dn = s.structure();
    let n = n_of(&dn);
    let family = dn.one_family();
    for (i, j) in pairs(family.len()) {
        let inter = family[i].members().intersection(family[j].members());
        let expected = family.iter().position(|u| u.members() == &inter);
        let got = n.meet_of_set(&[i, j].into_iter().collect());
        ensure(got == expected, &[i, j], || {
            format!("meet {got:?}, intersection member {expected:?}")
        })?;
    }
    Ok(())
}

fn rep_birkhoff(s: &Subject, _: &Context) -> Result<(), Witness> {
    let dn = s.structure();
    let all = enumerate_downsets(dn.poset()).len();
    let full = dn.one_family().len() == all;
    ensure(n_of(&dn).is_lattice() == full, &[], || {
        "N(X) is a lattice but γ is not constant".into()
    })?;
    if s.nl.is_lattice() {
        let sa = s_of(&s.nl);
        let total = enumerate_downsets(sa.poset()).len();
        ensure(sa.one_family().len() == total, &[], || {
            "γ of a lattice is not constant".into()
        })?;
        ensure(n_of(&sa).size() == total, &[], || "N(S(A)) differs from D(S(A))".into())?;
    }
    Ok(())
}
