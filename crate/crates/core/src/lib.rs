//! Finite distributive nearlattices.
//!
//! A nearlattice here is a finite join-semilattice with a top element in
//! which every principal upset is a bounded distributive lattice. The crate
//! covers the element theory of such structures (dual atoms, boolean,
//! dense and complemented elements, annihilators), their filters and prime
//! ideals, the free distributive lattice extension realized as the downset
//! lattice of the meet-irreducibles, and the representation of every finite
//! distributive nearlattice by a poset with a distinguished family of
//! downsets (a DN-structure). The [`properties`] module runs all of the
//! structural invariants over a structure or a generated corpus.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod dot;
pub mod extension;
pub mod filters;
pub mod format;
pub mod nearlattice;
pub mod order;
pub mod properties;
pub mod report;
pub mod representation;
pub mod set;
pub mod structure;

/// Index of an element in the carrier of its owning structure.
pub type ElementId = usize;

pub use nearlattice::{find_isomorphism, fixtures, from_join_table, NMap, Nearlattice, NearlatticeError};
pub use order::{enumerate_downsets, validate_poset, Downset, OrderError, Poset};
pub use set::ElemSet;
