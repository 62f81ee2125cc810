//! Graphviz output of order diagrams.

use std::fmt::Write as _;

use crate::extension::FreeExtension;
use crate::nearlattice::Nearlattice;
use crate::order::Poset;

fn quoted(label: &str) -> String {
    let mut out = String::from("\"");
    for c in label.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// The Hasse diagram: one node per element in index order, one edge per
/// covering pair pointing upward.
pub fn poset_dot(name: &str, poset: &Poset) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quoted(name)).unwrap();
    out.push_str("  rankdir=BT;\n");
    for x in 0..poset.size() {
        writeln!(out, "  n{x} [label={}];", quoted(&poset.label(x))).unwrap();
    }
    for (x, y) in poset.covering_pairs() {
        writeln!(out, "  n{x} -> n{y};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn labelled_order(nl: &Nearlattice) -> Poset {
    nl.order().clone().with_labels(nl.labels().to_vec())
}

pub fn hasse_dot(nl: &Nearlattice) -> String {
    poset_dot("hasse", &labelled_order(nl))
}

pub fn extension_dot(ext: &FreeExtension) -> String {
    poset_dot("extension", &labelled_order(ext.lattice()))
}

pub fn irreducibles_dot(ext: &FreeExtension) -> String {
    poset_dot("irreducibles", ext.irr_poset())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::free_extension;
    use crate::nearlattice::fixtures::*;

    #[test]
    fn vee_hasse() {
        let dot = hasse_dot(&vee());
        assert!(dot.contains("n0 [label=\"a\"];"));
        assert!(dot.contains("n0 -> n2;"));
        assert!(dot.contains("n1 -> n2;"));
        assert_eq!(dot.matches("->").count(), 2);
    }

    #[test]
    fn vee_extension_is_diamond() {
        let dot = extension_dot(&free_extension(&vee()));
        assert_eq!(dot.matches("[label=").count(), 4);
        assert_eq!(dot.matches("->").count(), 4);
    }

    #[test]
    fn single_node() {
        let dot = hasse_dot(&one());
        assert_eq!(dot.matches("[label=").count(), 1);
        assert!(!dot.contains("->"));
        assert_eq!(irreducibles_dot(&free_extension(&one())).matches("[label=").count(), 0);
    }

    #[test]
    fn escapes_labels() {
        assert_eq!(quoted("a\"b\\"), "\"a\\\"b\\\\\"");
    }
}
