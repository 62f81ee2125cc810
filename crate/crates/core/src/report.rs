//! Per-structure analysis reports.

use std::fmt::Write as _;

use serde::Serialize;

use crate::extension::{free_extension, irreducibles};
use crate::nearlattice::Nearlattice;
use crate::representation::check_representation;
use crate::set::ElemSet;
use crate::structure::{is_semi_boolean, ElementClassification};

/// Everything `analyze` prints. Sets are label lists in carrier order;
/// fields serialize in alphabetical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub boolean_elements: Vec<String>,
    pub complemented_elements: Vec<String>,
    pub dense_elements: Vec<String>,
    pub dual_atoms: Vec<String>,
    pub elements: Vec<String>,
    pub free_extension_size: usize,
    pub irreducibles: Vec<String>,
    /// `[a, π(a)]` for every element, in carrier order.
    pub pi: Vec<(String, String)>,
    pub representation_check: bool,
    pub semi_boolean: bool,
    pub size: usize,
    pub top: String,
}

impl AnalysisReport {
    pub fn of(nl: &Nearlattice) -> Self {
        let c = ElementClassification::of(nl);
        let names = |s: &ElemSet| s.iter().map(|x| nl.label(x).to_string()).collect::<Vec<_>>();
        Self {
            boolean_elements: names(&c.boolean_elements),
            complemented_elements: names(&c.complemented_elements),
            dense_elements: names(&c.dense_elements),
            dual_atoms: names(&c.dual_atoms),
            elements: nl.labels().to_vec(),
            free_extension_size: free_extension(nl).lattice().size(),
            irreducibles: irreducibles(nl).into_iter().map(|x| nl.label(x).to_string()).collect(),
            pi: c
                .pi_table
                .iter()
                .enumerate()
                .map(|(a, &p)| (nl.label(a).to_string(), nl.label(p).to_string()))
                .collect(),
            representation_check: check_representation(nl),
            semi_boolean: is_semi_boolean(nl),
            size: nl.size(),
            top: nl.label(nl.top()).to_string(),
        }
    }

    /// One key per line, keys sorted, values compact.
    pub fn to_json(&self) -> String {
        let serde_json::Value::Object(map) = serde_json::to_value(self).expect("reports serialize") else {
            unreachable!("a struct serializes to an object")
        };
        let lines: Vec<String> = map
            .iter()
            .map(|(k, v)| format!("  {}: {}", serde_json::Value::from(k.as_str()), v))
            .collect();
        format!("{{\n{}\n}}\n", lines.join(",\n"))
    }

    pub fn to_text(&self) -> String {
        let set = |xs: &[String]| format!("{{{}}}", xs.join(", "));
        let mut out = String::new();
        writeln!(out, "elements: {}", set(&self.elements)).unwrap();
        writeln!(out, "size: {}", self.size).unwrap();
        writeln!(out, "top: {}", self.top).unwrap();
        writeln!(out, "dual atoms: {}", set(&self.dual_atoms)).unwrap();
        writeln!(out, "boolean: {}", set(&self.boolean_elements)).unwrap();
        writeln!(out, "complemented: {}", set(&self.complemented_elements)).unwrap();
        writeln!(out, "dense: {}", set(&self.dense_elements)).unwrap();
        writeln!(out, "irreducibles: {}", set(&self.irreducibles)).unwrap();
        writeln!(out, "semi-boolean: {}", self.semi_boolean).unwrap();
        let pi: Vec<String> = self.pi.iter().map(|(a, p)| format!("{a} -> {p}")).collect();
        writeln!(out, "pi: {}", pi.join(", ")).unwrap();
        writeln!(out, "free extension size: {}", self.free_extension_size).unwrap();
        writeln!(
            out,
            "representation: {}",
            if self.representation_check { "ok" } else { "FAILED" }
        )
        .unwrap();
        out
    }
}
