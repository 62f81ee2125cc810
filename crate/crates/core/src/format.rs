//! JSON file formats.
//!
//! A nearlattice file lists element labels, the index of the top and either
//! the join table or the order as `[lower, upper]` index pairs:
//!
//! ```json
//! {"elements": ["a", "b", "1"], "top": 2, "join": [[0, 2, 2], [2, 1, 2], [2, 2, 2]]}
//! {"elements": ["a", "b", "1"], "top": 2, "leq": [[0, 2], [1, 2]]}
//! ```
//!
//! Order pairs are closed reflexively and transitively before the joins are
//! derived. A DN file gives a poset and the minimal downsets valued 1; the
//! reader closes them upward and adds the members S1 and S2 force:
//!
//! ```json
//! {"poset": {"elements": ["a", "b"], "leq": []}, "one_family": [[0], [1]]}
//! ```

use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::nearlattice::{from_join_table, Nearlattice, NearlatticeError};
use crate::order::{OrderError, Poset};
use crate::representation::{DNStructure, DnError};
use crate::set::ElemSet;
use crate::ElementId;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("ParseError at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("ParseError: {0}")]
    Schema(String),
    #[error(transparent)]
    Nearlattice(#[from] NearlatticeError),
    #[error(transparent)]
    Dn(#[from] DnError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

impl FormatError {
    /// True for malformed input, false for well-formed input describing an
    /// invalid structure.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, FormatError::Parse { .. } | FormatError::Schema(_))
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NearlatticeFile {
    elements: Vec<String>,
    top: ElementId,
    join: Option<Vec<Vec<ElementId>>>,
    leq: Option<Vec<(ElementId, ElementId)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetFile {
    elements: Vec<String>,
    #[serde(default)]
    leq: Vec<(ElementId, ElementId)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DnFile {
    poset: PosetFile,
    #[serde(default)]
    one_family: Vec<Vec<ElementId>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyFile {
    Dn(DnFile),
    Nearlattice(NearlatticeFile),
}

/// The contents of an input file.
#[derive(Debug, Clone)]
pub enum Input {
    Nearlattice(Nearlattice),
    Dn(DNStructure),
}

impl Input {
    /// The nearlattice itself, or `N(X)` for a DN-structure.
    pub fn into_nearlattice(self) -> Nearlattice {
        match self {
            Input::Nearlattice(nl) => nl,
            Input::Dn(dn) => crate::representation::n_of(&dn),
        }
    }
}

pub fn parse_nearlattice(text: &str) -> Result<Nearlattice, FormatError> {
    build_nearlattice(serde_json::from_str(text)?)
}

pub fn parse_dn(text: &str) -> Result<DNStructure, FormatError> {
    build_dn(serde_json::from_str(text)?)
}

/// Reads either kind of file, telling them apart by the `poset` key.
pub fn parse_input(text: &str) -> Result<Input, FormatError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let file: AnyFile = serde_json::from_value(value)
        .map_err(|_| FormatError::Schema("expected a nearlattice file or a DN file".into()))?;
    match file {
        AnyFile::Dn(f) => build_dn(f).map(Input::Dn),
        AnyFile::Nearlattice(f) => build_nearlattice(f).map(Input::Nearlattice),
    }
}

fn build_nearlattice(file: NearlatticeFile) -> Result<Nearlattice, FormatError> {
    let size = file.elements.len();
    match (file.join, file.leq) {
        (Some(join), None) => Ok(from_join_table(size, &join, file.top)?.with_labels(file.elements)?),
        (None, Some(leq)) => Ok(Nearlattice::from_order_pairs(file.elements, &leq, file.top)?),
        _ => Err(FormatError::Schema("give exactly one of \"join\" and \"leq\"".into())),
    }
}

fn build_dn(file: DnFile) -> Result<DNStructure, FormatError> {
    let n = file.poset.elements.len();
    let poset = Poset::from_pairs(n, &file.poset.leq)?.with_labels(file.poset.elements);
    let mut generators = Vec::new();
    for member in file.one_family {
        if let Some(&x) = member.iter().find(|&&x| x >= n) {
            return Err(OrderError::OutOfRange { x, size: n }.into());
        }
        generators.push(member.into_iter().collect::<ElemSet>());
    }
    Ok(DNStructure::from_minimal(poset, generators)?)
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn json_list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let inner: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", inner.join(", "))
}

/// Writes a nearlattice file with its join table, one row per line.
pub fn nearlattice_to_json(nl: &Nearlattice) -> String {
    let mut out = String::from("{\n");
    let labels = nl.labels().iter().map(|l| json_str(l));
    writeln!(out, "  \"elements\": {},", json_list(labels)).unwrap();
    writeln!(out, "  \"top\": {},", nl.top()).unwrap();
    out.push_str("  \"join\": [\n");
    let rows: Vec<String> = nl
        .join_table()
        .into_iter()
        .map(|r| format!("    {}", json_list(r)))
        .collect();
    out.push_str(&rows.join(",\n"));
    out.push_str("\n  ]\n}\n");
    out
}

/// Writes a DN file: covering pairs of the poset and the minimal members
/// of the family.
pub fn dn_to_json(dn: &DNStructure) -> String {
    let p = dn.poset();
    let mut out = String::from("{\n  \"poset\": {\n");
    let labels = (0..p.size()).map(|x| json_str(&p.label(x)));
    writeln!(out, "    \"elements\": {},", json_list(labels)).unwrap();
    let covers = p.covering_pairs().into_iter().map(|(x, y)| format!("[{x}, {y}]"));
    writeln!(out, "    \"leq\": {}", json_list(covers)).unwrap();
    out.push_str("  },\n");
    let minimal = dn.minimal_members().into_iter().map(|u| json_list(u.iter()));
    writeln!(out, "  \"one_family\": {}", json_list(minimal)).unwrap();
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nearlattice::{find_isomorphism, fixtures::*};
    use crate::representation::s_of;

    #[test]
    fn round_trips() {
        for nl in [one(), chain3(), vee(), diamond(), vee3()] {
            let back = parse_nearlattice(&nearlattice_to_json(&nl)).unwrap();
            assert_eq!(back, nl);
            assert_eq!(back.labels(), nl.labels());
            let dn = s_of(&nl);
            let back = parse_dn(&dn_to_json(&dn)).unwrap();
            assert_eq!(back, dn);
        }
    }

    #[test]
    fn order_form() {
        let nl = parse_nearlattice(r#"{"elements": ["a", "b", "1"], "top": 2, "leq": [[0, 2], [1, 2]]}"#).unwrap();
        assert!(find_isomorphism(&nl, &vee()).is_some());
        let err = parse_nearlattice(r#"{"elements": ["a", "b"], "top": 1, "leq": []}"#).unwrap_err();
        assert!(matches!(
            err,
            FormatError::Nearlattice(NearlatticeError::NoJoin { x: 0, y: 1 })
        ));
    }

    #[test]
    fn detects_kind() {
        let dn = r#"{"poset": {"elements": ["x", "y"]}, "one_family": [[0], [1]]}"#;
        let Input::Dn(d) = parse_input(dn).unwrap() else {
            panic!("expected a DN file")
        };
        assert_eq!(d.one_family().len(), 3);
        let Input::Dn(d) = parse_input(r#"{"poset": {"elements": ["x", "y"]}}"#).unwrap() else {
            panic!()
        };
        assert_eq!(d.one_family().len(), 3);
        assert!(matches!(
            parse_input(&nearlattice_to_json(&vee())),
            Ok(Input::Nearlattice(_))
        ));
    }

    #[test]
    fn parse_errors() {
        let err = parse_input("{\n  \"elements\": [\"a\",").unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 2, .. }), "{err}");
        assert!(err.is_parse_error());
        assert!(parse_input(r#"{"elements": ["a"], "top": 0}"#)
            .unwrap_err()
            .is_parse_error());
        assert!(parse_input(r#"{"colour": 3}"#).unwrap_err().is_parse_error());
        let (labels, table, top) = n5_table();
        let text = format!(r#"{{"elements": {labels:?}, "top": {top}, "join": {table:?}}}"#);
        let err = parse_input(&text).unwrap_err();
        assert!(!err.is_parse_error());
        assert!(err.to_string().starts_with("UpsetNotDistributive a=0"), "{err}");
    }
}
