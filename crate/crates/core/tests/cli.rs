use std::path::PathBuf;
use std::process::{Command, Output};

use nearlat::find_isomorphism;
use nearlat::format::{parse_dn, parse_nearlattice};
use nearlat::nearlattice::fixtures::vee;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn nearlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nearlat")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn validate_exit_codes() {
    let ok = nearlat(&["validate", &data("vee.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "valid\n");
    assert_eq!(nearlat(&["validate", &data("vee.dn.json")]).status.code(), Some(0));
    let bad = nearlat(&["validate", &data("n5.json")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("UpsetNotDistributive a=0"));
    let truncated = nearlat(&["validate", &data("truncated.json")]);
    assert_eq!(truncated.status.code(), Some(2));
    assert!(
        stderr(&truncated).contains("ParseError at line 5, column"),
        "{}",
        stderr(&truncated)
    );
    assert_eq!(nearlat(&["validate", &data("missing.json")]).status.code(), Some(2));
}

#[test]
fn analyze_is_deterministic() {
    let a = nearlat(&["analyze", &data("diamond.json"), "--format", "json"]);
    let b = nearlat(&["analyze", &data("diamond.json"), "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let one = stdout(&nearlat(&["analyze", &data("one.json")]));
    assert!(one.contains("semi-boolean: true"));
}

#[test]
fn represent_then_construct() {
    let dir = tempfile::tempdir().unwrap();
    let dn_path = dir.path().join("vee.dn.json");
    let rep = nearlat(&["represent", &data("vee.json")]);
    assert!(rep.status.success());
    let dn = parse_dn(&stdout(&rep)).unwrap();
    assert_eq!(dn.poset().size(), 2);
    assert_eq!(dn.one_family().len(), 3);
    std::fs::write(&dn_path, &rep.stdout).unwrap();
    let built = nearlat(&["construct", dn_path.to_str().unwrap()]);
    assert!(built.status.success());
    let nl = parse_nearlattice(&stdout(&built)).unwrap();
    assert!(find_isomorphism(&nl, &vee()).is_some());
    let empty = parse_dn(&stdout(&nearlat(&["represent", &data("one.json")]))).unwrap();
    assert_eq!(empty.poset().size(), 0);
    assert_eq!(nearlat(&["construct", &data("vee.json")]).status.code(), Some(2));
}

#[test]
fn generated_corpus_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = nearlat(&["generate", "--max-size", "3", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("generated 17 structures\n"));
    let mut checked = 0;
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.to_str().unwrap();
        if !name.ends_with(".dn.json") {
            continue;
        }
        let original = parse_nearlattice(&std::fs::read_to_string(name.replace(".dn.json", ".json")).unwrap()).unwrap();
        let rep = nearlat(&["represent", name.replace(".dn.json", ".json").as_str()]);
        let rep_path = dir.path().join("rep.tmp");
        std::fs::write(&rep_path, &rep.stdout).unwrap();
        let back = nearlat(&["construct", rep_path.to_str().unwrap()]);
        let rebuilt = parse_nearlattice(&stdout(&back)).unwrap();
        assert!(find_isomorphism(&original, &rebuilt).is_some(), "{name}");
        checked += 1;
    }
    assert_eq!(checked, 17);
}

#[test]
fn extend_and_dot() {
    let ext = parse_nearlattice(&stdout(&nearlat(&["extend", &data("vee.json")]))).unwrap();
    assert_eq!(ext.size(), 4);
    assert!(ext.is_lattice());
    let hasse = stdout(&nearlat(&["export-dot", &data("vee.json"), "--what", "hasse"]));
    assert!(hasse.contains("n0 -> n2;") && hasse.contains("n1 -> n2;"));
    assert_eq!(hasse.matches("->").count(), 2);
    let extension = stdout(&nearlat(&["export-dot", &data("vee.json"), "--what", "extension"]));
    assert_eq!(extension.matches("[label=").count(), 4);
    let irr = stdout(&nearlat(&["export-dot", &data("chain3.json"), "--what", "irr"]));
    assert_eq!(irr.matches("->").count(), 1);
    let single = stdout(&nearlat(&["export-dot", &data("one.json")]));
    assert_eq!(single.matches("[label=").count(), 1);
    assert!(!single.contains("->"));
}

#[test]
fn check_command() {
    let corpus = nearlat(&["check", "--corpus", "2"]);
    assert_eq!(corpus.status.code(), Some(0));
    assert_eq!(stdout(&corpus), "checked 5 structures, 43 properties, 0 failures\n");
    let file = nearlat(&["check", &data("chain3.json"), "--verbose", "--format", "json"]);
    assert_eq!(file.status.code(), Some(0));
    let lines: Vec<String> = stdout(&file).lines().map(String::from).collect();
    assert_eq!(lines.len(), 44);
    assert!(lines[0].starts_with("{\"property\":\"order.principal_sets\""));
    let corrupted = nearlat(&["check", &data("corrupted.json")]);
    assert_eq!(corrupted.status.code(), Some(1));
    assert!(stdout(&corrupted).contains("properties skipped"));
    let bound = nearlat(&["check", "--corpus", "9"]);
    assert_eq!(bound.status.code(), Some(1));
    assert!(stderr(&bound).contains("BoundExceeded"));
}

#[test]
fn environment_bound() {
    let out = Command::new(env!("CARGO_BIN_EXE_nearlat"))
        .args(["check", "--corpus", "2"])
        .env("NEARLAT_MAX_SIZE", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("BoundExceeded: size 2 exceeds the bound 1"));
}
