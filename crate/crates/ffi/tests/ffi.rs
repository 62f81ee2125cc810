use std::ffi::{c_char, CStr, CString};
use std::process::Command;
use std::ptr;

use nearlat_ffi::*;

const VEE: &str = r#"{"elements": ["a", "b", "1"], "top": 2, "join": [[0, 2, 2], [2, 1, 2], [2, 2, 2]]}"#;

fn from_json(text: &str) -> Result<*mut NlNearlattice, NlStatus> {
    let c = CString::new(text).unwrap();
    let mut h = ptr::null_mut();
    match unsafe { nl_from_json(c.as_ptr(), &mut h) } {
        NlStatus::Ok => Ok(h),
        s => Err(s),
    }
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let mut needed = 0;
    assert_eq!(
        unsafe { nl_last_error(buf.as_mut_ptr(), buf.len(), &mut needed) },
        NlStatus::Ok
    );
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_string()
}

#[test]
fn vee_through_the_abi() {
    let h = from_json(VEE).unwrap();
    unsafe {
        let mut n = 0;
        assert_eq!(nl_size(h, &mut n), NlStatus::Ok);
        assert_eq!(n, 3);
        let mut m = 99;
        assert_eq!(nl_meet(h, 0, 1, &mut m), NlStatus::NoMeet);
        assert_eq!(m, 99);
        assert_eq!(nl_meet(h, 0, 2, &mut m), NlStatus::Ok);
        assert_eq!(m, 0);
        let mut le = false;
        assert_eq!(nl_leq(h, 0, 2, &mut le), NlStatus::Ok);
        assert!(le);
        let mut flags = [9u8; 3];
        assert_eq!(
            nl_classify(h, NlElementClass::DualAtom, flags.as_mut_ptr(), 3),
            NlStatus::Ok
        );
        assert_eq!(flags, [1, 1, 0]);
        assert_eq!(
            nl_classify(h, NlElementClass::Dense, flags.as_mut_ptr(), 3),
            NlStatus::Ok
        );
        assert_eq!(flags, [0, 0, 0]);
        assert_eq!(
            nl_classify(h, NlElementClass::Boolean, flags.as_mut_ptr(), 2),
            NlStatus::BufferTooSmall
        );
        let mut table = [0usize; 3];
        assert_eq!(nl_pi(h, table.as_mut_ptr(), 3), NlStatus::Ok);
        assert_eq!(table, [0, 1, 2]);
        let mut yes = false;
        assert_eq!(nl_is_semi_boolean(h, &mut yes), NlStatus::Ok);
        assert!(yes);
        assert_eq!(nl_check_representation(h, &mut yes), NlStatus::Ok);
        assert!(yes);
        assert_eq!(nl_free_extension_size(h, &mut n), NlStatus::Ok);
        assert_eq!(n, 4);
        assert_eq!(nl_join(h, 0, 7, &mut n), NlStatus::OutOfRange);
        assert!(last_error().contains("out of range"));
        nl_free(h);
    }
}

#[test]
fn join_table_constructor() {
    let table: [usize; 9] = [0, 1, 2, 1, 1, 2, 2, 2, 2];
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(nl_from_join_table(3, table.as_ptr(), 2, &mut h), NlStatus::Ok);
        let mut flags = [0u8; 3];
        assert_eq!(
            nl_classify(h, NlElementClass::Complemented, flags.as_mut_ptr(), 3),
            NlStatus::Ok
        );
        assert_eq!(flags, [1, 0, 1]);
        nl_free(h);
    }
}

#[test]
fn errors() {
    let n5 = r#"{"elements": ["0","a","b","c","1"], "top": 4, "leq": [[0,1],[1,3],[3,4],[0,2],[2,4]]}"#;
    assert_eq!(from_json(n5).unwrap_err(), NlStatus::Invalid);
    assert!(last_error().starts_with("UpsetNotDistributive a=0"));
    assert_eq!(from_json("{\"elements\": [").unwrap_err(), NlStatus::ParseError);
    let mut n = 0;
    unsafe {
        assert_eq!(nl_size(ptr::null(), &mut n), NlStatus::NullPointer);
        nl_free(ptr::null_mut());
        let mut needed = 0;
        assert_eq!(nl_last_error(ptr::null_mut(), 0, &mut needed), NlStatus::BufferTooSmall);
        assert!(needed > 1);
    }
}

#[test]
fn analysis_report() {
    let h = from_json(VEE).unwrap();
    unsafe {
        let mut needed = 0;
        assert_eq!(
            nl_analyze_json(h, ptr::null_mut(), 0, &mut needed),
            NlStatus::BufferTooSmall
        );
        let mut buf = vec![0 as c_char; needed];
        assert_eq!(
            nl_analyze_json(h, buf.as_mut_ptr(), needed, ptr::null_mut()),
            NlStatus::Ok
        );
        let text = CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
        assert!(text.contains("\"semi_boolean\": true"));
        nl_free(h);
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = format!("{dir}/include/nearlat.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "nl_from_json",
        "nl_meet",
        "nl_classify",
        "nl_last_error",
        "NL_STATUS_NO_MEET",
    ] {
        assert!(text.contains(name), "{name} missing from the header");
    }
    let program = tempfile::Builder::new().suffix(".c").tempfile().unwrap();
    std::fs::write(
        program.path(),
        "#include \"nearlat.h\"\nint main(void) { size_t n; return nl_size(NULL, &n) == NL_STATUS_NULL_POINTER ? 0 : 1; }\n",
    )
    .unwrap();
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I", &format!("{dir}/include")])
        .arg(program.path())
        .status()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(status.success());
}
