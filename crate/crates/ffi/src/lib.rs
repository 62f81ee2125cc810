//! C ABI over `nearlat`.
//!
//! Every function returns an [`NlStatus`] and writes results through out
//! pointers or into caller-owned buffers. Handles come from
//! [`nl_from_join_table`] or [`nl_from_json`] and are released with
//! [`nl_free`]. After a failing call, [`nl_last_error`] copies the message
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use nearlat::extension::{free_extension, irreducibles};
use nearlat::format::parse_input;
use nearlat::report::AnalysisReport;
use nearlat::representation::check_representation;
use nearlat::structure::{boolean_elements, complemented_elements, dense_elements, dual_atoms, is_semi_boolean, pi};
use nearlat::{from_join_table, ElemSet, Nearlattice};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NlStatus {
    Ok = 0,
    NullPointer = 1,
    ParseError = 2,
    Invalid = 3,
    OutOfRange = 4,
    NoMeet = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

/// Element classes for [`nl_classify`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NlElementClass {
    DualAtom = 0,
    Boolean = 1,
    Complemented = 2,
    Dense = 3,
    Irreducible = 4,
}

/// Opaque handle to a validated nearlattice.
pub struct NlNearlattice(Nearlattice);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: NlStatus, message: impl Into<String>) -> NlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
    status
}

fn guard(f: impl FnOnce() -> NlStatus) -> NlStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(NlStatus::Internal, "internal panic"))
}

unsafe fn handle<'a>(nl: *const NlNearlattice) -> Result<&'a Nearlattice, NlStatus> {
    nl.as_ref()
        .map(|h| &h.0)
        .ok_or_else(|| fail(NlStatus::NullPointer, "null handle"))
}

unsafe fn write<T>(out: *mut T, value: T) -> NlStatus {
    match out.as_mut() {
        Some(slot) => {
            *slot = value;
            NlStatus::Ok
        }
        None => fail(NlStatus::NullPointer, "null output pointer"),
    }
}

fn element(nl: &Nearlattice, x: usize) -> Result<usize, NlStatus> {
    if x < nl.size() {
        Ok(x)
    } else {
        Err(fail(
            NlStatus::OutOfRange,
            format!("element {x} out of range for size {}", nl.size()),
        ))
    }
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Builds a nearlattice from a row-major `size * size` join table.
///
/// # Safety
/// `table` must point to `size * size` readable values and `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn nl_from_join_table(
    size: usize,
    table: *const usize,
    top: usize,
    out: *mut *mut NlNearlattice,
) -> NlStatus {
    guard(|| {
        if table.is_null() || out.is_null() {
            return fail(NlStatus::NullPointer, "null argument");
        }
        let flat = std::slice::from_raw_parts(table, size * size);
        let rows: Vec<Vec<usize>> = flat.chunks(size.max(1)).map(<[usize]>::to_vec).collect();
        match from_join_table(size, &rows, top) {
            Ok(nl) => write(out, Box::into_raw(Box::new(NlNearlattice(nl)))),
            Err(e) => fail(NlStatus::Invalid, e.to_string()),
        }
    })
}

/// Builds a nearlattice from the text of a nearlattice file, or `N(X)` from
/// a DN file.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_from_json(json: *const c_char, out: *mut *mut NlNearlattice) -> NlStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(NlStatus::NullPointer, "null argument");
        }
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(NlStatus::ParseError, "input is not UTF-8");
        };
        match parse_input(text) {
            Ok(input) => write(out, Box::into_raw(Box::new(NlNearlattice(input.into_nearlattice())))),
            Err(e) if e.is_parse_error() => fail(NlStatus::ParseError, e.to_string()),
            Err(e) => fail(NlStatus::Invalid, e.to_string()),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `nl` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nl_free(nl: *mut NlNearlattice) {
    if !nl.is_null() {
        drop(Box::from_raw(nl));
    }
}

/// # Safety
/// `nl` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_size(nl: *const NlNearlattice, out: *mut usize) -> NlStatus {
    guard(|| write(out, tri!(handle(nl)).size()))
}

/// # Safety
/// `nl` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_top(nl: *const NlNearlattice, out: *mut usize) -> NlStatus {
    guard(|| write(out, tri!(handle(nl)).top()))
}

/// # Safety
/// `nl` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_join(nl: *const NlNearlattice, x: usize, y: usize, out: *mut usize) -> NlStatus {
    guard(|| {
        let nl = tri!(handle(nl));
        let (x, y) = (tri!(element(nl, x)), tri!(element(nl, y)));
        write(out, nl.join(x, y))
    })
}

/// # Safety
/// `nl` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_leq(nl: *const NlNearlattice, x: usize, y: usize, out: *mut bool) -> NlStatus {
    guard(|| {
        let nl = tri!(handle(nl));
        let (x, y) = (tri!(element(nl, x)), tri!(element(nl, y)));
        write(out, nl.leq(x, y))
    })
}

/// Writes `x ∧ y`, or returns `NoMeet` when the pair has no common lower
/// bound.
///
/// # Safety
/// `nl` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_meet(nl: *const NlNearlattice, x: usize, y: usize, out: *mut usize) -> NlStatus {
    guard(|| {
        let nl = tri!(handle(nl));
        let (x, y) = (tri!(element(nl, x)), tri!(element(nl, y)));
        match nl.meet(x, y) {
            Some(m) => write(out, m),
            None => fail(NlStatus::NoMeet, format!("{x} and {y} have no common lower bound")),
        }
    })
}

/// Writes one flag per element (1 if the element is in the class) into
/// `flags`, which must hold at least `size` bytes.
///
/// # Safety
/// `nl` must be a live handle and `flags` must point to `len` writable
/// bytes.
#[no_mangle]
pub unsafe extern "C" fn nl_classify(
    nl: *const NlNearlattice,
    class: NlElementClass,
    flags: *mut u8,
    len: usize,
) -> NlStatus {
    guard(|| {
        let nl = tri!(handle(nl));
        if flags.is_null() {
            return fail(NlStatus::NullPointer, "null buffer");
        }
        if len < nl.size() {
            return fail(NlStatus::BufferTooSmall, format!("need {} bytes", nl.size()));
        }
        let set: ElemSet = match class {
            NlElementClass::DualAtom => dual_atoms(nl),
            NlElementClass::Boolean => boolean_elements(nl),
            NlElementClass::Complemented => complemented_elements(nl),
            NlElementClass::Dense => dense_elements(nl),
            NlElementClass::Irreducible => irreducibles(nl).into_iter().collect(),
        };
        let out = std::slice::from_raw_parts_mut(flags, nl.size());
        for (x, flag) in out.iter_mut().enumerate() {
            *flag = set.contains(x) as u8;
        }
        NlStatus::Ok
    })
}

/// Writes `π(a)` for every element into `table`.
///
/// # Safety
/// `nl` must be a live handle and `table` must point to `len` writable
/// values.
#[no_mangle]
pub unsafe extern "C" fn nl_pi(nl: *const NlNearlattice, table: *mut usize, len: usize) -> NlStatus {
    guard(|| {
        let nl = tri!(handle(nl));
        if table.is_null() {
            return fail(NlStatus::NullPointer, "null buffer");
        }
        if len < nl.size() {
            return fail(NlStatus::BufferTooSmall, format!("need {} entries", nl.size()));
        }
        let out = std::slice::from_raw_parts_mut(table, nl.size());
        for (a, slot) in out.iter_mut().enumerate() {
            *slot = pi(nl, a);
        }
        NlStatus::Ok
    })
}

/// # Safety
/// `nl` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_is_semi_boolean(nl: *const NlNearlattice, out: *mut bool) -> NlStatus {
    guard(|| write(out, is_semi_boolean(tri!(handle(nl)))))
}

/// Whether the nearlattice is isomorphic to `N(S(A))` via `ê`.
///
/// # Safety
/// `nl` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_check_representation(nl: *const NlNearlattice, out: *mut bool) -> NlStatus {
    guard(|| write(out, check_representation(tri!(handle(nl)))))
}

/// Number of elements of the free distributive lattice extension.
///
/// # Safety
/// `nl` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_free_extension_size(nl: *const NlNearlattice, out: *mut usize) -> NlStatus {
    guard(|| write(out, free_extension(tri!(handle(nl))).lattice().size()))
}

unsafe fn copy_string(text: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> NlStatus {
    if !needed.is_null() {
        *needed = text.len() + 1;
    }
    if buf.is_null() || len < text.len() + 1 {
        return fail(NlStatus::BufferTooSmall, format!("need {} bytes", text.len() + 1));
    }
    std::ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
    *buf.add(text.len()) = 0;
    NlStatus::Ok
}

/// Copies the JSON analysis report, NUL-terminated, into `buf`. The size
/// required (including the NUL) is written to `needed` when it is not null.
///
/// # Safety
/// `nl` must be a live handle; `buf` must be null or point to `len`
/// writable bytes; `needed` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn nl_analyze_json(
    nl: *const NlNearlattice,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> NlStatus {
    guard(|| copy_string(&AnalysisReport::of(tri!(handle(nl))).to_json(), buf, len, needed))
}

/// Copies the calling thread's last error message, NUL-terminated. The
/// size required is written to `needed` when it is not null.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes; `needed` must be
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn nl_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> NlStatus {
    let message = LAST_ERROR.with(|e| e.borrow().clone());
    copy_string(&message, buf, len, needed)
}
