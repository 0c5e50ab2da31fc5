//! C ABI for `minlocal`.
//!
//! Every fallible call returns a [`MinlocalStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`minlocal_last_error`] on the same thread. Handles returned through
//! out-pointers are owned by the caller and released with the matching
//! `_free` function; strings returned as `char *` are released with
//! [`minlocal_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use minlocal::cyclotomic::{hensel_root_count, mu_order, power_class_index, Cardinality};
use minlocal::decider::{decide, Decision, Tri};
use minlocal::fields::{teichmuller, FieldDescriptor};
use minlocal::iwasawa::{decompose_text, IwasawaReport};
use minlocal::matrices::GroupKind;
use minlocal::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinlocalStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    InsufficientPrecision = 5,
    NotInGroup = 6,
    Unsupported = 7,
    Computation = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinlocalTri {
    Yes = 0,
    No = 1,
    Unknown = 2,
}

impl From<Tri> for MinlocalTri {
    fn from(t: Tri) -> Self {
        match t {
            Tri::Yes => MinlocalTri::Yes,
            Tri::No => MinlocalTri::No,
            Tri::Unknown => MinlocalTri::Unknown,
        }
    }
}

/// Opaque verdict handle.
pub struct MinlocalVerdict {
    decision: Decision,
    citation: CString,
}

/// Opaque Iwasawa decomposition handle.
pub struct MinlocalIwasawa {
    report: IwasawaReport,
    b: CString,
    k: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

struct Failure(MinlocalStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) => MinlocalStatus::Parse,
            Error::InvalidPrime(_)
            | Error::InvalidPrimePower(_)
            | Error::Dimension(_)
            | Error::ZeroResidue(_)
            | Error::InvalidSubfield(_)
            | Error::KindMismatch(_)
            | Error::PrecisionTooLarge { .. } => MinlocalStatus::InvalidArgument,
            Error::InsufficientPrecision(_) | Error::Indeterminate(_) | Error::OracleDidNotStabilize(_) => {
                MinlocalStatus::InsufficientPrecision
            }
            Error::NotInGroup(_) => MinlocalStatus::NotInGroup,
            Error::Unsupported(_) | Error::NotComplete(_) | Error::CompleteField(_) => MinlocalStatus::Unsupported,
            _ => MinlocalStatus::Computation,
        };
        Failure(status, e.to_string())
    }
}

/// Runs `f`, converting errors and panics into a status plus last-error text.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MinlocalStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            MinlocalStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            MinlocalStatus::Panic
        }
    }
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(MinlocalStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(MinlocalStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(MinlocalStatus::NullPointer, format!("{name} is null")));
    }
    out.write(value);
    Ok(())
}

fn parse_field(s: &str) -> Result<FieldDescriptor, Failure> {
    s.parse::<FieldDescriptor>().map_err(Failure::from)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn minlocal_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn minlocal_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer returned by a `_to_json` function that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn minlocal_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Decides `group(n, field)` and stores a new verdict handle in `*out`.
///
/// # Safety
/// `group` and `field` must be NUL-terminated strings; `out` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn minlocal_decide(
    group: *const c_char,
    field: *const c_char,
    n: u64,
    out: *mut *mut MinlocalVerdict,
) -> MinlocalStatus {
    guard(|| {
        let group: GroupKind = read_str(group, "group")?.parse()?;
        let field = parse_field(read_str(field, "field")?)?;
        let verdict = decide(group, &field, n)?;
        let citation = CString::new(verdict.citation.clone()).unwrap_or_default();
        let handle = Box::new(MinlocalVerdict { decision: Decision { group, field, n, verdict }, citation });
        write_out(out, Box::into_raw(handle), "out")
    })
}

/// # Safety
/// `v` must be null or a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn minlocal_verdict_minimal(v: *const MinlocalVerdict) -> MinlocalTri {
    v.as_ref().map_or(MinlocalTri::Unknown, |v| v.decision.verdict.minimal.into())
}

/// # Safety
/// `v` must be null or a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn minlocal_verdict_totally_minimal(v: *const MinlocalVerdict) -> MinlocalTri {
    v.as_ref().map_or(MinlocalTri::Unknown, |v| v.decision.verdict.totally_minimal.into())
}

/// Citation tag, owned by the handle.
///
/// # Safety
/// `v` must be null or a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn minlocal_verdict_citation(v: *const MinlocalVerdict) -> *const c_char {
    v.as_ref().map_or(ptr::null(), |v| v.citation.as_ptr())
}

/// # Safety
/// `v` must be null or a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn minlocal_verdict_has_witness(v: *const MinlocalVerdict) -> bool {
    v.as_ref().is_some_and(|v| v.decision.verdict.witness.is_some())
}

/// The verdict record as JSON; free with [`minlocal_string_free`].
///
/// # Safety
/// `v` must be null or a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn minlocal_verdict_to_json(v: *const MinlocalVerdict) -> *mut c_char {
    v.as_ref().and_then(|v| serde_json::to_string(&v.decision).ok()).map_or(ptr::null_mut(), into_c_string)
}

/// # Safety
/// `v` must be null or a handle from [`minlocal_decide`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn minlocal_verdict_free(v: *mut MinlocalVerdict) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// `|μ_n(F)|`.
///
/// # Safety
/// `field` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn minlocal_mu_order(field: *const c_char, n: u64, out: *mut u64) -> MinlocalStatus {
    guard(|| {
        let field = parse_field(read_str(field, "field")?)?;
        write_out(out, mu_order(&field, n)?, "out")
    })
}

/// Number of solutions of `x^n = 1` in `Z_p`, counted by Hensel lifting.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn minlocal_hensel_root_count(
    p: u64,
    n: u64,
    start_precision: u32,
    out: *mut u64,
) -> MinlocalStatus {
    guard(|| write_out(out, hensel_root_count(p, n, start_precision)?, "out"))
}

/// `[F^× : F^×n]` for a complete field. When the index is infinite,
/// `*infinite` is set and `*out` is 0.
///
/// # Safety
/// `field` must be a NUL-terminated string; `out` and `infinite` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn minlocal_power_class_index(
    field: *const c_char,
    n: u64,
    out: *mut u64,
    infinite: *mut bool,
) -> MinlocalStatus {
    guard(|| {
        let field = parse_field(read_str(field, "field")?)?;
        let (value, inf) = match power_class_index(&field, n)? {
            Cardinality::Finite(k) => (k, false),
            Cardinality::Infinite => (0, true),
        };
        write_out(out, value, "out")?;
        write_out(infinite, inf, "infinite")
    })
}

/// Teichmüller representative of `a mod p`, as an integer modulo `p^precision`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn minlocal_teichmuller(a: u64, p: u64, precision: u32, out: *mut u64) -> MinlocalStatus {
    guard(|| {
        let t = teichmuller(a, p, precision)?;
        write_out(out, t.residue(precision)?, "out")
    })
}

/// Iwasawa decomposition of a matrix in the CLI text format over `R`, `C`
/// or `Qp=p`.
///
/// # Safety
/// `field` and `matrix` must be NUL-terminated strings; `out` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn minlocal_iwasawa(
    field: *const c_char,
    matrix: *const c_char,
    precision: u32,
    out: *mut *mut MinlocalIwasawa,
) -> MinlocalStatus {
    guard(|| {
        let field = parse_field(read_str(field, "field")?)?;
        let report = decompose_text(&field, read_str(matrix, "matrix")?, precision)?;
        let b = CString::new(report.b.clone()).unwrap_or_default();
        let k = CString::new(report.k.clone()).unwrap_or_default();
        write_out(out, Box::into_raw(Box::new(MinlocalIwasawa { report, b, k })), "out")
    })
}

/// Triangular factor in the matrix text format, owned by the handle.
///
/// # Safety
/// `h` must be null or a live decomposition handle.
#[no_mangle]
pub unsafe extern "C" fn minlocal_iwasawa_b(h: *const MinlocalIwasawa) -> *const c_char {
    h.as_ref().map_or(ptr::null(), |h| h.b.as_ptr())
}

/// Compact factor in the matrix text format, owned by the handle.
///
/// # Safety
/// `h` must be null or a live decomposition handle.
#[no_mangle]
pub unsafe extern "C" fn minlocal_iwasawa_k(h: *const MinlocalIwasawa) -> *const c_char {
    h.as_ref().map_or(ptr::null(), |h| h.k.as_ptr())
}

/// # Safety
/// `h` must be null or a live decomposition handle.
#[no_mangle]
pub unsafe extern "C" fn minlocal_iwasawa_verified(h: *const MinlocalIwasawa) -> bool {
    h.as_ref().is_some_and(|h| h.report.verified)
}

/// # Safety
/// `h` must be null or a live decomposition handle.
#[no_mangle]
pub unsafe extern "C" fn minlocal_iwasawa_to_json(h: *const MinlocalIwasawa) -> *mut c_char {
    h.as_ref().and_then(|h| serde_json::to_string(&h.report).ok()).map_or(ptr::null_mut(), into_c_string)
}

/// # Safety
/// `h` must be null or a handle from [`minlocal_iwasawa`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn minlocal_iwasawa_free(h: *mut MinlocalIwasawa) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}
