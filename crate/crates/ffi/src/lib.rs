//! C ABI over `prat-core`.
//!
//! Objects are opaque handles created by `*_new`/`*_load` functions and
//! released with the matching `*_free`. Every fallible call returns a
//! [`PratStatus`]; on failure a message is available from
//! [`prat_last_error_message`] on the same thread. Strings returned through
//! `char **` out-parameters are owned by the caller and released with
//! [`prat_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use num_bigint::BigInt;
use prat_core::cli::render_verdict;
use prat_core::families::imag_quadratic_class_number;
use prat_core::harness::{
    load_records, parse_coefficients, parse_records_csv, render_table_csv, reproduce_table,
    FieldRecord, RecordFormat,
};
use prat_core::rationality::{verdict, FieldContext, Finding, VerdictStatus};
use prat_core::recurrence::{f_index_mod, RecurrenceSpec};
use prat_core::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PratStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InputError = 3,
    DomainError = 4,
    Unsupported = 5,
    OutOfRange = 6,
    InvariantViolation = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PratVerdictStatus {
    PRational = 0,
    NotPRational = 1,
    Undetermined = 2,
    NotApplicable = 3,
}

/// `p` divides the class number.
pub const PRAT_REASON_CLASS_NUMBER_DIVISIBLE: u32 = 1;
/// The unit congruence has no witness.
pub const PRAT_REASON_TORSION_NONTRIVIAL: u32 = 2;
/// The criterion does not apply at this prime.
pub const PRAT_REASON_NOT_APPLICABLE: u32 = 4;
/// The class field condition could not be decided.
pub const PRAT_REASON_CONDITION1_UNDETERMINED: u32 = 8;
/// The class field condition fails.
pub const PRAT_REASON_CONDITION1_FAILS: u32 = 16;

/// A validated field with its unit data.
pub struct PratField {
    ctx: FieldContext,
}

/// A set of loaded field records.
pub struct PratRecordSet {
    records: Vec<FieldRecord>,
    rejected: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> PratStatus {
    match e {
        Error::Input(_) | Error::Parse { .. } | Error::Validation { .. } | Error::Reducible(_) => {
            PratStatus::InputError
        }
        Error::Unsupported(_) | Error::SplittingUndetermined { .. } => PratStatus::Unsupported,
        Error::Invariant(_) => PratStatus::InvariantViolation,
        _ => PratStatus::DomainError,
    }
}

fn fail(status: PratStatus, msg: impl Into<String>) -> PratStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), (PratStatus, String)>) -> PratStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PratStatus::Ok,
        Ok(Err((s, m))) => fail(s, m),
        Err(_) => fail(PratStatus::Panic, "internal panic"),
    }
}

fn core_err(e: Error) -> (PratStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (PratStatus, String)> {
    if s.is_null() {
        return Err((PratStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (PratStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), (PratStatus, String)> {
    let c =
        CString::new(s).map_err(|_| (PratStatus::InputError, "string contains NUL".to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn check_out<T>(out: *mut T) -> Result<(), (PratStatus, String)> {
    if out.is_null() {
        Err((PratStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn prat_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn prat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build a field from `;`-separated power-basis coefficients (low to high)
/// of the defining polynomial and the fundamental unit. `class_number` 0
/// means unknown. The power basis is used as the integral basis.
///
/// # Safety
/// `poly` and `unit` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prat_field_new(
    poly: *const c_char,
    unit: *const c_char,
    class_number: u64,
    out: *mut *mut PratField,
) -> PratStatus {
    guard(|| {
        check_out(out)?;
        let poly = read_str(poly, "poly")?;
        let unit = read_str(unit, "unit")?;
        let record = FieldRecord::simple(
            "K",
            parse_coefficients(poly).map_err(core_err)?,
            parse_coefficients(unit).map_err(core_err)?,
            (class_number != 0).then_some(class_number),
        );
        let ctx = record.build().map_err(core_err)?;
        *out = Box::into_raw(Box::new(PratField { ctx }));
        Ok(())
    })
}

/// Build the field of record `index` in a record set.
///
/// # Safety
/// `set` must be a live record set; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prat_record_set_field(
    set: *const PratRecordSet,
    index: usize,
    out: *mut *mut PratField,
) -> PratStatus {
    guard(|| {
        check_out(out)?;
        let set = set
            .as_ref()
            .ok_or((PratStatus::NullPointer, "set is null".to_string()))?;
        let r = set.records.get(index).ok_or((
            PratStatus::OutOfRange,
            format!("index {index} out of range"),
        ))?;
        let ctx = r.build().map_err(core_err)?;
        *out = Box::into_raw(Box::new(PratField { ctx }));
        Ok(())
    })
}

/// Release a field. NULL is ignored.
///
/// # Safety
/// `field` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn prat_field_free(field: *mut PratField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Decide p-rationality at `p`. `reasons` (may be NULL) receives a bitmask
/// of `PRAT_REASON_*` flags.
///
/// # Safety
/// `field` must be live; `status` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prat_verdict(
    field: *const PratField,
    p: u64,
    status: *mut PratVerdictStatus,
    reasons: *mut u32,
) -> PratStatus {
    guard(|| {
        check_out(status)?;
        let field = field
            .as_ref()
            .ok_or((PratStatus::NullPointer, "field is null".to_string()))?;
        let v = verdict(&field.ctx, p).map_err(core_err)?;
        *status = match v.status {
            VerdictStatus::PRational => PratVerdictStatus::PRational,
            VerdictStatus::NotPRational => PratVerdictStatus::NotPRational,
            VerdictStatus::Undetermined => PratVerdictStatus::Undetermined,
            VerdictStatus::NotApplicable => PratVerdictStatus::NotApplicable,
        };
        if !reasons.is_null() {
            *reasons = v
                .reasons
                .iter()
                .map(|r| match r {
                    Finding::ClassNumberDivisible => PRAT_REASON_CLASS_NUMBER_DIVISIBLE,
                    Finding::TorsionNontrivial => PRAT_REASON_TORSION_NONTRIVIAL,
                    Finding::Guard(_) => PRAT_REASON_NOT_APPLICABLE,
                    Finding::Condition1Undetermined => PRAT_REASON_CONDITION1_UNDETERMINED,
                    Finding::Condition1Fails => PRAT_REASON_CONDITION1_FAILS,
                })
                .fold(0, |a, b| a | b);
        }
        Ok(())
    })
}

/// Human-readable verdict report at `p`.
///
/// # Safety
/// `field` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prat_verdict_report(
    field: *const PratField,
    p: u64,
    out: *mut *mut c_char,
) -> PratStatus {
    guard(|| {
        check_out(out)?;
        let field = field
            .as_ref()
            .ok_or((PratStatus::NullPointer, "field is null".to_string()))?;
        let v = verdict(&field.ctx, p).map_err(core_err)?;
        out_string(render_verdict(&field.ctx, &v), out)
    })
}

/// Load field records from a CSV file. Rows failing validation are skipped
/// and counted (see [`prat_record_set_rejected`]).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prat_record_set_load_csv(
    path: *const c_char,
    out: *mut *mut PratRecordSet,
) -> PratStatus {
    guard(|| {
        check_out(out)?;
        let path = read_str(path, "path")?;
        let loaded = load_records(Path::new(path), RecordFormat::Csv).map_err(core_err)?;
        *out = Box::into_raw(Box::new(PratRecordSet {
            records: loaded.records,
            rejected: loaded.rejected.len(),
        }));
        Ok(())
    })
}

/// Parse field records from CSV text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prat_record_set_parse_csv(
    text: *const c_char,
    out: *mut *mut PratRecordSet,
) -> PratStatus {
    guard(|| {
        check_out(out)?;
        let text = read_str(text, "text")?;
        let loaded = parse_records_csv(text).map_err(core_err)?;
        *out = Box::into_raw(Box::new(PratRecordSet {
            records: loaded.records,
            rejected: loaded.rejected.len(),
        }));
        Ok(())
    })
}

/// Number of records in the set (0 for NULL).
///
/// # Safety
/// `set` must be live or NULL.
#[no_mangle]
pub unsafe extern "C" fn prat_record_set_len(set: *const PratRecordSet) -> usize {
    set.as_ref().map_or(0, |s| s.records.len())
}

/// Number of rows skipped by validation when the set was loaded.
///
/// # Safety
/// `set` must be live or NULL.
#[no_mangle]
pub unsafe extern "C" fn prat_record_set_rejected(set: *const PratRecordSet) -> usize {
    set.as_ref().map_or(0, |s| s.rejected)
}

/// Release a record set. NULL is ignored.
///
/// # Safety
/// `set` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn prat_record_set_free(set: *mut PratRecordSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Exceptional-prime table over `pmin <= p <= pmax` as CSV text.
///
/// # Safety
/// `set` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prat_table_csv(
    set: *const PratRecordSet,
    pmin: u64,
    pmax: u64,
    out: *mut *mut c_char,
) -> PratStatus {
    guard(|| {
        check_out(out)?;
        let set = set
            .as_ref()
            .ok_or((PratStatus::NullPointer, "set is null".to_string()))?;
        let rows = reproduce_table(&set.records, pmin, pmax).map_err(core_err)?;
        out_string(render_table_csv(&rows).map_err(core_err)?, out)
    })
}

/// `F_n mod modulus` for `F_{n+3} = a2 F_{n+2} + a1 F_{n+1} + a0 F_n` with
/// `F_0 = F_1 = 0`, `F_2 = 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prat_recurrence_value(
    a2: i64,
    a1: i64,
    a0: i64,
    n: u64,
    modulus: u64,
    out: *mut u64,
) -> PratStatus {
    guard(|| {
        check_out(out)?;
        if modulus == 0 {
            return Err((PratStatus::DomainError, "modulus must be positive".into()));
        }
        let v = f_index_mod(&RecurrenceSpec::new(a2, a1, a0), n, &BigInt::from(modulus));
        *out = u64::try_from(v)
            .map_err(|_| (PratStatus::Panic, "residue out of range".to_string()))?;
        Ok(())
    })
}

/// Class number of `Q(sqrt(radicand))` for a negative squarefree radicand.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prat_imag_quadratic_class_number(
    radicand: i64,
    out: *mut u64,
) -> PratStatus {
    guard(|| {
        check_out(out)?;
        *out = imag_quadratic_class_number(radicand).map_err(core_err)?;
        Ok(())
    })
}
