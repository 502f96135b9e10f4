//! C ABI for the calculator: opaque handles, integer status codes, JSON in
//! and out. The stable surface is declared in `include/opmassey.h`; the
//! header is maintained by hand and checked against the exports by a test.
//!
//! Conventions:
//! - constructors return `NULL` on failure and record a message retrievable
//!   through [`mp_last_error`] (thread-local);
//! - strings returned as `char *` are owned by the caller and must be
//!   released with [`mp_string_free`];
//! - handles must be released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::{c_char, c_int, c_longlong};
use std::panic::{catch_unwind, AssertUnwindSafe};

use opmassey::commands::{cmd_homology, cmd_massey, cmd_validate, CommandOptions, ScopeFlag};
use opmassey::document::ProblemDocument;
use opmassey::report::Report;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("invalid error message").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// A parsed problem document.
pub struct MpDocument {
    inner: ProblemDocument,
}

/// A finished computation: the report plus its process-style exit code
/// (0 ok, 1 validation failure, 2 undefined Massey product).
pub struct MpReport {
    report: Report,
    exit_code: c_int,
}

pub const MP_COMMAND_VALIDATE: c_int = 0;
pub const MP_COMMAND_HOMOLOGY: c_int = 1;
pub const MP_COMMAND_MASSEY: c_int = 2;

pub const MP_SCOPE_PAPER: c_int = 0;
pub const MP_SCOPE_FULL: c_int = 1;

/// Message describing the most recent failure on this thread, or `NULL`.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

/// Parses a JSON problem document. `NULL` on schema errors.
///
/// # Safety
/// `json` must be a valid NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn mp_document_from_json(json: *const c_char) -> *mut MpDocument {
    clear_error();
    if json.is_null() {
        set_error("json is NULL".into());
        return std::ptr::null_mut();
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("json is not valid UTF-8".into());
            return std::ptr::null_mut();
        }
    };
    match ProblemDocument::from_json(text) {
        Ok(inner) => Box::into_raw(Box::new(MpDocument { inner })),
        Err(e) => {
            set_error(e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `doc` must come from [`mp_document_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mp_document_free(doc: *mut MpDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Runs a command over a document. `command` is one of the `MP_COMMAND_*`
/// constants, `scope` one of `MP_SCOPE_*`, `seed` is the default seed for
/// random-mode queries (negative for none). `NULL` on usage/schema errors.
///
/// # Safety
/// `doc` must be a live handle from [`mp_document_from_json`].
#[no_mangle]
pub unsafe extern "C" fn mp_run(
    doc: *const MpDocument,
    command: c_int,
    scope: c_int,
    verbose: c_int,
    seed: c_longlong,
) -> *mut MpReport {
    clear_error();
    if doc.is_null() {
        set_error("document is NULL".into());
        return std::ptr::null_mut();
    }
    let doc = &(*doc).inner;
    let opts = CommandOptions {
        seed: if seed < 0 { None } else { Some(seed as u64) },
        scope: if scope == MP_SCOPE_FULL {
            ScopeFlag::Full
        } else {
            ScopeFlag::Paper
        },
        verbose: verbose != 0,
    };
    let run = catch_unwind(AssertUnwindSafe(|| match command {
        MP_COMMAND_VALIDATE => cmd_validate(doc, &opts),
        MP_COMMAND_HOMOLOGY => cmd_homology(doc, &opts),
        MP_COMMAND_MASSEY => cmd_massey(doc, &opts),
        other => Err(opmassey::Error::Schema(format!("unknown command {other}"))),
    }));
    match run {
        Ok(Ok((report, exit_code))) => Box::into_raw(Box::new(MpReport { report, exit_code })),
        Ok(Err(e)) => {
            set_error(e.to_string());
            std::ptr::null_mut()
        }
        Err(_) => {
            set_error("internal panic".into());
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `report` must be a live handle from [`mp_run`].
#[no_mangle]
pub unsafe extern "C" fn mp_report_exit_code(report: *const MpReport) -> c_int {
    if report.is_null() {
        return -1;
    }
    (*report).exit_code
}

fn export_string(s: String) -> *mut c_char {
    match CString::new(s) {
        Ok(c) => c.into_raw(),
        Err(_) => {
            set_error("string contains interior NUL".into());
            std::ptr::null_mut()
        }
    }
}

/// JSON rendering of a report. Free with [`mp_string_free`].
///
/// # Safety
/// `report` must be a live handle from [`mp_run`].
#[no_mangle]
pub unsafe extern "C" fn mp_report_json(report: *const MpReport) -> *mut c_char {
    clear_error();
    if report.is_null() {
        set_error("report is NULL".into());
        return std::ptr::null_mut();
    }
    export_string((*report).report.to_json())
}

/// Text rendering of a report. Free with [`mp_string_free`].
///
/// # Safety
/// `report` must be a live handle from [`mp_run`].
#[no_mangle]
pub unsafe extern "C" fn mp_report_text(report: *const MpReport) -> *mut c_char {
    clear_error();
    if report.is_null() {
        set_error("report is NULL".into());
        return std::ptr::null_mut();
    }
    export_string((*report).report.to_text())
}

/// # Safety
/// `report` must come from [`mp_run`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mp_report_free(report: *mut MpReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// One canned example document (`heisenberg-ce`, `heisenberg-gerstenhaber`,
/// `heisenberg-hypercom`) as JSON. Free with [`mp_string_free`].
///
/// # Safety
/// `name` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mp_example_document(name: *const c_char) -> *mut c_char {
    clear_error();
    if name.is_null() {
        set_error("name is NULL".into());
        return std::ptr::null_mut();
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else {
        set_error("name is not valid UTF-8".into());
        return std::ptr::null_mut();
    };
    for (candidate, doc) in opmassey::document::example_documents() {
        if candidate == name {
            return export_string(doc.to_json());
        }
    }
    set_error(format!("unknown example `{name}`"));
    std::ptr::null_mut()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
