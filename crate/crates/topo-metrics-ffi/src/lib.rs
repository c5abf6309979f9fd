//! C ABI for the topo-metrics library.
//!
//! Handles are opaque; every fallible call returns a [`TopoStatus`] and
//! writes its result through an out-pointer only on success. The message
//! for the most recent failure on the current thread is available from
//! [`topo_last_error_message`]. Strings returned by this library must be
//! released with [`topo_string_free`], handles with their matching `_free`
//! function; all functions tolerate `NULL` where a handle or out-pointer
//! is expected and report it instead of crashing.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use topo_metrics::io::{load_embedding, FileFormat};
use topo_metrics::{compute_metrics, EmbeddingMatrix, Error, MetricKind, MetricName, MetricReport};

/// Result codes for every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopoStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input was rejected: bad arguments, malformed file, unknown name.
    InputError = 3,
    /// The computation itself failed on valid input.
    ComputeError = 4,
    /// An internal invariant was violated; the message has details.
    Panic = 5,
}

/// Opaque handle to an immutable point-cloud matrix.
pub struct TopoEmbedding {
    inner: EmbeddingMatrix,
}

/// Opaque handle to a set of computed metric values.
pub struct TopoReport {
    inner: MetricReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("interior NULs removed");
    });
}

fn fail(error: &Error) -> TopoStatus {
    set_last_error(&error.to_string());
    if error.is_input_error() {
        TopoStatus::InputError
    } else {
        TopoStatus::ComputeError
    }
}

fn null_pointer(what: &str) -> TopoStatus {
    set_last_error(&format!("{what} must not be null"));
    TopoStatus::NullPointer
}

/// Run `body` with panics converted into a `Panic` status so an internal
/// bug cannot unwind across the C boundary.
fn guarded(body: impl FnOnce() -> TopoStatus) -> TopoStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_owned());
            set_last_error(&format!("internal panic: {message}"));
            TopoStatus::Panic
        }
    }
}

/// # Safety
/// `ptr` must be a valid NUL-terminated string or null.
unsafe fn utf8_arg<'a>(ptr: *const c_char, what: &str) -> Result<Option<&'a str>, TopoStatus> {
    if ptr.is_null() {
        return Ok(None);
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(Some(s)),
        Err(_) => {
            set_last_error(&format!("{what} is not valid UTF-8"));
            Err(TopoStatus::InvalidUtf8)
        }
    }
}

/// Build an embedding from a dense row-major buffer of `rows * cols`
/// doubles. The buffer is copied; the caller keeps ownership of `values`.
///
/// # Safety
/// `values` must point to at least `rows * cols` readable doubles and
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn topo_embedding_new(
    values: *const f64,
    rows: u32,
    cols: u32,
    out: *mut *mut TopoEmbedding,
) -> TopoStatus {
    guarded(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        if values.is_null() {
            return null_pointer("values");
        }
        let len = rows as usize * cols as usize;
        let data = std::slice::from_raw_parts(values, len).to_vec();
        match EmbeddingMatrix::new(rows as usize, cols as usize, data) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(TopoEmbedding { inner }));
                TopoStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Load an embedding from a CSV or packed binary file; the format is
/// inferred from the extension (`.bin` means binary).
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn topo_embedding_load(
    path: *const c_char,
    out: *mut *mut TopoEmbedding,
) -> TopoStatus {
    guarded(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        let path = match utf8_arg(path, "path") {
            Ok(Some(p)) => Path::new(p),
            Ok(None) => return null_pointer("path"),
            Err(status) => return status,
        };
        match load_embedding(path, FileFormat::infer(path)) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(TopoEmbedding { inner }));
                TopoStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Number of points, or 0 if the handle is null.
///
/// # Safety
/// `embedding` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn topo_embedding_rows(embedding: *const TopoEmbedding) -> u32 {
    embedding.as_ref().map_or(0, |e| e.inner.n() as u32)
}

/// Embedding dimension, or 0 if the handle is null.
///
/// # Safety
/// `embedding` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn topo_embedding_cols(embedding: *const TopoEmbedding) -> u32 {
    embedding.as_ref().map_or(0, |e| e.inner.d() as u32)
}

/// Release an embedding handle. Null is a no-op.
///
/// # Safety
/// `embedding` must be a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn topo_embedding_free(embedding: *mut TopoEmbedding) {
    if !embedding.is_null() {
        drop(Box::from_raw(embedding));
    }
}

/// Compute metrics for an embedding.
///
/// `metrics` is a comma-separated list of metric names, or null for all
/// nine. `distance` is `"euclidean"` or `"cosine"`, null meaning
/// euclidean. `subsample` caps the points used by the persistence metrics,
/// 0 meaning the default cap of 512; `seed` drives the subsample draw.
///
/// # Safety
/// String arguments must be valid NUL-terminated strings or null;
/// `embedding` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn topo_report_compute(
    embedding: *const TopoEmbedding,
    metrics: *const c_char,
    distance: *const c_char,
    subsample: u64,
    seed: u64,
    out: *mut *mut TopoReport,
) -> TopoStatus {
    guarded(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        let Some(embedding) = embedding.as_ref() else {
            return null_pointer("embedding");
        };
        let names: Vec<MetricName> = match utf8_arg(metrics, "metrics") {
            Ok(Some(list)) => {
                match list.split(',').map(|m| m.trim().parse()).collect() {
                    Ok(names) => names,
                    Err(e) => return fail(&e),
                }
            }
            Ok(None) => MetricName::ALL.to_vec(),
            Err(status) => return status,
        };
        let kind: MetricKind = match utf8_arg(distance, "distance") {
            Ok(Some(name)) => match name.parse() {
                Ok(kind) => kind,
                Err(e) => return fail(&e),
            },
            Ok(None) => MetricKind::Euclidean,
            Err(status) => return status,
        };
        let cap = (subsample > 0).then_some(subsample as usize);
        match compute_metrics(&embedding.inner, &names, cap, seed, kind) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(TopoReport { inner }));
                TopoStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Read one metric value out of a report by wire name.
///
/// # Safety
/// `report` must be a live handle, `metric` a valid NUL-terminated string,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn topo_report_get(
    report: *const TopoReport,
    metric: *const c_char,
    out: *mut f64,
) -> TopoStatus {
    guarded(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        let Some(report) = report.as_ref() else {
            return null_pointer("report");
        };
        let name: MetricName = match utf8_arg(metric, "metric") {
            Ok(Some(name)) => match name.parse() {
                Ok(name) => name,
                Err(e) => return fail(&e),
            },
            Ok(None) => return null_pointer("metric"),
            Err(status) => return status,
        };
        match report.inner.get(name) {
            Some(value) => {
                *out = value;
                TopoStatus::Ok
            }
            None => {
                set_last_error(&format!("metric {name} is not in this report"));
                TopoStatus::InputError
            }
        }
    })
}

/// Serialize a report as a JSON string. The result must be released with
/// `topo_string_free`.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn topo_report_to_json(
    report: *const TopoReport,
    out: *mut *mut c_char,
) -> TopoStatus {
    guarded(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        let Some(report) = report.as_ref() else {
            return null_pointer("report");
        };
        let text = serde_json::to_string_pretty(&report.inner)
            .expect("metric reports always serialize");
        *out = CString::new(text)
            .expect("JSON contains no NUL bytes")
            .into_raw();
        TopoStatus::Ok
    })
}

/// Release a report handle. Null is a no-op.
///
/// # Safety
/// `report` must be a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn topo_report_free(report: *mut TopoReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be a string from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn topo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on the calling thread. The pointer
/// stays valid until the next failing call on the same thread; do not free
/// it.
#[no_mangle]
pub extern "C" fn topo_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}
