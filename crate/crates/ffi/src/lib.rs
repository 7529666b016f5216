//! C ABI for the lyagraph realizability checker.
//!
//! Graphs and reports are opaque handles owned by the caller and released
//! with their `_free` function. Every fallible function returns a
//! [`LyaStatus`]; on failure a description is available from
//! [`lya_last_error_message`] on the same thread. Strings returned through
//! out-parameters are NUL-terminated UTF-8 and released with
//! [`lya_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lyagraph::check::{check, CheckReport, Target};
use lyagraph::graph::LyapunovGraph;
use lyagraph::io::report::{render_report, RenderMode};
use lyagraph::io::{parse_document, render_graph, SourceFormat};
use lyagraph::linalg::IntMatrix;
use lyagraph::sft::k_invariant;

pub const LYA_TARGET_S2XS1: u32 = 0;
pub const LYA_TARGET_S3: u32 = 1;

pub const LYA_FORMAT_DSL: u32 = 0;
pub const LYA_FORMAT_JSON: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LyaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    Panic = 5,
}

/// A parsed Lyapunov graph.
pub struct LyaGraph {
    graph: LyapunovGraph,
}

/// The outcome of checking a graph against one target.
pub struct LyaReport {
    report: CheckReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("NUL bytes were replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

type Failure = (LyaStatus, String);

fn run(f: impl FnOnce() -> Result<(), Failure>) -> LyaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_last_error();
            LyaStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_owned());
            set_last_error(format!("internal error: {message}"));
            LyaStatus::Panic
        }
    }
}

fn null(name: &str) -> Failure {
    (LyaStatus::NullPointer, format!("`{name}` is null"))
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn store<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(text: String) -> *mut c_char {
    CString::new(text)
        .expect("rendered text contains no NUL bytes")
        .into_raw()
}

fn target_from(code: u32) -> Result<Target, Failure> {
    match code {
        LYA_TARGET_S2XS1 => Ok(Target::S2xS1),
        LYA_TARGET_S3 => Ok(Target::S3),
        _ => Err((LyaStatus::InvalidArgument, format!("unknown target code {code}"))),
    }
}

fn format_from(code: u32) -> Result<SourceFormat, Failure> {
    match code {
        LYA_FORMAT_DSL => Ok(SourceFormat::Dsl),
        LYA_FORMAT_JSON => Ok(SourceFormat::Json),
        _ => Err((LyaStatus::InvalidArgument, format!("unknown format code {code}"))),
    }
}

/// Parses a graph in either the DSL or the JSON format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lya_graph_parse(text: *const c_char, out: *mut *mut LyaGraph) -> LyaStatus {
    run(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (LyaStatus::InvalidUtf8, e.to_string()))?;
        let doc = parse_document(text).map_err(|e| (LyaStatus::ParseError, e.to_string()))?;
        let handle = Box::into_raw(Box::new(LyaGraph { graph: doc.graph }));
        store(out, handle, "out").inspect_err(|_| drop(Box::from_raw(handle)))
    })
}

/// # Safety
/// `graph` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lya_graph_free(graph: *mut LyaGraph) {
    if !graph.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(graph))));
    }
}

/// The time-reversed graph, as a new handle.
///
/// # Safety
/// `graph` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lya_graph_reverse(
    graph: *const LyaGraph,
    out: *mut *mut LyaGraph,
) -> LyaStatus {
    run(|| {
        let g = borrow(graph, "graph")?;
        let handle = Box::into_raw(Box::new(LyaGraph {
            graph: g.graph.reverse(),
        }));
        store(out, handle, "out").inspect_err(|_| drop(Box::from_raw(handle)))
    })
}

/// Renders the graph as `LYA_FORMAT_DSL` or `LYA_FORMAT_JSON`.
///
/// # Safety
/// `graph` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lya_graph_render(
    graph: *const LyaGraph,
    format: u32,
    out: *mut *mut c_char,
) -> LyaStatus {
    run(|| {
        let g = borrow(graph, "graph")?;
        let format = format_from(format)?;
        if out.is_null() {
            return Err(null("out"));
        }
        store(out, into_c_string(render_graph(&g.graph, format)), "out")
    })
}

/// # Safety
/// `graph` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lya_graph_vertex_count(graph: *const LyaGraph, out: *mut usize) -> LyaStatus {
    run(|| store(out, borrow(graph, "graph")?.graph.vertices().len(), "out"))
}

/// # Safety
/// `graph` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lya_graph_edge_count(graph: *const LyaGraph, out: *mut usize) -> LyaStatus {
    run(|| store(out, borrow(graph, "graph")?.graph.edges().len(), "out"))
}

/// `|E| - |V| + 1`; `LYA_STATUS_INVALID_ARGUMENT` when the graph is not
/// connected.
///
/// # Safety
/// `graph` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lya_graph_cycle_rank(graph: *const LyaGraph, out: *mut usize) -> LyaStatus {
    run(|| {
        let g = borrow(graph, "graph")?;
        let beta = g
            .graph
            .cycle_rank()
            .map_err(|e| (LyaStatus::InvalidArgument, e.to_string()))?;
        store(out, beta, "out")
    })
}

/// Checks the graph against `LYA_TARGET_S2XS1` or `LYA_TARGET_S3`.
///
/// # Safety
/// `graph` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lya_check(
    graph: *const LyaGraph,
    target: u32,
    out: *mut *mut LyaReport,
) -> LyaStatus {
    run(|| {
        let g = borrow(graph, "graph")?;
        let target = target_from(target)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let handle = Box::into_raw(Box::new(LyaReport {
            report: check(&g.graph, target),
        }));
        store(out, handle, "out")
    })
}

/// # Safety
/// `report` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lya_report_realizable(report: *const LyaReport, out: *mut bool) -> LyaStatus {
    run(|| store(out, borrow(report, "report")?.report.realizable, "out"))
}

/// Renders the report as text, or as JSON when `json` is true.
///
/// # Safety
/// `report` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lya_report_render(
    report: *const LyaReport,
    json: bool,
    out: *mut *mut c_char,
) -> LyaStatus {
    run(|| {
        let r = borrow(report, "report")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mode = if json { RenderMode::Json } else { RenderMode::Text };
        store(out, into_c_string(render_report(&r.report, mode)), "out")
    })
}

/// # Safety
/// `report` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lya_report_free(report: *mut LyaReport) {
    if !report.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(report))));
    }
}

/// `k` of the `n` by `n` nonnegative matrix stored row-major in `entries`.
///
/// # Safety
/// `entries` must point to `n * n` readable values and `out` must be a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lya_k_invariant(entries: *const i64, n: usize, out: *mut usize) -> LyaStatus {
    run(|| {
        if entries.is_null() {
            return Err(null("entries"));
        }
        let len = n.checked_mul(n).ok_or_else(|| {
            (LyaStatus::InvalidArgument, format!("matrix dimension {n} is too large"))
        })?;
        let values = std::slice::from_raw_parts(entries, len).to_vec();
        let invalid = |e: lyagraph::linalg::MatrixError| (LyaStatus::InvalidArgument, e.to_string());
        let matrix = IntMatrix::new(n, n, values).map_err(invalid)?;
        store(out, k_invariant(&matrix).map_err(invalid)?, "out")
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lya_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message for the last failed call on this thread, or null. The
/// pointer stays valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn lya_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
