//! C ABI over `ctn-core`.
//!
//! Graphs and masks are opaque heap handles released with their `_free`
//! function. Every fallible call returns a [`CtnStatus`]; on failure the
//! message is available from [`ctn_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ctn_core::cycles;
use ctn_core::extremal;
use ctn_core::{CtnError, EdgeId, SubgraphMask, TranspositionGraph};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    Panic = 4,
}

/// Opaque complete transposition graph.
pub struct CtnGraph {
    inner: TranspositionGraph,
}

/// Opaque edge subset of a particular graph.
pub struct CtnMask {
    inner: SubgraphMask,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: CtnStatus, msg: &str) -> CtnStatus {
    set_error(msg);
    status
}

fn from_core(e: CtnError) -> CtnStatus {
    let status = match e {
        CtnError::Unsupported(_) => CtnStatus::Unsupported,
        _ => CtnStatus::InvalidArgument,
    };
    fail(status, &e.to_string())
}

fn guard<F: FnOnce() -> CtnStatus>(f: F) -> CtnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(CtnStatus::Panic, "internal panic"),
    }
}

fn check_pair(g: &CtnGraph, m: &CtnMask) -> Result<(), CtnStatus> {
    if m.inner.degree() != g.inner.degree() || m.inner.universe() != g.inner.edge_count() {
        return Err(fail(CtnStatus::InvalidArgument, "mask belongs to a graph of a different degree"));
    }
    Ok(())
}

macro_rules! deref {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(r) => r,
            None => return fail(CtnStatus::NullPointer, concat!("null pointer: ", stringify!($p))),
        }
    };
}

macro_rules! deref_mut {
    ($p:expr) => {
        match unsafe { $p.as_mut() } {
            Some(r) => r,
            None => return fail(CtnStatus::NullPointer, concat!("null pointer: ", stringify!($p))),
        }
    };
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ctn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static, NUL-terminated version string.
#[no_mangle]
pub extern "C" fn ctn_version() -> *const c_char {
    static VERSION: &str = concat!("ctn-core ", env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Builds `CT_n` for `3 <= n <= 8`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ctn_graph_new(n: u32, out: *mut *mut CtnGraph) -> CtnStatus {
    guard(|| {
        let out = deref_mut!(out);
        match TranspositionGraph::new(n as usize) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(CtnGraph { inner }));
                CtnStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `g` must be null or a handle from [`ctn_graph_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ctn_graph_free(g: *mut CtnGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// # Safety
/// `g` must be a live graph handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ctn_graph_vertex_count(g: *const CtnGraph, out: *mut u64) -> CtnStatus {
    let g = deref!(g);
    *deref_mut!(out) = g.inner.vertex_count() as u64;
    CtnStatus::Ok
}

/// # Safety
/// `g` must be a live graph handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ctn_graph_edge_count(g: *const CtnGraph, out: *mut u64) -> CtnStatus {
    let g = deref!(g);
    *deref_mut!(out) = g.inner.edge_count() as u64;
    CtnStatus::Ok
}

/// Endpoint ranks (even, odd) of edge `edge`.
///
/// # Safety
/// `g` must be a live graph handle; `even` and `odd` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ctn_graph_edge_endpoints(
    g: *const CtnGraph,
    edge: u64,
    even: *mut u64,
    odd: *mut u64,
) -> CtnStatus {
    let g = deref!(g);
    let (even, odd) = (deref_mut!(even), deref_mut!(odd));
    match g.inner.edge_endpoints(EdgeId(edge as usize)) {
        Ok((u, z, _)) => {
            *even = u as u64;
            *odd = z as u64;
            CtnStatus::Ok
        }
        Err(e) => from_core(e),
    }
}

/// A new mask over `g`, empty or full.
///
/// # Safety
/// `g` must be a live graph handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ctn_mask_new(g: *const CtnGraph, full: bool, out: *mut *mut CtnMask) -> CtnStatus {
    let g = deref!(g);
    let out = deref_mut!(out);
    let inner = if full { SubgraphMask::full(&g.inner) } else { SubgraphMask::empty(&g.inner) };
    *out = Box::into_raw(Box::new(CtnMask { inner }));
    CtnStatus::Ok
}

/// # Safety
/// `m` must be null or a mask handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ctn_mask_free(m: *mut CtnMask) {
    if !m.is_null() {
        drop(unsafe { Box::from_raw(m) });
    }
}

/// Adds (`present = true`) or removes edge `edge`.
///
/// # Safety
/// `m` must be a live mask handle.
#[no_mangle]
pub unsafe extern "C" fn ctn_mask_set(m: *mut CtnMask, edge: u64, present: bool) -> CtnStatus {
    let m = deref_mut!(m);
    if edge as usize >= m.inner.universe() {
        return fail(CtnStatus::InvalidArgument, &format!("edge {edge} out of range"));
    }
    if present {
        m.inner.insert(EdgeId(edge as usize));
    } else {
        m.inner.remove(EdgeId(edge as usize));
    }
    CtnStatus::Ok
}

/// # Safety
/// `m` must be a live mask handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ctn_mask_contains(m: *const CtnMask, edge: u64, out: *mut bool) -> CtnStatus {
    let m = deref!(m);
    let out = deref_mut!(out);
    if edge as usize >= m.inner.universe() {
        return fail(CtnStatus::InvalidArgument, &format!("edge {edge} out of range"));
    }
    *out = m.inner.contains(EdgeId(edge as usize));
    CtnStatus::Ok
}

/// # Safety
/// `m` must be a live mask handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ctn_mask_count(m: *const CtnMask, out: *mut u64) -> CtnStatus {
    let m = deref!(m);
    *deref_mut!(out) = m.inner.count() as u64;
    CtnStatus::Ok
}

/// Shortest cycle length of the subgraph; 0 if it has no cycle.
///
/// # Safety
/// `g`, `m` must be live handles and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ctn_girth(g: *const CtnGraph, m: *const CtnMask, out: *mut u32) -> CtnStatus {
    guard(|| {
        let (g, m) = (deref!(g), deref!(m));
        let out = deref_mut!(out);
        if let Err(s) = check_pair(g, m) {
            return s;
        }
        *out = cycles::girth(&g.inner, &m.inner).unwrap_or(0) as u32;
        CtnStatus::Ok
    })
}

/// Searches for a cycle of length `len` in the subgraph. On success
/// `*found_len` is 0 when there is none, otherwise `len`, with the vertex
/// ranks written to `vertices` (capacity `cap`, at least `len`).
///
/// # Safety
/// `g`, `m` must be live handles; `vertices` valid for `cap` writes;
/// `found_len` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ctn_find_cycle(
    g: *const CtnGraph,
    m: *const CtnMask,
    len: u32,
    vertices: *mut u64,
    cap: usize,
    found_len: *mut usize,
) -> CtnStatus {
    guard(|| {
        let (g, m) = (deref!(g), deref!(m));
        let found_len = deref_mut!(found_len);
        if let Err(s) = check_pair(g, m) {
            return s;
        }
        if vertices.is_null() {
            return fail(CtnStatus::NullPointer, "null pointer: vertices");
        }
        if cap < len as usize {
            return fail(CtnStatus::InvalidArgument, "vertex buffer shorter than the cycle length");
        }
        match cycles::find_cycle_of_length(&g.inner, &m.inner, len as usize) {
            Ok(None) => {
                *found_len = 0;
                CtnStatus::Ok
            }
            Ok(Some(w)) => {
                let buf = unsafe { std::slice::from_raw_parts_mut(vertices, cap) };
                for (slot, &v) in buf.iter_mut().zip(w.vertices()) {
                    *slot = v as u64;
                }
                *found_len = w.len();
                CtnStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Number of cycles of length `len` in the subgraph.
///
/// # Safety
/// `g`, `m` must be live handles and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ctn_count_cycles(
    g: *const CtnGraph,
    m: *const CtnMask,
    len: u32,
    out: *mut u64,
) -> CtnStatus {
    guard(|| {
        let (g, m) = (deref!(g), deref!(m));
        let out = deref_mut!(out);
        if let Err(s) = check_pair(g, m) {
            return s;
        }
        match cycles::count_cycles_of_length(&g.inner, &m.inner, len as usize) {
            Ok(c) => {
                *out = c;
                CtnStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Seeded local search for a dense subgraph with no cycle of length `len`.
/// The result is a new mask handle owned by the caller.
///
/// # Safety
/// `g` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ctn_local_search(
    g: *const CtnGraph,
    len: u32,
    seed: u64,
    budget: u64,
    out: *mut *mut CtnMask,
) -> CtnStatus {
    guard(|| {
        let g = deref!(g);
        let out = deref_mut!(out);
        match extremal::local_search_max(&g.inner, len as usize, seed, budget) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(CtnMask { inner: r.mask }));
                CtnStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}
