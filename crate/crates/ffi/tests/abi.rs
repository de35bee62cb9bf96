use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ctn_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ctn_last_error_message()) }.to_string_lossy().into_owned()
}

fn graph(n: u32) -> *mut CtnGraph {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ctn_graph_new(n, &mut g) }, CtnStatus::Ok);
    assert!(!g.is_null());
    g
}

#[test]
fn counts_and_lifecycle() {
    let g = graph(4);
    let (mut v, mut e) = (0u64, 0u64);
    unsafe {
        assert_eq!(ctn_graph_vertex_count(g, &mut v), CtnStatus::Ok);
        assert_eq!(ctn_graph_edge_count(g, &mut e), CtnStatus::Ok);
        ctn_graph_free(g);
        ctn_graph_free(ptr::null_mut());
    }
    assert_eq!((v, e), (24, 72));
}

#[test]
fn bad_arguments_report_status_and_message() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ctn_graph_new(2, &mut g) }, CtnStatus::InvalidArgument);
    assert!(g.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { ctn_graph_new(3, ptr::null_mut()) }, CtnStatus::NullPointer);
    assert!(last_error().contains("null"));

    let g = graph(3);
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(ctn_mask_new(g, false, &mut m), CtnStatus::Ok);
        assert_eq!(ctn_mask_set(m, 9, true), CtnStatus::InvalidArgument);
        let mut found = 0usize;
        let mut buf = [0u64; 4];
        assert_eq!(ctn_find_cycle(g, m, 5, buf.as_mut_ptr(), 4, &mut found), CtnStatus::InvalidArgument);
        assert_eq!(ctn_find_cycle(g, m, 6, buf.as_mut_ptr(), 4, &mut found), CtnStatus::InvalidArgument);
        let mut mask_out = ptr::null_mut();
        assert_eq!(ctn_local_search(g, 4, 0, 10, ptr::null_mut()), CtnStatus::NullPointer);
        let g6 = graph(6);
        assert_eq!(ctn_local_search(g6, 4, 0, 10, &mut mask_out), CtnStatus::Unsupported);
        let mut girth = 0;
        assert_eq!(ctn_girth(g6, m, &mut girth), CtnStatus::InvalidArgument);
        ctn_graph_free(g6);
        ctn_mask_free(m);
        ctn_graph_free(g);
    }
}

#[test]
fn cycles_through_the_abi() {
    let g = graph(3);
    unsafe {
        let mut full = ptr::null_mut();
        assert_eq!(ctn_mask_new(g, true, &mut full), CtnStatus::Ok);
        let mut girth = 0u32;
        assert_eq!(ctn_girth(g, full, &mut girth), CtnStatus::Ok);
        assert_eq!(girth, 4);
        let mut count = 0u64;
        assert_eq!(ctn_count_cycles(g, full, 4, &mut count), CtnStatus::Ok);
        assert_eq!(count, 9);
        assert_eq!(ctn_count_cycles(g, full, 6, &mut count), CtnStatus::Ok);
        assert_eq!(count, 6);

        let mut buf = [u64::MAX; 8];
        let mut found = 0usize;
        assert_eq!(ctn_find_cycle(g, full, 6, buf.as_mut_ptr(), buf.len(), &mut found), CtnStatus::Ok);
        assert_eq!(found, 6);
        let mut seen = buf[..6].to_vec();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(ctn_find_cycle(g, full, 8, buf.as_mut_ptr(), buf.len(), &mut found), CtnStatus::Ok);
        assert_eq!(found, 0);

        let mut empty = ptr::null_mut();
        assert_eq!(ctn_mask_new(g, false, &mut empty), CtnStatus::Ok);
        assert_eq!(ctn_girth(g, empty, &mut girth), CtnStatus::Ok);
        assert_eq!(girth, 0);
        for e in 0..3 {
            assert_eq!(ctn_mask_set(empty, e, true), CtnStatus::Ok);
        }
        let mut present = false;
        assert_eq!(ctn_mask_contains(empty, 1, &mut present), CtnStatus::Ok);
        assert!(present);
        assert_eq!(ctn_mask_set(empty, 1, false), CtnStatus::Ok);
        assert_eq!(ctn_mask_contains(empty, 1, &mut present), CtnStatus::Ok);
        assert!(!present);
        assert_eq!(ctn_mask_count(empty, &mut count), CtnStatus::Ok);
        assert_eq!(count, 2);

        let (mut a, mut b) = (0u64, 0u64);
        assert_eq!(ctn_graph_edge_endpoints(g, 0, &mut a, &mut b), CtnStatus::Ok);
        assert_ne!(a, b);
        assert_eq!(ctn_graph_edge_endpoints(g, 9, &mut a, &mut b), CtnStatus::InvalidArgument);

        ctn_mask_free(empty);
        ctn_mask_free(full);
        ctn_graph_free(g);
    }
}

#[test]
fn local_search_matches_the_exact_optimum() {
    let g = graph(3);
    unsafe {
        for seed in 0..5 {
            let mut m = ptr::null_mut();
            assert_eq!(ctn_local_search(g, 4, seed, 200, &mut m), CtnStatus::Ok);
            let mut count = 0u64;
            assert_eq!(ctn_mask_count(m, &mut count), CtnStatus::Ok);
            assert_eq!(count, 6);
            assert_eq!(ctn_count_cycles(g, m, 4, &mut count), CtnStatus::Ok);
            assert_eq!(count, 0);
            ctn_mask_free(m);
        }
        ctn_graph_free(g);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(ctn_version()) }.to_str().unwrap();
    assert!(v.starts_with("ctn-core "));
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/ctn.h")).unwrap();
    for name in [
        "ctn_graph_new",
        "ctn_graph_free",
        "ctn_graph_vertex_count",
        "ctn_graph_edge_count",
        "ctn_graph_edge_endpoints",
        "ctn_mask_new",
        "ctn_mask_free",
        "ctn_mask_set",
        "ctn_mask_contains",
        "ctn_mask_count",
        "ctn_girth",
        "ctn_find_cycle",
        "ctn_count_cycles",
        "ctn_local_search",
        "ctn_last_error_message",
        "ctn_version",
        "typedef struct CtnGraph CtnGraph;",
        "CTN_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name} missing from ctn.h");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "ctn.h"

int main(void) {
    CtnGraph *g = NULL;
    CtnMask *m = NULL;
    uint64_t edges = 0, count = 0;
    if (ctn_graph_new(4, &g) != CTN_STATUS_OK) return 10;
    if (ctn_graph_edge_count(g, &edges) != CTN_STATUS_OK || edges != 72) return 11;
    if (ctn_mask_new(g, true, &m) != CTN_STATUS_OK) return 12;
    if (ctn_count_cycles(g, m, 4, &count) != CTN_STATUS_OK || count != 162) return 13;
    if (ctn_graph_new(9, &g) != CTN_STATUS_INVALID_ARGUMENT) return 14;
    if (ctn_last_error_message()[0] == '\0') return 15;
    ctn_mask_free(m);
    ctn_graph_free(g);
    printf("ok\n");
    return 0;
}
"#;

/// Compiles a C program against `ctn.h` and the static library.
#[test]
fn c_program_links_against_the_static_library() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libctn_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("smoke.c");
    let bin = tmp.path().join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "smoke program failed");
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
