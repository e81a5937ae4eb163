//! Compiles a C program against the generated header and links it with the
//! static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "entpow.h"

int main(void) {
    EpOperator *op = NULL;
    double ep = -1.0, oracle = -1.0;
    char msg[256];

    if (ep_operator_ising(2, 2, 3.141592653589793, &op) != EP_STATUS_OK) return 1;
    if (ep_entangling_power(op, 1e-10, &ep) != EP_STATUS_OK) return 2;
    if (ep_permutation_oracle(op, &oracle) != EP_STATUS_OK) return 3;
    ep_operator_free(op);
    if (fabs(ep - 2.0 / 9.0) > 1e-12 || fabs(oracle - ep) > 1e-12) return 4;

    op = NULL;
    if (ep_operator_ising(0, 2, 1.0, &op) != EP_STATUS_DOMAIN || op != NULL) return 5;
    if (ep_last_error_message(msg, sizeof msg) < 2) return 6;

    printf("ep=%.12f\n", ep);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

fn has_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

#[test]
fn header_is_current() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/entpow.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in [
        "ep_last_error_message", "ep_operator_new", "ep_operator_from_file", "ep_operator_ising",
        "ep_operator_heisenberg", "ep_operator_free", "ep_operator_dims", "ep_operator_entries",
        "ep_entangling_power", "ep_permutation_oracle", "ep_monte_carlo", "ep_ising_analytic",
        "ep_ising_time_average", "ep_heisenberg_analytic", "ep_heisenberg_time_average",
        "typedef struct EpOperator EpOperator;", "EP_STATUS_PANIC = 8",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_and_runs() {
    if !has_cc() {
        eprintln!("no C compiler found; skipping");
        return;
    }
    let lib = target_dir().join("libentpow_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "ep=0.222222222222\n");
}
