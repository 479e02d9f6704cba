//! Compiles the generated header with the system C compiler and, when the
//! static library is present, links and runs a small client against it.
//! Both checks are skipped when no C compiler is available.

use std::path::{Path, PathBuf};
use std::process::Command;

const CLIENT: &str = r#"
#include <stdio.h>
#include <string.h>
#include "satura.h"

int main(void) {
    SaturaSystem *sys = NULL;
    if (satura_system_from_text("x,y", "Fp:7", "x^2-1, y-2", &sys) != SATURA_STATUS_OK) return 1;
    if (satura_system_len(sys) != 2) return 2;
    SaturaBasis *gb = NULL;
    if (satura_groebner(sys, SATURA_ORDER_GREV_LEX, &gb) != SATURA_STATUS_OK) return 3;
    uint64_t deg = 0;
    if (satura_basis_degree(gb, &deg) != SATURA_STATUS_OK || deg != 2) return 4;
    char *json = NULL;
    if (satura_basis_to_json(gb, &json) != SATURA_STATUS_OK || strstr(json, "\"field\"") == NULL) return 5;
    satura_string_free(json);
    satura_basis_free(gb);
    satura_system_free(sys);
    if (satura_system_from_text("x", "Fp:7", "x^", &sys) != SATURA_STATUS_PARSE_ERROR) return 6;
    if (satura_last_error() == NULL) return 7;
    if (satura_system_len(NULL) != 0) return 8;
    printf("%s\n", satura_version());
    return 0;
}
"#;

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok()?.status.success().then_some(cc)
}

fn include_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

/// `cargo test` only builds the rlib, so the archive is refreshed here.
fn static_lib() -> Option<PathBuf> {
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let status = Command::new(cargo)
        .args(["build", "--quiet", "--lib", "-p", "satura-ffi"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .status()
        .ok()?;
    if !status.success() {
        return None;
    }
    // target/<profile>/deps/<this test> -> target/debug
    let exe = std::env::current_exe().ok()?;
    let lib = exe.parent()?.parent()?.parent()?.join("debug").join("libsatura_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn header_compiles_as_strict_c99() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    std::fs::write(&src, CLIENT).unwrap();
    let out = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(include_dir())
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_client_links_and_runs() {
    let (Some(cc), Some(lib)) = (compiler(), static_lib()) else {
        eprintln!("no C compiler or static library, skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    let bin = dir.path().join("client");
    std::fs::write(&src, CLIENT).unwrap();
    let out = Command::new(&cc)
        .arg("-I")
        .arg(include_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "link failed: {}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "client exited with {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with(env!("CARGO_PKG_VERSION")));
}
