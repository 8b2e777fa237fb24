//! Compiles and runs a small C program against the generated header and static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "pmc_verify.h"

int main(void) {
    PmcExpr *e = NULL, *d = NULL;
    if (pmc_expr_parse("a*abar*cos(alpha)", &e) != PMC_STATUS_OK) return 10;
    if (pmc_expr_diff(e, PMC_DIFF_VAR_ABAR, &d) != PMC_STATUS_OK) return 11;
    char buf[256];
    size_t needed = 0;
    if (pmc_expr_render(d, buf, sizeof buf, &needed) != PMC_STATUS_OK) return 12;
    if (strcmp(buf, "cos(alpha)*a") != 0) { fprintf(stderr, "%s\n", buf); return 13; }
    PmcExpr *bad = NULL;
    if (pmc_expr_parse("(", &bad) != PMC_STATUS_SYNTAX) return 14;
    if (pmc_last_error(buf, sizeof buf, &needed) != PMC_STATUS_OK || needed < 2) return 15;
    pmc_expr_free(e);
    pmc_expr_free(d);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipped");
        return;
    }
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libpmc_verify_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("t.c");
    let bin = dir.path().join("t");
    std::fs::write(&src, PROGRAM).unwrap();
    let out = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}: {}", run.status.code(), String::from_utf8_lossy(&run.stderr));
}
