//! Compiles a small C program against the generated header and static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "noisebit.h"

int main(void) {
    NbProductState *st = NULL;
    if (nb_product_state_new(2, &st) != NB_STATUS_OK) return 10;
    if (nb_product_state_apply_gate(st, "X", 1) != NB_STATUS_OK) return 11;
    uint8_t bits[2] = {0, 1};
    double re = 0, im = 0;
    if (nb_product_state_amplitude(st, bits, 2, &re, &im) != NB_STATUS_OK) return 12;
    if (re != 1.0 || im != 0.0) return 13;
    if (nb_product_state_apply_gate(st, "nope", 0) != NB_STATUS_UNKNOWN_GATE) return 14;
    char msg[128];
    size_t need = nb_last_error_message(msg, sizeof msg);
    if (need > sizeof msg || strstr(msg, "nope") == NULL) return 15;
    nb_product_state_free(st);
    printf("ok %s\n", nb_version());
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps/
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("libnoisebit_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::TempDir::new().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("ok 0.1.0"));
}
