//! Helpers for driving the compiled `circle-pursuit` binary.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

/// Runs the binary with the given arguments and returns (stdout, stderr,
/// exit code).
pub fn run(args: &[&str]) -> (String, String, i32) {
    let output = binary().args(args).output().expect("the binary runs");
    decode(output)
}

pub fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_circle-pursuit"))
}

fn decode(output: Output) -> (String, String, i32) {
    (
        String::from_utf8(output.stdout).expect("stdout is UTF-8"),
        String::from_utf8(output.stderr).expect("stderr is UTF-8"),
        output.status.code().expect("the binary exits normally"),
    )
}

/// Runs the binary expecting success (exit 0) and returns stdout.
pub fn run_ok(args: &[&str]) -> String {
    let (stdout, stderr, code) = run(args);
    assert_eq!(code, 0, "{args:?} should exit 0, stderr: {stderr}");
    stdout
}

/// A scratch path under the target directory, unique per label.
pub fn scratch(label: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).expect("tmp dir exists");
    dir.join(label)
}
