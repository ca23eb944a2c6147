//! Fixture file texts and binary-invocation helpers shared by the CLI
//! test suites. Each suite compiles its own copy, so unused items are
//! expected per-binary.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

/// `Im w = |z|^2`, written `(-i/2) w + (i/2) ~w - z ~z = 0`.
pub const HEIS_CR: &str = "vars z w\nrho1: -1/2*i*w + 1/2*i*~w - z*~z\n";

/// `Im w = 0`: the Levi-flat hypersurface `C x R`.
pub const LEVI_FLAT_CR: &str = "vars z w\nrho1: -1/2*i*w + 1/2*i*~w\n";

/// Codimension-two quadric in C^4 with a surjective Levi form.
pub const QUADRIC_SOURCE_CR: &str = "vars z1 z2 z3 z4\n\
rho1: 1/2*z3 + 1/2*~z3 + z1*~z1 + z2*~z2\n\
rho2: 1/2*z4 + 1/2*~z4 + 4*z1*~z1 + z2*~z2\n";

/// Same ambient data, second form flat: nondegenerate, not surjective.
pub const QUADRIC_TARGET_CR: &str = "vars z1 z2 z3 z4\n\
rho1: 1/2*z3 + 1/2*~z3 + z1*~z1 + z2*~z2\n\
rho2: 1/2*z4 + 1/2*~z4\n";

/// `|z1|^2 + |z2|^2 - |z3|^2 = 1`, based at `(1, 0, 0)`.
pub const HYPERQUADRIC_CR: &str = "vars z1 z2 z3\nbase (1, 0, 0)\n\
rho1: z1*~z1 + z2*~z2 - z3*~z3 - 1\n";

/// Codimension-two quadric in C^3 with proportional forms.
pub const CODIM2_CR: &str = "vars z1 z2 z3\n\
rho1: 1/2*z2 + 1/2*~z2 + z1*~z1\n\
rho2: 1/2*z3 + 1/2*~z3 + 2*z1*~z1\n";

/// Projection `(z1, z2, z3, z4) -> (z1, z2, z3, 0)`.
pub const PROJECTION_MAP: &str =
    "vars z1 z2 z3 z4\nbase (0, 0, 0, 0)\nf1: z1\nf2: z2\nf3: z3\nf4: 0\n";

/// Collapse `(z1, z2, z3) -> (1, z2, z2)` of the hyperquadric onto its
/// complex line.
pub const COLLAPSE_MAP: &str = "vars z1 z2 z3\nbase (1, 0, 0)\nf1: 1\nf2: z2\nf3: z2\n";

/// Order-6 truncation of `(z, w) -> (z/(1-w), w/(1-w))`.
pub const FMOB6_MAP: &str = "vars z w\nbase (0, 0)\n\
f1: z + z*w + z*w^2 + z*w^3 + z*w^4 + z*w^5\n\
f2: w + w^2 + w^3 + w^4 + w^5 + w^6\n";

/// Order-4 truncation of the same map (the determining jet for HEIS).
pub const FMOB4_MAP: &str = "vars z w\nbase (0, 0)\n\
f1: z + z*w + z*w^2 + z*w^3\n\
f2: w + w^2 + w^3 + w^4\n";

pub const IDENTITY4_MAP: &str = "vars z w\nbase (0, 0)\nf1: z\nf2: w\n";
pub const DILATION4_MAP: &str = "vars z w\nbase (0, 0)\nf1: 2*z\nf2: 4*w\n";
pub const ROTATION4_MAP: &str = "vars z w\nbase (0, 0)\nf1: i*z\nf2: w\n";
pub const TRANSLATION4_MAP: &str =
    "vars z w\nbase (0, 0)\nf1: z + 1\nf2: w + 1 + i + 2*i*z\n";

/// Write `content` under `dir` and hand back the path as a string
/// argument for the binary.
pub fn write_file(dir: &Path, name: &str, content: &str) -> String {
    let path: PathBuf = dir.join(name);
    std::fs::write(&path, content).expect("write fixture file");
    path.display().to_string()
}

/// Run the `crjet` binary; returns (exit code, stdout, stderr).
pub fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_crjet"))
        .args(args)
        .output()
        .expect("spawn the crjet binary");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        String::from_utf8(out.stderr).expect("stderr is UTF-8"),
    )
}

/// Run and parse the report object, asserting the expected exit code.
pub fn run_report(args: &[&str], want_exit: i32) -> serde_json::Value {
    let (exit, stdout, stderr) = run(args);
    assert_eq!(
        exit, want_exit,
        "crjet {args:?}: exit {exit}, want {want_exit}\nstdout: {stdout}\nstderr: {stderr}"
    );
    serde_json::from_str(&stdout)
        .unwrap_or_else(|e| panic!("crjet {args:?}: stdout is not one JSON object ({e}): {stdout}"))
}
