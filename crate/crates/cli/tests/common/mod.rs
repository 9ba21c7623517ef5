#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

/// Shipped documents and the commands whose JSON output is frozen.
pub const CASES: &[(&str, &[&[&str]])] = &[
    (
        "f1",
        &[
            &["ring"],
            &["mul", "--class", "e1", "--class", "e1"],
            &["entropy", "--action", "id"],
            &["gate"],
            &["nef-check", "--class", "fiber"],
            &["nu", "--class", "fiber", "--ample", "ample"],
            &["verify", "--action", "id", "--class", "ample"],
            &["fano"],
        ],
    ),
    (
        "e10_coxeter",
        &[
            &["ring"],
            &["degrees", "--action", "coxeter", "--tol", "1e-9"],
            &["entropy", "--action", "coxeter"],
            &["gate"],
            &["verify", "--action", "coxeter", "--class", "h"],
            &["chain", "--action", "coxeter"],
            &["nef-check", "--class=-K"],
            &["fano"],
        ],
    ),
    (
        "bl_pt_p3",
        &[
            &["ring"],
            &["mul", "--class", "e1", "--class", "e1", "--class", "e1"],
            &["degrees", "--action", "id"],
            &["gate"],
            &["nu", "--class", "lines_through_p", "--ample", "ample"],
            &["verify", "--action", "id", "--class", "lines_through_p"],
            &["chain", "--action", "id"],
            &["fano"],
        ],
    ),
    (
        "bl_line_p3",
        &[
            &["ring"],
            &["mul", "--class", "e1", "--class", "e1", "--class", "e1"],
            &["gate"],
            &["nef-check", "--class", "planes_through_L"],
            &["nu", "--class", "planes_through_L", "--ample", "ample"],
            &["chain", "--action", "id"],
            &["fano"],
        ],
    ),
];

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(format!("{name}.json"))
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.jsonl"))
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn blowent(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_blowent")).args(args).output().expect("spawn blowent");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// Runs every frozen command on `doc` in JSON mode and concatenates the
/// output lines.
pub fn json_outputs(doc: &str, commands: &[&[&str]]) -> Result<String, String> {
    let path = data(doc);
    let path = path.to_str().unwrap();
    let mut all = String::new();
    for cmd in commands {
        let mut args = vec![cmd[0], path];
        args.extend_from_slice(&cmd[1..]);
        args.extend_from_slice(&["--format", "json"]);
        let run = blowent(&args);
        if run.code != 0 {
            return Err(format!("{args:?} exited {}: {}", run.code, run.stderr));
        }
        all += &run.stdout;
    }
    Ok(all)
}

/// Compares against the frozen file; `UPDATE_GOLDEN=1` rewrites it.
pub fn check_golden(doc: &str, commands: &[&[&str]]) -> Result<(), String> {
    let got = json_outputs(doc, commands)?;
    let path = golden_path(doc);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if got != want {
        let line = got.lines().zip(want.lines()).position(|(a, b)| a != b).unwrap_or(0);
        return Err(format!("{doc}: output differs from {} at line {}", path.display(), line + 1));
    }
    let again = json_outputs(doc, commands)?;
    if again != got {
        return Err(format!("{doc}: output not stable across runs"));
    }
    Ok(())
}
