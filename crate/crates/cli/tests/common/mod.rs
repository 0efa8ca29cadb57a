//! Golden cases shared by the CLI tests and the acceptance runner.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use pobasis_cli::{invoke, Hooks, Invocation};

pub struct Case {
    pub name: &'static str,
    /// Arguments; `@x` stands for `golden/inputs/x.json`.
    pub args: &'static [&'static str],
    pub code: i32,
    /// Error kind expected on standard error for nonzero codes.
    pub error: Option<&'static str>,
}

const fn ok(name: &'static str, args: &'static [&'static str]) -> Case {
    Case { name, args, code: 0, error: None }
}

pub const CASES: &[Case] = &[
    ok("flip_ket00", &["flip", "@ket00"]),
    ok("flip_identity2", &["flip", "@identity2"]),
    ok("flip_operator4", &["flip", "@operator4"]),
    Case { name: "flip_density", args: &["flip", "@bell"], code: 2, error: Some("schema") },
    ok("analyze_mixed", &["analyze", "@mixed"]),
    ok("analyze_bell", &["analyze", "@bell"]),
    ok("analyze_werner08", &["analyze", "@werner08"]),
    Case { name: "analyze_product", args: &["analyze", "@product00"], code: 3, error: Some("degenerate") },
    ok("check_werner_werner", &["check", "@werner08", "@werner08"]),
    Case { name: "check_bell_mixed", args: &["check", "@bell", "@mixed"], code: 1, error: None },
    ok("check_psi06_bell", &["check", "@psi06", "@bell"]),
    ok("synth_bell_bell", &["synth", "@bell", "@bell"]),
    ok("synth_psi06_bell", &["synth", "@psi06", "@bell"]),
    ok("synth_werner_werner", &["synth", "@werner08", "@werner08"]),
    Case { name: "synth_bell_mixed", args: &["synth", "@bell", "@mixed"], code: 1, error: Some("not_transformable") },
    ok("apply_identity", &["apply", "@werner08", "@identity2", "@identity2"]),
    ok("apply_projector", &["apply", "@mixed", "@projector0", "@identity2"]),
    ok("apply_bell_projector", &["apply", "@bell", "@projector1", "@projector1"]),
    Case {
        name: "apply_zero",
        args: &["apply", "@product00", "@projector1", "@identity2"],
        code: 3,
        error: Some("zero_probability"),
    },
    ok("repmat_phase", &["repmat", "@phase2", "@identity2"]),
    ok("repmat_boost", &["repmat", "@boost2", "@identity2"]),
    ok("factor_kron", &["factor", "@kron"]),
    Case { name: "factor_swap", args: &["factor", "@swap"], code: 1, error: Some("not_product_form") },
];

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn input_path(name: &str) -> String {
    golden_dir().join("inputs").join(format!("{name}.json")).display().to_string()
}

pub fn run_case(case: &Case) -> Invocation {
    let args: Vec<String> =
        case.args.iter().map(|a| a.strip_prefix('@').map_or_else(|| a.to_string(), input_path)).collect();
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    invoke(&refs, "", &Hooks::default())
}

/// Compares a case against its golden file; `UPDATE_GOLDEN=1` rewrites the file.
pub fn check_case(case: &Case) -> Result<(), String> {
    let out = run_case(case);
    if out.code != case.code {
        return Err(format!("{}: exit {} (expected {}), stderr {}", case.name, out.code, case.code, out.stderr));
    }
    if let Some(kind) = case.error {
        let err: serde_json::Value =
            serde_json::from_str(&out.stderr).map_err(|e| format!("{}: stderr {e}", case.name))?;
        if err["error"]["kind"] != kind {
            return Err(format!("{}: error kind {} (expected {kind})", case.name, err["error"]["kind"]));
        }
    }
    let path = golden_dir().join(format!("{}.out", case.name));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if want != out.stdout {
        return Err(format!("{}: output differs from {}\n got: {}", case.name, path.display(), out.stdout));
    }
    Ok(())
}

pub fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("valid JSON")
}

pub fn numbers(v: &serde_json::Value) -> Vec<f64> {
    v.as_array().expect("array").iter().map(|x| x.as_f64().expect("number")).collect()
}
