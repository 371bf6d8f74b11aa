//! End-to-end runs of the `blockscope` binary: outputs, exit codes and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockscope"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("blockscope-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch directory");
    dir.join(name)
}

#[test]
fn table_of_a4() {
    let out = run(&["table", path(&data("examples/a4.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let t = json_of(&out);
    assert_eq!(t["schema"], "blockscope.table/1");
    assert_eq!(t["order"], 12);
    assert_eq!(t["classes"].as_array().map(Vec::len), Some(4));
}

#[test]
fn exported_table_imports_byte_identically() {
    let first = run(&["table", path(&data("corpus/sg_21_1.json"))]);
    assert_eq!(first.status.code(), Some(0));
    let file = scratch("f21-table.json");
    std::fs::write(&file, &first.stdout).expect("write export");
    let second = run(&["table", path(&file)]);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn theorem_d_on_a6_passes_deterministically() {
    let a6 = data("corpus/a6.json");
    let runs: Vec<Value> = (0..2)
        .map(|_| {
            let out = run(&["verify", "thm-d", path(&a6), "-p", "3"]);
            assert_eq!(out.status.code(), Some(0));
            let mut v = json_of(&out);
            v["reports"][0].as_object_mut().expect("report").remove("timings");
            v
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let r = &runs[0]["reports"][0];
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["details"]["normalizer_order"], 36);
    assert!(!r["witnesses"].as_array().expect("witnesses").is_empty());
}

#[test]
fn input_errors_exit_with_two() {
    let a6 = data("corpus/a6.json");
    assert_eq!(run(&["verify", "thm-d", path(&a6), "-p", "4"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--bogus", path(&a6)]).status.code(), Some(2));
    assert_eq!(run(&["table", "/nonexistent/group.json"]).status.code(), Some(2));
    let s3 = data("corpus/sg_6_1.json");
    assert_eq!(run(&["verify", "cyclic-quotient", path(&s3)]).status.code(), Some(2));
}

#[test]
fn failed_check_exits_with_one() {
    let file = scratch("c8xc27.json");
    let cycle = |a: usize, b: usize| (a..b).map(|i| i.to_string()).collect::<Vec<_>>().join(", ");
    std::fs::write(
        &file,
        format!(
            r#"{{"name": "C8 x C27", "degree": 35, "generators": [[[{}]], [[{}]]]}}"#,
            cycle(0, 8),
            cycle(8, 35)
        ),
    )
    .expect("write group");
    let out = run(&["verify", "cyclic-quotient", path(&file)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["reports"][0]["verdict"], "fail");
}

#[test]
fn glauberman_on_the_frobenius_scene() {
    let out = run(&[
        "glauberman",
        path(&data("examples/frobenius21.json")),
        "--scene",
        "glauberman",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["C_order"], 1);
    let pairs = v["pairs"].as_array().expect("pairs");
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0]["e"], 1);
    assert!(v["checks"]["bijection"].as_bool().expect("flag"));
}

#[test]
fn canonical_extension_on_c3_times_s3() {
    let out = run(&[
        "extend-f",
        path(&data("examples/c3xs3.json")),
        "--normal",
        "N",
        "--theta",
        "0",
        "-p",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["chi"], 0);
    assert_eq!(v["degree"], 1);
    assert_eq!(v["p_rational_principal_extensions"].as_array().map(Vec::len), Some(2));
}

#[test]
fn blocks_text_rendering() {
    let out = run(&["blocks", path(&data("examples/a4.json")), "-p", "3", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).expect("utf-8");
    assert!(text.starts_with("p = 3: 2 blocks"), "{text}");
}

#[test]
fn corpus_run_writes_a_report() {
    let dir = scratch("corpus");
    std::fs::create_dir_all(&dir).expect("corpus directory");
    for f in ["sg_12_3.json", "sg_21_1.json", "a5.json"] {
        std::fs::copy(data("corpus").join(f), dir.join(f)).expect("copy corpus file");
    }
    let report = scratch("corpus-report.json");
    let out = run(&[
        "corpus",
        "run",
        path(&dir),
        "--primes",
        "odd",
        "--report",
        path(&report),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).expect("report")).expect("JSON");
    assert_eq!(v["summary"]["items"], 3);
    assert_eq!(v["summary"]["errors"], 0);
}
