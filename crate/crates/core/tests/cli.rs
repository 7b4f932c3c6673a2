//! End-to-end checks of the binary: exit codes, output shapes, and the
//! documented 0/1/2 contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(rel: &str) -> String {
    format!("{}/fixtures/{rel}", env!("CARGO_MANIFEST_DIR"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnlogic"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_in(&std::env::temp_dir(), args)
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pnlogic-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn eval_reports_truth_and_extension() {
    let output = run(&[
        "eval",
        "--model",
        &fixture("models/k_countermodel.json"),
        "--world",
        "2",
        "--formula",
        "[](p -> q)",
    ]);
    assert_eq!(code(&output), 0);
    let text = stdout(&output);
    assert!(text.starts_with("true\n"));
    assert!(text.contains("extension: {0,2}"));
}

#[test]
fn eval_exit_one_on_false() {
    let output = run(&[
        "eval",
        "--model",
        &fixture("models/k_countermodel.json"),
        "--world",
        "2",
        "--formula",
        "[]p -> []q",
    ]);
    assert_eq!(code(&output), 1);
    assert!(stdout(&output).starts_with("false\n"));

    let falsum = run(&[
        "eval",
        "--model",
        &fixture("models/birel.json"),
        "--world",
        "0",
        "--formula",
        "_|_",
    ]);
    assert_eq!(code(&falsum), 1);
}

#[test]
fn eval_on_star_model_refutes_axiom_four() {
    let output = run(&[
        "eval",
        "--model",
        &fixture("models/star_not_starstar.json"),
        "--world",
        "0",
        "--formula",
        "[][]p",
    ]);
    assert_eq!(code(&output), 1);
}

#[test]
fn eval_errors_exit_two() {
    let missing = run(&["eval", "--model", "no-such.json", "--world", "0", "--formula", "p"]);
    assert_eq!(code(&missing), 2);

    let bad_formula = run(&[
        "eval",
        "--model",
        &fixture("models/birel.json"),
        "--world",
        "0",
        "--formula",
        "p ->",
    ]);
    assert_eq!(code(&bad_formula), 2);

    let bad_world = run(&[
        "eval",
        "--model",
        &fixture("models/birel.json"),
        "--world",
        "9",
        "--formula",
        "p",
    ]);
    assert_eq!(code(&bad_world), 2);
}

#[test]
fn eval_json_is_machine_readable() {
    let output = run(&[
        "eval",
        "--model",
        &fixture("models/k_countermodel.json"),
        "--world",
        "2",
        "--formula",
        "[](p -> q)",
        "--json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["forces"], true);
    assert_eq!(value["extension"], serde_json::json!([0, 2]));
}

#[test]
fn check_reports_condition_table() {
    let output = run(&[
        "check",
        "--model",
        &fixture("models/star_not_starstar.json"),
    ]);
    assert_eq!(code(&output), 0);
    let text = stdout(&output);
    assert!(text.contains("cond1               yes"));
    assert!(text.contains("star                yes"));
    assert!(text.contains("starstar            no"));
    assert!(text.contains("valuation-monotone  yes"));
}

#[test]
fn check_flags_core_violations() {
    let dir = scratch_dir("check");
    let path = dir.join("bad_frame.json");
    std::fs::write(
        &path,
        r#"{ "worlds": 2, "order": [[0,1]], "nbhd": { "0": [[1]], "1": [] } }"#,
    )
    .unwrap();
    let output = run(&["check", "--frame", path.to_str().unwrap()]);
    assert_eq!(code(&output), 1);
    assert!(stdout(&output).contains("cond1               no"));
}

#[test]
fn check_errors_exit_two() {
    let out_of_range = scratch_dir("check-oor").join("oor.json");
    std::fs::write(
        &out_of_range,
        r#"{ "worlds": 2, "order": [[0,5]], "nbhd": {} }"#,
    )
    .unwrap();
    let output = run(&["check", "--frame", out_of_range.to_str().unwrap()]);
    assert_eq!(code(&output), 2);

    let model_as_frame = run(&["check", "--frame", &fixture("models/birel.json")]);
    assert_eq!(code(&model_as_frame), 2);

    let neither = run(&["check"]);
    assert_eq!(code(&neither), 2);
}

#[test]
fn search_exhausted_exits_zero() {
    let dir = scratch_dir("search-t");
    let output = run_in(&dir, &["search", "[]a -> a", "--max-worlds", "2"]);
    assert_eq!(code(&output), 0);
    assert!(stdout(&output).contains("exhausted-no-countermodel"));
    assert!(!dir.join("countermodel.json").exists());
}

#[test]
fn search_found_writes_witness_file() {
    let dir = scratch_dir("search-k");
    let output = run_in(
        &dir,
        &["search", "[](a -> b) -> ([]a -> []b)", "--out", "k_witness.json"],
    );
    assert_eq!(code(&output), 1);
    assert!(stdout(&output).contains("countermodel-found"));
    let text = std::fs::read_to_string(dir.join("k_witness.json")).unwrap();
    let loaded = pnlogic::model::model_from_json(&text).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(value["witness"]["assignment"].is_object());
    assert!(pnlogic::model::validate_model(&loaded.value)
        .iter()
        .all(|r| r.holds));
}

#[test]
fn search_respects_required_conditions() {
    let dir = scratch_dir("search-dia");
    let output = run_in(
        &dir,
        &["search", "[]a -> <*>a", "--require", "cond2"],
    );
    assert_eq!(code(&output), 1);

    let nabla = run_in(
        &dir,
        &["search", "[]a -> <>a", "--require", "cond2", "--max-worlds", "2"],
    );
    assert_eq!(code(&nabla), 0);
}

#[test]
fn search_errors_exit_two() {
    let bad_scheme = run(&["search", "[]a ->"]);
    assert_eq!(code(&bad_scheme), 2);

    let bad_bounds = run(&["search", "[]a -> a", "--max-worlds", "9"]);
    assert_eq!(code(&bad_bounds), 2);

    // Valid everywhere, so the search survives the small frames and
    // hits a three-world frame where 8^7 assignments exceed the budget.
    let over_budget = run(&[
        "search",
        "a1 -> (a2 -> (a3 -> (a4 -> (a5 -> (a6 -> (a7 -> a1))))))",
    ]);
    assert_eq!(code(&over_budget), 2);
    assert!(stdout(&over_budget).contains("sample-budget-exhausted"));
}

#[test]
fn replicate_single_case_and_errors() {
    let birel = run(&["replicate", "birel"]);
    assert_eq!(code(&birel), 0);
    assert!(stdout(&birel).contains("birel: pass"));

    let bogus = run(&["replicate", "bogus"]);
    assert_eq!(code(&bogus), 2);
}

#[test]
fn prove_accepts_bundled_valid_proofs() {
    for name in ["t_instance", "identity", "ext_biconditional"] {
        let output = run(&["prove", &fixture(&format!("proofs/{name}.prf"))]);
        assert_eq!(code(&output), 0, "{name}");
        assert!(stdout(&output).starts_with("valid"), "{name}");
    }
}

#[test]
fn prove_rejects_broken_proofs_with_line() {
    let output = run(&["prove", &fixture("proofs/broken_mp_shape.prf")]);
    assert_eq!(code(&output), 1);
    assert!(stdout(&output).contains("invalid at line 3"));

    let forward = run(&["prove", &fixture("proofs/broken_forward_citation.prf")]);
    assert_eq!(code(&forward), 1);
    assert!(stdout(&forward).contains("invalid at line 2"));
}

#[test]
fn prove_soundness_sweep_reports_clean() {
    let output = run(&[
        "prove",
        &fixture("proofs/ext_biconditional.prf"),
        "--soundness-sweep",
    ]);
    assert_eq!(code(&output), 0);
    assert!(stdout(&output).contains("soundness sweep: clean"));
}

#[test]
fn prove_parse_errors_exit_two() {
    let dir = scratch_dir("prove");
    let path = dir.join("mangled.prf");
    std::fs::write(&path, "1: p -> p\n").unwrap();
    let output = run(&["prove", path.to_str().unwrap()]);
    assert_eq!(code(&output), 2);
}

#[test]
fn bundled_model_files_match_embedded_fixtures() {
    let pairs = [
        ("models/birel.json", pnlogic::builtin::birel_model()),
        ("models/k_countermodel.json", pnlogic::builtin::k_countermodel()),
        ("models/mon_rule.json", pnlogic::builtin::mon_rule_model()),
        (
            "models/star_not_starstar.json",
            pnlogic::builtin::star_without_starstar_model(),
        ),
    ];
    for (file, embedded) in pairs {
        let text = std::fs::read_to_string(fixture(file)).unwrap();
        let loaded = pnlogic::model::model_from_json(&text).unwrap();
        assert_eq!(loaded.value, embedded, "{file}");
    }
}
