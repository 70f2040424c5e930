//! End-to-end checks of the binary: exit codes, formats, error messages.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_nilgraph")
}

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("nilgraph-test-{}-{name}", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

#[test]
fn check_positive_graph_exits_zero() {
    let path = write_temp("k2.edges", "2 1\n1 2\n");
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("verdict: POSITIVE"));
    assert!(stdout.contains("1: 1/3"));
}

#[test]
fn check_non_positive_graph_exits_one() {
    let path = write_temp("tc32.family", "family = \"two-chain\"\nr = 3\ns = 2\n");
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("verdict: NON-POSITIVE"));
}

#[test]
fn check_self_loop_exits_two_with_line_number() {
    let path = write_temp("loop.edges", "2 1\n1 1\n");
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("self-loop at line 2"), "stderr: {stderr}");
}

#[test]
fn check_edgeless_graph_is_vacuous_and_exits_zero() {
    let path = write_temp("empty.edges", "3 0\n");
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("verdict: VACUOUS"));
}

#[test]
fn forced_input_format_overrides_extension() {
    let path = write_temp("actually-edges.family", "2 1\n1 2\n");
    let wrong = run(&["check", path.to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(2));
    let forced = run(&[
        "check",
        path.to_str().unwrap(),
        "--input-format",
        "edges",
    ]);
    assert_eq!(forced.status.code(), Some(0));
}

#[test]
fn check_scaled_nu_multiplies_weights() {
    let path = write_temp("k2nu.edges", "2 1\n1 2\n");
    let out = run(&["check", path.to_str().unwrap(), "--nu", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("nu: 7"));
    assert!(stdout.contains("1: 7/3"));
}

#[test]
fn decompose_text_and_dot() {
    let path = write_temp("path3.edges", "3 2\n1 2\n2 3\n");
    let text = run(&["decompose", path.to_str().unwrap()]);
    assert_eq!(text.status.code(), Some(0));
    let stdout = String::from_utf8(text.stdout).unwrap();
    assert!(stdout.contains("components: 2"));
    assert!(stdout.contains("{1,3} kind=D size=2"));
    assert!(stdout.contains("reduced-dimension: 1"));

    let dot = run(&["decompose", path.to_str().unwrap(), "--format", "dot"]);
    let stdout = String::from_utf8(dot.stdout).unwrap();
    assert!(stdout.starts_with("graph coherence {"));
    assert!(stdout.contains("c0 -- c1;"));
}

#[test]
fn family_emits_canonical_edge_list() {
    let out = run(&["family", "two-chain", "--r", "1", "--s", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "3 3\n1 2\n1 3\n2 3\n");
}

#[test]
fn family_report_round_trips_through_check() {
    let out = run(&["family", "left4", "--s", "1", "--u", "6"]);
    let path = write_temp("left4.edges", &String::from_utf8(out.stdout).unwrap());
    let check = run(&["check", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(1));
    let stdout = String::from_utf8(check.stdout).unwrap();
    assert!(stdout.contains("2: -1/23"), "stdout: {stdout}");
}

#[test]
fn family_rejects_missing_and_foreign_params() {
    let missing = run(&["family", "mid4", "--r", "2", "--s", "2", "--t", "2"]);
    assert_eq!(missing.status.code(), Some(2));
    let foreign = run(&["family", "two-chain", "--r", "2", "--s", "2", "--v", "9"]);
    assert_eq!(foreign.status.code(), Some(2));
    let zero = run(&["family", "two-chain", "--r", "0", "--s", "2"]);
    assert_eq!(zero.status.code(), Some(2));
}

#[test]
fn theorem_q_too_small_without_override() {
    let out = run(&["theorem", "--q", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("below the covered range"));
}

#[test]
fn theorem_exploratory_small_q() {
    // Small q is allowed with the override; some steps are positive there,
    // so the exit code reports failed certificates.
    let out = run(&["theorem", "--q", "8", "--override-q-min"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("# nilgraph theorem v1\n"));
}

#[test]
fn soliton_finds_heisenberg_metric() {
    let path = write_temp("h3.edges", "2 1\n1 2\n");
    let out = run(&["soliton", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("accepted: true"));
    assert!(stdout.contains("c: -1.5"));
}

#[test]
fn soliton_gives_up_on_non_positive_graph() {
    let path = write_temp(
        "l4.family",
        "family = \"left4\"\ns = 1\nu = 6\n",
    );
    let out = run(&["soliton", path.to_str().unwrap(), "--max-iter", "2000"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("not-found"));
    assert!(stdout.contains("not a proof"));
}

#[test]
fn soliton_seeded_from_weights() {
    let path = write_temp("p3.edges", "3 2\n1 2\n2 3\n");
    let out = run(&["soliton", path.to_str().unwrap(), "--seed-weights"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("seed: positivity-weights"));
    assert!(stdout.contains("iterations: 0"));
}

#[test]
fn sweep_two_chain_grid_agrees() {
    let out = run(&["sweep", "two-chain"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = stdout.lines().skip(2).collect();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|row| row.ends_with(",true")));
}

#[test]
fn sweep_three_chain_default_grid_agrees() {
    let out = run(&["sweep", "three-chain", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = stdout.lines().skip(2).collect();
    assert_eq!(rows.len(), 216);
    assert!(rows.iter().all(|row| row.ends_with(",true")));
}

#[test]
fn sweep_env_jobs_fallback_is_deterministic() {
    let path_free = run(&["sweep", "three-chain", "--r", "1..3", "--s", "1..3", "--t", "1..3"]);
    let with_env = Command::new(bin())
        .args(["sweep", "three-chain", "--r", "1..3", "--s", "1..3", "--t", "1..3"])
        .env("NILGRAPH_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(path_free.stdout, with_env.stdout);
}

#[test]
fn sweep_rejects_bad_range_and_unknown_family() {
    let bad = run(&["sweep", "two-chain", "--r", "5..2"]);
    assert_eq!(bad.status.code(), Some(2));
    let unknown = run(&["sweep", "pentagon"]);
    assert_eq!(unknown.status.code(), Some(2));
}
