//! End-to-end tests of the installed binary: exit codes, stream
//! separation, and the stability of the JSON output against a golden
//! file.

use std::path::PathBuf;
use std::process::{Command, Output};

use merozeta::catalog;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_merozeta"))
}

/// Writes a catalog entry to a temp file and returns the handle together
/// with the path as a `String`.
fn fixture(dir: &tempfile::TempDir, name: &str) -> String {
    let source = catalog::entry(name).expect("catalog entry exists").source;
    let path = dir.path().join(format!("{name}.mz"));
    std::fs::write(&path, source).expect("fixture written");
    path.to_str().expect("utf-8 path").to_owned()
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is utf-8")
}

#[test]
fn check_accepts_every_catalog_entry() {
    let dir = tempfile::tempdir().expect("tempdir");
    for entry in catalog::entries() {
        let path = fixture(&dir, entry.name);
        let output = binary().args(["check", &path]).output().expect("spawn");
        assert_eq!(
            output.status.code(),
            Some(0),
            "{}: {}",
            entry.name,
            stderr(&output)
        );
        assert!(stdout(&output).starts_with("ok:"), "{}", entry.name);
    }
}

#[test]
fn check_rejects_a_perturbed_total_space() {
    let source = catalog::entry("xy-on-p2").expect("entry").source;
    let corrupted = source.replace("chi_M 3", "chi_M 4");
    assert_ne!(source, corrupted, "the perturbation must hit");
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("corrupted.mz");
    std::fs::write(&path, corrupted).expect("write");
    let output = binary()
        .args(["check", path.to_str().unwrap()])
        .output()
        .expect("spawn");
    assert_eq!(output.status.code(), Some(2));
    let err = stderr(&output);
    assert!(err.contains("consistency failure"), "stderr: {err}");
    assert!(err.contains("residual"), "stderr: {err}");
}

#[test]
fn parse_errors_exit_one_with_a_position() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("broken.mz");
    std::fs::write(&path, "scenario broken\n  kind meromorphic\n  dim x\nend\n")
        .expect("write");
    let output = binary()
        .args(["check", path.to_str().unwrap()])
        .output()
        .expect("spawn");
    assert_eq!(output.status.code(), Some(1));
    let err = stderr(&output);
    assert!(err.contains("3:7"), "stderr: {err}");
    assert!(err.contains("BAD_INT"), "stderr: {err}");
}

#[test]
fn compute_json_matches_the_golden_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = fixture(&dir, "broughton");
    let output = binary()
        .args(["compute", &path, "--value", "0", "--json"])
        .output()
        .expect("spawn");
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let golden_path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", "broughton.json"]
        .iter()
        .collect();
    let golden = std::fs::read_to_string(golden_path).expect("golden file");
    assert_eq!(stdout(&output), golden);
}

#[test]
fn compute_without_json_is_for_humans() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = fixture(&dir, "quadric");
    let output = binary().args(["compute", &path]).output().expect("spawn");
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("scenario quadric (polynomial, dim 2)"), "{text}");
    assert!(text.contains("residual 0"), "{text}");
}

#[test]
fn germ_compute_emits_both_sides() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = fixture(&dir, "cusp-germ");
    let output = binary().args(["compute", &path]).output().expect("spawn");
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("zeta_zero [2:1,3:1,6:-1] degree -1"), "{text}");
    assert!(text.contains("zeta_infinity [] degree 0"), "{text}");
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let output = binary().arg("frobnicate").output().expect("spawn");
    assert_eq!(output.status.code(), Some(1));
    assert!(output.stdout.is_empty());
}

#[test]
fn skeleton_pipes_back_into_check() {
    let skeleton = binary()
        .args(["skeleton", "x + x^2*y", "--name", "draft"])
        .output()
        .expect("spawn");
    assert_eq!(skeleton.status.code(), Some(0));
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("draft.mz");
    std::fs::write(&path, &skeleton.stdout).expect("write");
    let check = binary()
        .args(["check", path.to_str().unwrap()])
        .output()
        .expect("spawn");
    assert_eq!(check.status.code(), Some(0), "{}", stderr(&check));
}

#[test]
fn catalog_json_is_deterministic_across_runs() {
    let first = binary()
        .args(["catalog", "broughton", "--json"])
        .output()
        .expect("spawn");
    let second = binary()
        .args(["catalog", "broughton", "--json"])
        .output()
        .expect("spawn");
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}
