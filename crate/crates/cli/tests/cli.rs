//! End-to-end behaviour of the command line: reports, exit codes and the
//! documents written by the construction commands.

use std::path::{Path, PathBuf};
use std::process::Command;

use dgcalc_cli::{report_lines, run, Outcome};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn dgcalc(args: &[&str]) -> Outcome {
    run(std::iter::once("dgcalc").chain(args.iter().copied()))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn hochschild_of_the_ground_field() {
    let out = dgcalc(&["hochschild", &fixture("fixtures.json"), "--cat", "unitK", "--trunc", "4"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines = report_lines(&out.stdout);
    assert_eq!(lines[0], "t 0 betti 1 safe");
    assert!(lines[1..].iter().all(|l| l.contains("betti 0 safe")), "{lines:?}");
}

#[test]
fn hochschild_of_dual_numbers_in_characteristic_two() {
    let out = dgcalc(&["hochschild", &fixture("fixtures.json"), "--cat", "dual", "--trunc", "8"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let expected: Vec<String> = (0..=4).map(|t| format!("t {t} betti 2 safe")).collect();
    assert_eq!(report_lines(&out.stdout), expected);
}

#[test]
fn both_hochschild_routes_agree_on_fixtures() {
    for cat in ["unitK", "dual", "a2", "exterior"] {
        let base = ["hochschild", &fixture("fixtures.json"), "--cat", cat, "--trunc", "5", "--max-degree", "2"];
        let direct = dgcalc(&base);
        let mut via = base.to_vec();
        via.push("--via-adj");
        let via = dgcalc(&via);
        assert_eq!(direct.code, 0, "{}", direct.stderr);
        assert_eq!(report_lines(&direct.stdout), report_lines(&via.stdout), "{cat}");
    }
}

#[test]
fn broken_complex_names_the_degree() {
    let out = dgcalc(&["validate", &fixture("broken.json")]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("twice complex FAIL"));
    assert!(out.stdout.contains("degree 2"), "{}", out.stdout);
}

#[test]
fn shipped_fixtures_validate() {
    let out = dgcalc(&["validate", &fixture("fixtures.json")]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.lines().all(|l| l.ends_with(" ok")));
}

#[test]
fn exit_code_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let unknown_kind = write(d, "kind.json", r#"{"format":1,"field":2,"grading":"Z","entities":{"w":{"kind":"widget"}}}"#);
    let unknown_field =
        write(d, "field.json", r#"{"format":1,"field":2,"grading":"Z","entities":{},"colour":"red"}"#);
    let bad_version = write(d, "version.json", r#"{"format":7,"field":2,"grading":"Z","entities":{}}"#);
    let not_json = write(d, "junk.json", "{ not json");
    let missing_ref = write(
        d,
        "missing.json",
        r#"{"format":1,"field":2,"grading":"Z","entities":{"D":{"kind":"diagonal","category":"nowhere"}}}"#,
    );
    let fixtures = fixture("fixtures.json");
    let broken = fixture("broken.json");
    let cases: Vec<(Vec<&str>, i32, &str)> = vec![
        (vec!["validate", &fixtures], 0, ""),
        (vec!["validate", &broken], 1, "degree 2"),
        (vec!["hochschild", &fixtures, "--cat", "dual", "--trunc", "3", "--max-degree", "4"], 2, "--allow-unverified"),
        (vec!["compose", &fixtures, "--left", "diagDual", "--right", "diagDual", "--trunc", "0"], 2, ""),
        (vec!["segal", &fixtures, "--sset", "spine", "--depth", "3"], 2, ""),
        (vec!["validate", &unknown_kind], 3, "entities.w"),
        (vec!["validate", &unknown_field], 3, "colour"),
        (vec!["validate", &bad_version], 3, "format"),
        (vec!["validate", &not_json], 3, ""),
        (vec!["validate", "/nonexistent/file.json"], 3, ""),
        (vec!["frobnicate"], 3, ""),
        (vec!["validate", &missing_ref], 4, "entities.D.category"),
        (vec!["hochschild", &fixtures, "--cat", "nothing", "--trunc", "4"], 4, "nothing"),
        (vec!["hochschild", &fixtures, "--cat", "cone", "--trunc", "4"], 4, "not a category"),
    ];
    for (args, code, needle) in cases {
        let out = dgcalc(&args);
        assert_eq!(out.code, code, "{args:?}: {}{}", out.stdout, out.stderr);
        let text = format!("{}{}", out.stdout, out.stderr);
        assert!(text.contains(needle), "{args:?}: {text}");
    }
}

#[test]
fn binary_reports_exit_codes_and_streams() {
    let bin = env!("CARGO_BIN_EXE_dgcalc");
    let ok = Command::new(bin)
        .args(["hochschild", &fixture("fixtures.json"), "--cat", "unitK", "--trunc", "4"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("t 0 betti 1 safe"));
    let bad = Command::new(bin).args(["validate", &fixture("broken.json")]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stderr.is_empty());
}

#[test]
fn spine_fails_segal_at_one_one() {
    let out = dgcalc(&["segal", &fixture("fixtures.json"), "--sset", "spine", "--depth", "2"]);
    assert_eq!(out.code, 1);
    let failing: Vec<&str> = out.stdout.lines().filter(|l| l.contains("fail")).collect();
    assert_eq!(failing, vec!["1 1 fail: pair (f, g) not hit"]);
}

#[test]
fn nerves_satisfy_segal() {
    for name in ["chainNerve", "z3Nerve"] {
        let out = dgcalc(&["segal", &fixture("fixtures.json"), "--sset", name, "--depth", "4"]);
        assert_eq!(out.code, 0, "{}", out.stdout);
        assert_eq!(out.stdout.lines().filter(|l| l.ends_with(" pass")).count(), 15);
    }
}

#[test]
fn canon_is_idempotent_on_shipped_files() {
    let path = fixture("fixtures.json");
    let out = dgcalc(&["canon", &path]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, std::fs::read_to_string(&path).unwrap());
}

#[test]
fn constructions_write_loadable_documents() {
    let dir = tempfile::tempdir().unwrap();
    let fixtures = fixture("fixtures.json");
    let runs: [(&[&str], &str); 3] = [
        (&["tensor", &fixtures, "--args", "dual", "a2", "--name", "t"], "t"),
        (&["sum", &fixtures, "--args", "dual", "exterior", "--name", "s"], "s"),
        (&["oppose", &fixtures, "--args", "a2", "--name", "o"], "o"),
    ];
    for (args, name) in runs {
        let out = dgcalc(args);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        let path = write(dir.path(), &format!("{name}.json"), &out.stdout);
        let check = dgcalc(&["validate", &path]);
        assert_eq!(check.code, 0, "{}", check.stdout);
        assert_eq!(dgcalc(&["canon", &path]).stdout, out.stdout);
        let hh = dgcalc(&["hochschild", &path, "--cat", name, "--trunc", "4", "--max-degree", "1"]);
        assert_eq!(hh.code, 0, "{}", hh.stderr);
    }
}

#[test]
fn tensor_of_hochschild_is_the_product() {
    let dir = tempfile::tempdir().unwrap();
    let fixtures = fixture("fixtures.json");
    let out = dgcalc(&["tensor", &fixtures, "--args", "dual", "a2", "--name", "t"]);
    let path = write(dir.path(), "t.json", &out.stdout);
    let hh = dgcalc(&["hochschild", &path, "--cat", "t", "--trunc", "5", "--max-degree", "2"]);
    // HH(a2) is 2 in degree 0 only, HH(dual) is 2 everywhere over GF(2).
    let expected: Vec<String> = (0..=2).map(|t| format!("t {t} betti 4 safe")).collect();
    assert_eq!(report_lines(&hh.stdout), expected);
}

#[test]
fn imports_resolve_across_files() {
    let dir = tempfile::tempdir().unwrap();
    let fixtures = fixture("fixtures.json");
    let main = write(
        dir.path(),
        "main.json",
        &format!(
            r#"{{"format":1,"field":2,"grading":"Z","imports":[{:?}],
               "entities":{{"D":{{"kind":"diagonal","category":"exterior"}}}}}}"#,
            fixtures
        ),
    );
    let out = dgcalc(&["compose", &main, "--left", "D", "--right", "diagDual", "--trunc", "4"]);
    // Mismatched middle categories.
    assert_ne!(out.code, 0);
    let out = dgcalc(&["compose", &main, "--left", "D", "--right", "D", "--trunc", "4", "--max-degree", "1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
}

#[test]
fn z2_grading_requires_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("fixtures.json")).unwrap().replacen("\"Z\"", "\"Z2\"", 1);
    let path = write(dir.path(), "z2.json", &text);
    let refused = dgcalc(&["hochschild", &path, "--cat", "dual", "--trunc", "4"]);
    assert_eq!(refused.code, 2);
    let allowed = dgcalc(&["hochschild", &path, "--cat", "dual", "--trunc", "4", "--allow-unverified"]);
    assert_eq!(allowed.code, 0, "{}", allowed.stderr);
    let lines = report_lines(&allowed.stdout);
    assert!(!lines.is_empty());
    assert!(lines.iter().all(|l| l.ends_with("unverified") || l.ends_with("heuristic")), "{lines:?}");
}

#[test]
fn thread_count_does_not_change_reports() {
    let args = ["hochschild", &fixture("fixtures.json"), "--cat", "dual", "--trunc", "6"];
    let one = dgcalc(&[&["--threads", "1"], &args[..]].concat());
    let many = dgcalc(&[&["--threads", "4"], &args[..]].concat());
    assert_eq!(one.code, 0, "{}", one.stderr);
    assert_eq!(one.stdout, many.stdout);
}
