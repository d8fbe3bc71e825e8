use std::io::Write;
use std::process::{Command, Output, Stdio};

use lee_tiling::certify::{CertVerdict, Justification, NonexistenceCertificate, RangeSummary};
use lee_tiling::profile::ProfileReport;
use lee_tiling::search::SearchOutcome;
use lee_tiling::tiling::VerificationReport;

fn leetile(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leetile"))
        .args(args)
        .env_remove("LEETILE_FACTOR_BOUND")
        .output()
        .expect("run leetile")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn sphere_size() {
    let o = leetile(&["sphere", "--n", "3", "--r", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "25\n");
    let o = leetile(&["sphere", "--n", "2", "--r", "1", "--list"]);
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn verify_arm_sets() {
    let o = leetile(&["verify", "--group", "Z13", "--n", "2", "--t", "0;1;12;5;8"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "accept");

    let o = leetile(&["verify", "--group", "Z13", "--n", "2", "--t", "0;1;12;2;11"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("reject: quadratic-identity"));

    let o = leetile(&[
        "verify",
        "--group",
        "Z5xZ5",
        "--n",
        "1",
        "--t",
        "0,0;1,0;4,0",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn text_and_json_verdicts_agree() {
    let cases = [
        ("Z13", "2", "0;1;12;5;8"),
        ("Z13", "2", "0;2;11;3;10"),
        ("Z13", "2", "0;1;12;2;11"),
        ("Z13", "2", "0;1;5;8"),
        ("Z13", "2", "0;1;12;5;7"),
        ("Z5", "1", "0;1;4"),
        ("Z25", "3", "0;1;24;2;23;3;22"),
    ];
    for (g, n, t) in cases {
        let text = leetile(&["verify", "--group", g, "--n", n, "--t", t]);
        let json = leetile(&["verify", "--group", g, "--n", n, "--t", t, "--json"]);
        assert_eq!(code(&text), code(&json), "{g} {t}");
        let report: VerificationReport = serde_json::from_str(&stdout(&json))
            .unwrap_or_else(|e| panic!("{e}: {}", stdout(&json)));
        assert_eq!(
            report.accepted(),
            stdout(&text).trim() == "accept",
            "{g} {t}"
        );
        assert_eq!(report.accepted(), code(&json) == 0);
        let again = serde_json::to_string_pretty(&report).unwrap();
        assert_eq!(again.trim(), stdout(&json).trim());
    }
}

#[test]
fn verify_basis_files() {
    let mut text = tempfile::NamedTempFile::new().unwrap();
    writeln!(text, "2\n2 3\n3 -2").unwrap();
    let o = leetile(&["verify", "--basis", text.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let mut json = tempfile::NamedTempFile::new().unwrap();
    writeln!(json, "[[13, -1], [0, 1]]").unwrap();
    let o = leetile(&["verify", "--basis", json.path().to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1);
    let report: VerificationReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!report.accepted());

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "2\n1 2 3").unwrap();
    let o = leetile(&["verify", "--basis", bad.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn profile_report_roundtrip() {
    for k in ["2", "4"] {
        let o = leetile(&[
            "profile",
            "--group",
            "Z13",
            "--n",
            "2",
            "--t",
            "0;1;12;5;8",
            "--k",
            k,
            "--json",
        ]);
        assert_eq!(code(&o), 0);
        let report: ProfileReport = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.profile.total(), 13);
    }
    let o = leetile(&[
        "profile",
        "--group",
        "Z13",
        "--n",
        "2",
        "--t",
        "0;1;12;5;8",
        "--k",
        "3",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn search_json_and_partitions() {
    let base = leetile(&["search", "--n", "2", "--no-reduction", "--json"]);
    assert_eq!(code(&base), 0);
    let outcomes: Vec<SearchOutcome> = serde_json::from_str(&stdout(&base)).unwrap();
    assert_eq!(outcomes.len(), 1);
    assert_eq!(outcomes[0].solutions.len(), 3);
    let split = leetile(&[
        "search",
        "--n",
        "2",
        "--no-reduction",
        "--json",
        "--partitions",
        "4",
    ]);
    assert_eq!(stdout(&split), stdout(&base));

    let o = leetile(&["search", "--n", "3", "--group", "Z5xZ5", "--json"]);
    let outcomes: Vec<SearchOutcome> = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(outcomes[0].solutions.is_empty() && outcomes[0].exhausted);
}

#[test]
fn search_budget_is_reported() {
    assert_eq!(code(&leetile(&["search", "--n", "7"])), 2);
    let o = leetile(&["search", "--n", "7", "--budget", "100", "--json"]);
    assert_eq!(code(&o), 0);
    let outcomes: Vec<SearchOutcome> = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!outcomes[0].exhausted);
    assert_eq!(outcomes[0].nodes_explored, 100);
}

#[test]
fn certify_single() {
    let o = leetile(&["certify", "--n", "16", "--json"]);
    assert_eq!(code(&o), 0);
    let cert: NonexistenceCertificate = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cert.evaluated_value, 12);
    assert_eq!(cert.justification, Justification::Inequality);
    cert.self_check().unwrap();

    let o = leetile(&["certify", "--n", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("exists-with-witness"));

    let o = leetile(&["certify", "--n", "4", "--search-fallback", "--json"]);
    let cert: NonexistenceCertificate = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cert.justification, Justification::Search);
    cert.self_check().unwrap();
}

#[test]
fn certify_range_json() {
    let o = leetile(&["certify", "--range", "3:100", "--json"]);
    assert_eq!(code(&o), 0);
    let summary: RangeSummary = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary.certificates.len(), 98);
    assert!(summary.gaps.is_empty());
    assert!(summary
        .certificates
        .iter()
        .all(|c| c.verdict == CertVerdict::Nonexistent));

    let text = leetile(&["certify", "--range", "3:100"]);
    let lines = stdout(&text);
    assert_eq!(
        lines.lines().filter(|l| l.contains("nonexistent")).count(),
        98
    );
}

#[test]
fn malformed_input_exits_2() {
    for args in [
        &["verify", "--group", "Z13", "--n", "2"][..],
        &["verify", "--group", "Z13x", "--n", "2", "--t", "0"],
        &["verify", "--group", "Z13", "--n", "2", "--t", "0;0;1;12;5"],
        &["sphere", "--n", "3"],
        &["certify", "--range", "5:3"],
        &["certify", "--n", "0"],
        &["frobnicate"],
        &["sphere", "--n", "3", "--r", "2", "--bogus"],
    ] {
        let o = leetile(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn factor_bound_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_leetile"))
        .args(["groups", "--order", "25"])
        .env("LEETILE_FACTOR_BOUND", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let o = leetile(&["groups", "--order", "25"]);
    assert_eq!(stdout(&o), "Z25\nZ5xZ5\n");
    let o = leetile(&["--factor-bound", "10", "groups", "--order", "7"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn closed_stdout_is_not_an_error() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_leetile"))
        .args(["certify", "--range", "3:5000", "--json"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take());
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), 0);
    assert!(o.stderr.is_empty(), "{}", String::from_utf8_lossy(&o.stderr));
}
