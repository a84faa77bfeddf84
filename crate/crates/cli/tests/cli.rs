use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn smonkit(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_smonkit")).args(args).output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

#[test]
fn check_exit_codes() {
    let (out, _, code) = smonkit(&["check", &fixture("q3-S3.mod"), &fixture("p3.lrep"), &fixture("q3.alg")]);
    assert_eq!(code, 0, "{out}");
    let (out, _, code) = smonkit(&["check", &fixture("q3-violates.mod")]);
    assert_eq!(code, 1);
    assert!(out.contains("relation beta alpha"), "{out}");
    let (_, err, code) = smonkit(&["check", &fixture("q3-malformed.mod")]);
    assert_eq!(code, 2);
    assert!(err.contains(":5:3:"), "{err}");
}

#[test]
fn wrappers_print_results() {
    let (out, _, code) = smonkit(&["smon", "--pred", "ALL", &fixture("p3.lrep")]);
    assert_eq!((out.as_str(), code), ("smon(ALL): PASS\n", 0));
    let (out, _, code) = smonkit(&["smon", &fixture("s2.lrep")]);
    assert_eq!(code, 1);
    assert!(out.starts_with("smon(ALL): FAIL(m2"), "{out}");
    let (out, _, code) = smonkit(&["ext", "--k", "1", &fixture("q3-S3.mod"), &fixture("q3-S2.mod")]);
    assert_eq!((out.as_str(), code), ("1\n", 0));
    let (out, _, code) = smonkit(&["gp", "--bound", "10", &fixture("kx2-S.mod")]);
    assert_eq!((out.as_str(), code), ("CERTIFIED_UP_TO(10)\n", 0));
    let (out, _, code) = smonkit(&["semigp", &fixture("q3-S3.mod")]);
    assert_eq!(code, 1);
    assert!(out.starts_with("REFUTED"), "{out}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(smonkit(&["suite", "bogus"]).2, 2);
    assert_eq!(smonkit(&["frobnicate"]).2, 2);
    assert_eq!(smonkit(&["smon", "--pred", "WHAT", &fixture("p3.lrep")]).2, 2);
    assert_eq!(smonkit(&["ext", &fixture("q3-S3.mod"), &fixture("kx2-S.mod")]).2, 2);
}

#[test]
fn prime_flag_and_file_prime_conflict() {
    let dir = tempfile::tempdir().unwrap();
    let alg = dir.path().join("f3.alg");
    std::fs::write(&alg, "smonkit-algebra 1\nprime 3\nvertices 1\n").unwrap();
    let alg = alg.display().to_string();
    assert_eq!(smonkit(&["check", &alg]).2, 0);
    assert_eq!(smonkit(&["check", "--prime", "3", &alg]).2, 0);
    assert_eq!(smonkit(&["check", "--prime", "5", &alg]).2, 2);
}

#[test]
fn tensor_output_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let (out, _, code) = smonkit(&["tensor", &fixture("kx2-S.mod"), &fixture("a2-S2.mod")]);
    assert_eq!(code, 0);
    let path = dir.path().join("t.lrep");
    std::fs::write(&path, &out).unwrap();
    let p = path.display().to_string();
    assert_eq!(smonkit(&["check", &p]).2, 0);
    // S ⊗ S(2) over A_2 is not monic
    assert_eq!(smonkit(&["smon", &p]).2, 1);
    let (cok, _, code) = smonkit(&["coker", "--vertex", "2", &p]);
    assert_eq!(code, 0);
    assert!(cok.contains("dims 1\n"), "{cok}");
}

#[test]
fn split_reports_agreement() {
    let (out, _, code) = smonkit(&["split", &fixture("kx2-a2.lrep")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("round-trip: ok") && out.contains("agreement: yes"), "{out}");
}

#[test]
fn fixtures_round_trip_after_comment_removal() {
    for name in ["q3-S3.mod", "p3.lrep", "kx2-a2.lrep", "kupisch-17-18-18.alg"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let doc = smonkit_cli::format::parse_document(&text).unwrap();
        let canonical = doc.to_string();
        let again = smonkit_cli::format::parse_document(&canonical).unwrap().to_string();
        assert_eq!(canonical, again, "{name}");
        let stripped: String = text
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .map(|l| format!("{l}\n"))
            .collect();
        assert_eq!(canonical, stripped, "{name}");
    }
}

#[test]
fn suite_records_and_replay() {
    let args = ["suite", "ce", "--samples", "8", "--seed", "4", "--no-timing", "--format", "records"];
    let (a, _, code) = smonkit(&args);
    assert_eq!(code, 0);
    assert_eq!(a, smonkit(&args).0);
    assert_eq!(a.lines().filter(|l| l.starts_with("ce\tsample")).count(), 8);
    let (one, _, _) = smonkit(&["suite", "ce", "--samples", "8", "--seed", "4", "--no-timing", "--format", "records", "--index", "5"]);
    let line = one.lines().next().unwrap();
    assert!(a.lines().any(|l| l == line), "{line}");
}

#[test]
fn library_entry_point_matches_binary() {
    let o = smonkit_cli::run_args(["smonkit", "ext", "--k", "1", &fixture("q3-S3.mod"), &fixture("q3-S2.mod")]);
    assert_eq!((o.stdout.as_str(), o.code), ("1\n", 0));
}
