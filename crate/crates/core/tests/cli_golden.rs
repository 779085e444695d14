mod common;

use common::{blessing, load_fixtures, run_cli};

#[test]
fn golden_fixtures() {
    let fixtures = load_fixtures();
    assert!(fixtures.len() >= 50, "fixture corpus went missing");
    let bless = blessing();
    let failures: Vec<String> = fixtures.iter().filter_map(|f| f.check(bless).err()).collect();
    assert!(failures.is_empty(), "{} fixture(s) failed:\n{}", failures.len(), failures.join("\n"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for f in load_fixtures() {
        let (a, b) = (f.run(), f.run());
        assert_eq!(a.stdout, b.stdout, "{}", f.name);
        assert_eq!(a.stderr, b.stderr, "{}", f.name);
        assert_eq!(a.exit, b.exit, "{}", f.name);
    }
}

#[test]
fn exit_codes_follow_the_contract() {
    for f in load_fixtures() {
        let expected_class = if f.name.starts_with("usage_") {
            2
        } else if f.name.starts_with("error_") {
            3
        } else {
            0
        };
        assert_eq!(f.exit, expected_class, "{} declares the wrong exit code", f.name);
    }
}

#[test]
fn input_flag_reads_a_file() {
    let args: Vec<String> = ["ring", "--format", "json", "--input", "tests/fixtures/ring_p4.json"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    // the fixture wrapper itself is not a ring document
    let out = run_cli(&args, "");
    assert_eq!(out.exit, 3);
    assert!(out.stderr.contains("invalid input"), "{}", out.stderr);

    let dir = std::env::temp_dir().join(format!("chowtower-input-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p4.json");
    std::fs::write(&path, r#"{"space": {"projective_space": {"dim": 4}}}"#).unwrap();
    let args: Vec<String> = vec![
        "ring".into(),
        "--format".into(),
        "json".into(),
        "--input".into(),
        path.to_string_lossy().into_owned(),
    ];
    let out = run_cli(&args, "");
    assert_eq!(out.exit, 0, "{}", out.stderr);
    let from_stdin = run_cli(&args[..3], r#"{"space": {"projective_space": {"dim": 4}}}"#);
    assert_eq!(out.stdout, from_stdin.stdout);
    std::fs::remove_dir_all(&dir).unwrap();

    let missing = run_cli(&["ring".into(), "--input".into(), "/nonexistent/chowtower.json".into()], "");
    assert_eq!(missing.exit, 3);
}

#[test]
fn help_exits_zero() {
    let out = run_cli(&["--help".into()], "");
    assert_eq!(out.exit, 0);
    for sub in ["ring", "poincare", "decide-pb", "decide-pb-samebase", "decide-mpb", "decide-tower3", "cor43", "oracle"] {
        assert!(out.stdout.contains(sub), "help lacks {sub}");
    }
}

#[test]
fn ring_output_round_trips() {
    for f in load_fixtures().iter().filter(|f| f.name.starts_with("ring_") && f.exit == 0) {
        let json_args: Vec<String> = vec!["ring".into(), "--format".into(), "json".into()];
        let first = run_cli(&json_args, &f.stdin);
        let v: serde_json::Value = serde_json::from_str(&first.stdout).unwrap();
        let presentation = v["presentation"].as_str().unwrap();
        let doc = serde_json::json!({"space": {"presentation": presentation}});
        let second = run_cli(&json_args, &doc.to_string());
        let w: serde_json::Value = serde_json::from_str(&second.stdout).unwrap();
        assert_eq!(v, w, "{}", f.name);
    }
}
