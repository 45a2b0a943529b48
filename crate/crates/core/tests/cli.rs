use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopf-clifford"))
        .args(args)
        .env_remove("HOPF_CLIFFORD_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("hopf-clifford-cli-{}-{name}", std::process::id()))
}

#[test]
fn analyze_counterexample_for_g() {
    let o = cli(&["analyze", "--builtin", "s4_counterexample", "--alpha", "g"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("alpha δ_g: deg 1, dim Z = 4, bound 8"), "{text}");
    assert!(text.contains("verdict FAILS"));
    assert!(text.contains("H = {1, t}, dim S = 8, S Hopf false"));
}

#[test]
fn classical_and_cocentral_hold_everywhere() {
    for name in ["s3_a3_classical", "cocentral_c4_c2"] {
        let o = cli(&["analyze", "--builtin", name, "--alpha", "all"]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        assert!(!text.contains("FAILS"), "{text}");
        assert!(text.contains("cocentral: true"));
    }
}

#[test]
fn list_irr_degrees() {
    let o = cli(&["list-irr", "--builtin", "s4_counterexample"]);
    assert!(stdout(&o).contains("Irr(A): χ0(1) χ1(1) χ2(2) χ3(3) χ4(3)"));
    let o = cli(&["list-irr", "--builtin", "cocentral_c4_c2"]);
    assert!(stdout(&o).contains("Irr(A): χ0(1) χ1(1) χ2(1) χ3(1) χ4(2)"));
}

#[test]
fn verify_axioms_on_builtins() {
    for name in ["s4_counterexample", "s3_a3_classical", "cocentral_c4_c2"] {
        let o = cli(&["verify-axioms", "--builtin", name]);
        assert_eq!(o.status.code(), Some(0));
        assert!(!stdout(&o).contains("FAIL"));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["analyze", "--builtin", "nope"]).status.code(), Some(2));
    assert_eq!(cli(&["analyze"]).status.code(), Some(2));
    let bad = temp("nonnormal.json");
    std::fs::write(
        &bad,
        r#"{"name": "s3 over c2", "construction": "group_algebra",
            "group": {"generators": ["(12)", "(123)"]}, "b": {"generators": ["(12)"]}}"#,
    )
    .unwrap();
    assert_eq!(cli(&["analyze", "--scenario", bad.to_str().unwrap()]).status.code(), Some(3));
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(cli(&["analyze", "--scenario", bad.to_str().unwrap()]).status.code(), Some(2));
    let _ = std::fs::remove_file(&bad);
}

#[test]
fn seed_from_environment() {
    let path = temp("env.json");
    let o = Command::new(env!("CARGO_BIN_EXE_hopf-clifford"))
        .args(["list-irr", "--builtin", "s3_a3_classical", "--json"])
        .arg(&path)
        .env("HOPF_CLIFFORD_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let a = std::fs::read(&path).unwrap();
    let o = cli(&["list-irr", "--builtin", "s3_a3_classical", "--seed", "99", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(a, std::fs::read(&path).unwrap());
    let bad = Command::new(env!("CARGO_BIN_EXE_hopf-clifford"))
        .args(["list-irr", "--builtin", "s3_a3_classical"])
        .env("HOPF_CLIFFORD_SEED", "x")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let _ = std::fs::remove_file(&path);
}

#[test]
fn shipped_scenario_files() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let o = cli(&["analyze", "--scenario", dir.join("dual_s3.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAILS"));
    let o = cli(&["analyze", "--scenario", dir.join("s4_from_generators.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("verdict FAILS").count(), 2);
}
