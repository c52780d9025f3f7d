use std::path::Path;
use std::process::{Command, Output};

fn ocim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ocim"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const CROSSING: &str = "a x 1\nx v 0.5\nb v 0.4\n";

fn crossing_file(dir: &Path) -> String {
    let path = dir.join("crossing.txt");
    std::fs::write(&path, CROSSING).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn spread_exact_on_the_crossing_graph() {
    let dir = tempfile::tempdir().unwrap();
    let g = crossing_file(dir.path());
    let out = ocim(&[
        "spread",
        "--graph",
        &g,
        "--seeds-a",
        "a",
        "--seeds-b",
        "b",
        "--mode",
        "exact",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "2.3");
}

#[test]
fn spread_monte_carlo_agrees_with_exact() {
    let dir = tempfile::tempdir().unwrap();
    let g = crossing_file(dir.path());
    let out = ocim(&[
        "spread",
        "--graph",
        &g,
        "--seeds-a",
        "a",
        "--seeds-b",
        "b",
        "--mode",
        "mc:100000",
        "--seed",
        "5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let (mean, se) = text.split_once(',').expect("value,stderr");
    let (mean, se): (f64, f64) = (mean.parse().unwrap(), se.parse().unwrap());
    assert!(se > 0.0);
    assert!((mean - 2.3).abs() <= 4.0 * se, "{mean} +- {se}");
}

#[test]
fn spread_without_a_seeds_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let g = crossing_file(dir.path());
    let out = ocim(&["spread", "--graph", &g, "--seeds-b", "b"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0");
}

#[test]
fn spread_accepts_mu_specs_and_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let g = crossing_file(dir.path());
    let out = ocim(&["spread", "--graph", &g, "--mu", "const:0", "--seeds-a", "a"]);
    assert_eq!(stdout(&out), "1");
    let out = ocim(&[
        "spread",
        "--graph",
        &g,
        "--mu",
        "wc",
        "--seeds-a",
        "a",
        "--seeds-b",
        "b",
        "--rule",
        "a-over-b",
    ]);
    // Both edges into v get 1/2, and b reaches v one step early: 2 + 1/2 * 1/2.
    assert_eq!(stdout(&out), "2.25");
    let out = ocim(&[
        "spread",
        "--graph",
        "fixture:bipartite",
        "--mu",
        "wc",
        "--seeds-a",
        "l0",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn exact_spread_too_large_advises_monte_carlo() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.txt");
    let text: String = (0..30).map(|i| format!("n{i} n{} 0.5\n", i + 1)).collect();
    std::fs::write(&path, text).unwrap();
    let out = ocim(&[
        "spread",
        "--graph",
        path.to_str().unwrap(),
        "--seeds-a",
        "n0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("mc"), "{}", stderr(&out));
}

#[test]
fn missing_graph_file_exits_two_and_names_the_path() {
    let out = ocim(&[
        "spread",
        "--graph",
        "/nonexistent/graph.txt",
        "--seeds-a",
        "a",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/nonexistent/graph.txt"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        "[graph]\npath = \"missing.txt\"\n[algorithm]\nname = \"ts\"\n",
    )
    .unwrap();
    let out = ocim(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("missing.txt"), "{}", stderr(&out));
}

#[test]
fn unknown_flags_and_config_keys_are_rejected() {
    let out = ocim(&["spread", "--graph", "fixture:crossing", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        "[graph]\nfixture = \"crossing\"\n[algorithm]\nname = \"ts\"\nbogus = 1\n",
    )
    .unwrap();
    let out = ocim(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bogus"), "{}", stderr(&out));
}

#[test]
fn run_applies_overrides_and_echoes_them() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("demo.toml");
    std::fs::write(
        &cfg,
        "[graph]\nfixture = \"bipartite\"\n[algorithm]\nname = \"ts\"\nbudget = 2\n[competitor]\npolicy = \"rd\"\nbudget = 1\n[run]\nhorizon = 100\nrepetitions = 2\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = ocim(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "horizon=10",
        "--jobs",
        "1",
        "--output",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("rep ")).count(), 2);

    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("metadata.json")).unwrap())
            .unwrap();
    assert!(meta.to_string().contains("horizon=10"), "{meta}");
    assert_eq!(meta["config"]["run"]["horizon"], 10);

    let trace = std::fs::read_to_string(out_dir.join("trace_rep000.csv")).unwrap();
    assert_eq!(trace.lines().count(), 11);
    assert!(trace.starts_with("round,"));
}

#[test]
fn bad_override_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("demo.toml");
    std::fs::write(
        &cfg,
        "[graph]\nfixture = \"crossing\"\n[algorithm]\nname = \"ts\"\n",
    )
    .unwrap();
    let out = ocim(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "nonsense=3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = ocim(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "horizon=-4",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_selectors_and_tamper_hook() {
    let out = ocim(&["verify", "--all"]);
    assert!(out.status.success(), "{}{}", stdout(&out), stderr(&out));
    assert_eq!(
        stdout(&out).lines().filter(|l| l.contains("PASS")).count(),
        5
    );

    let out = ocim(&["verify", "nonmono"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1);

    let out = ocim(&["verify", "--all", "--tamper-tie-rule"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stdout(&out)
            .lines()
            .any(|l| l.contains("contested") && l.contains("FAIL")),
        "{}",
        stdout(&out)
    );
}

#[test]
fn oracle_prints_a_json_line() {
    let out = ocim(&[
        "oracle",
        "--graph",
        "fixture:bipartite",
        "--mu",
        "wc",
        "--k",
        "2",
        "--kind",
        "exhaustive",
        "--eval",
        "exact",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["seeds_a"].as_array().unwrap().len(), 2);
}
