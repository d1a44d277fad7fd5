use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_semicontract"));
    cmd.env_remove("SEMICONTRACT_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn certificate_on_scalar_problem() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "toy.saddle", "1 1 1\n1\n1\n");
    let out = run(&["certificate", "--file", &file]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "c_quarter=0.25"), "{text}");
    assert!(text.contains("verify_sharp: lmi_ok=true"));
}

#[test]
fn certificate_input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.saddle", "1 1 1\n1\n");
    assert_eq!(run(&["certificate", "--file", &bad]).status.code(), Some(1));
    let missing = dir.path().join("nope.saddle");
    assert_eq!(run(&["certificate", "--file", missing.to_str().unwrap()]).status.code(), Some(1));
    let good = write(&dir, "ok.saddle", "1 1 1\n1\n1\n");
    assert_eq!(run(&["certificate", "--file", &good, "--epsilon", "3"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["figure1", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn game_reports_consistency() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "twoplayer.game", "players = 2\nmu = 1 1\nell = 0 0.5 0.5 0\n");
    let out = run(&["game", "--file", &file]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("consistent: true, hurwitz: true"));

    let q = write(&dir, "q.game", "players = 2\nmu = 2 2\nK = 0 1 1 0\nb = -2 -2\n");
    let out = run(&["game", "--file", &q, "--simulate", "--t-end", "60"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let line = text.lines().find(|l| l.starts_with("best_response_final:")).unwrap();
    for v in line.split_whitespace().skip(1) {
        assert!((v.parse::<f64>().unwrap() - 2.0 / 3.0).abs() < 1e-9);
    }
}

#[test]
fn rates_on_path_graph() {
    let out = run(&["rates", "--family", "path", "--nodes", "3", "--tau", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let value = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(key)).unwrap();
        line.split('=').nth(1).unwrap().parse().unwrap()
    };
    // μ = ℓ = 2, λ₂ = 1, λ₃ = 3.
    assert!((value("rate_laplacian=") - 1.0 / 18.0).abs() < 1e-12);
    assert!((value("rate_incidence=") - 1.0 / 8.0).abs() < 1e-12);
    assert_eq!(run(&["rates", "--family", "path"]).status.code(), Some(1));
}

#[test]
fn rates_from_edge_list_file() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "k2.edges", "2 1\n0 1\n");
    let out = run(&["rates", "--graph", &file, "--weights", "1,1", "--tau", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("rate_laplacian=0.5"));
    let split = write(&dir, "split.edges", "4 2\n0 1\n2 3\n");
    assert_eq!(run(&["rates", "--graph", &split]).status.code(), Some(1));
}

#[test]
fn simulate_exports_trajectory() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("traj.csv");
    let out = run(&[
        "simulate", "--flow", "incidence", "--family", "cycle", "--nodes", "4", "--weights", "1,2,3,4",
        "--targets", "1,2,3,4", "--t-end", "2", "--out", csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("envelope: ok"));
    let text = fs::read_to_string(&csv).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(header.split(',').count(), 1 + 4 + 4);
    assert!(header.starts_with("t,state_0"));

    let saddle = write(&dir, "pd.saddle", "2 1 1\n2 0\n0 1\n1 1\n");
    let out = run(&["simulate", "--flow", "primal-dual", "--file", &saddle, "--variant", "small-tau"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run(&["simulate", "--flow", "primal-dual"]).status.code(), Some(1));
}

fn figure1_csv(dir: &Path, name: &str, seed_arg: Option<&str>, env_seed: Option<&str>) -> String {
    let path = dir.join(name);
    let mut cmd = bin();
    cmd.args(["figure1", "--nodes", "20", "--trials", "10", "--probs", "0.2,0.5,0.9"]);
    cmd.args(["--out", path.to_str().unwrap()]);
    if let Some(s) = seed_arg {
        cmd.args(["--seed", s]);
    }
    if let Some(s) = env_seed {
        cmd.env("SEMICONTRACT_SEED", s);
    }
    let out = cmd.output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    fs::read_to_string(path).unwrap()
}

#[test]
fn figure1_is_deterministic_and_honours_seed_override() {
    let dir = TempDir::new().unwrap();
    let a = figure1_csv(dir.path(), "a.csv", Some("7"), None);
    let b = figure1_csv(dir.path(), "b.csv", Some("7"), None);
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 4);
    assert_eq!(
        a.lines().next().unwrap(),
        "p,mean_abscissa_laplacian,ci_laplacian,mean_abscissa_incidence,ci_incidence,trials"
    );
    let from_env = figure1_csv(dir.path(), "c.csv", None, Some("7"));
    assert_eq!(a, from_env);
    let default = figure1_csv(dir.path(), "d.csv", None, None);
    assert_ne!(a, default);
    let flag_wins = figure1_csv(dir.path(), "e.csv", Some("7"), Some("8"));
    assert_eq!(a, flag_wins);
}

#[test]
fn figure1_writes_trial_log() {
    let dir = TempDir::new().unwrap();
    let log = dir.path().join("run.jsonl");
    let out = run(&[
        "figure1", "--nodes", "8", "--trials", "3", "--probs", "0.5,1.0", "--seed", "1", "--log",
        log.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(log).unwrap();
    assert_eq!(text.lines().count(), 6);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["seed"].is_u64() && v["edges"].is_u64());
        assert!(v["abscissa_laplacian"].as_f64().unwrap() < 0.0);
    }
    assert_eq!(run(&["figure1", "--trials", "1"]).status.code(), Some(1));
    let bad_env = bin().args(["figure1", "--nodes", "5", "--trials", "2"]).env("SEMICONTRACT_SEED", "x").output().unwrap();
    assert_eq!(bad_env.status.code(), Some(1));
}
