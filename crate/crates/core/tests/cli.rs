use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_x1scan");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("X1SCAN_SEED")
        .env_remove("X1SCAN_BUDGET")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write(
        dir.path(),
        "phi.x1cnf",
        "c worked example\np x1cnf 3 3\n1 -3 0\n1 -2 3 0\n2 -3 0\n",
    );
    let o = run(&["solve", &phi]);
    assert_eq!(o.status.code(), Some(10));
    assert!(stdout(&o).contains("v -1 -2 -3 0"));

    let units = write(dir.path(), "units.x1cnf", "p x1cnf 1 2\n1 0\n-1 0\n");
    assert_eq!(run(&["solve", &units]).status.code(), Some(20));

    let bad = write(dir.path(), "bad.x1cnf", "p x1cnf 2 1\n1 2 3 4 0\n");
    let o = run(&["solve", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(
        run(&["solve", "/nonexistent/file.x1cnf"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["solve"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn inline_formulas_and_stdin() {
    assert_eq!(
        run(&["solve", "-e", "1 -3 0 1 -2 3 0 2 -3 0"])
            .status
            .code(),
        Some(10)
    );
    let mut child = Command::new(BIN)
        .args(["solve", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::null())
        .spawn()
        .unwrap();
    use std::io::Write;
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"p x1cnf 2 2\n1 2 0\n1 -2 0\n")
        .unwrap();
    assert_eq!(child.wait().unwrap().code(), Some(20));
}

#[test]
fn oracle_exit_codes() {
    assert_eq!(
        run(&["oracle", "-e", "1 -3 0 1 -2 3 0 2 -3 0"])
            .status
            .code(),
        Some(10)
    );
    assert_eq!(
        run(&["oracle", "-e", "1 2 0 1 -2 0"]).status.code(),
        Some(20)
    );
    let o = run(&["oracle", "-e", "30 0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("limit"));
}

#[test]
fn net_command() {
    let o = run(&[
        "net",
        "-e",
        "1 -3 0 1 -2 3 0 2 -3 0",
        "--forward",
        "--check-reach",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("target {top}: reachable"));

    let o = run(&["net", "-e", "1 -3 0 1 -2 3 0 2 -3 0", "--inverse", "--dot"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph net {"));
    assert!(dot.contains("label=\"Phi_t\""));

    let o = run(&["net", "-e", "1 0 -2 0", "--inverse"]);
    assert!(stdout(&o).contains("0 clause conflict sets"));

    let o = run(&[
        "net",
        "-e",
        "1 2 0 1 -2 0",
        "--check-reach",
        "--budget-states",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["net", "-e", "1 -2 2 0 1 3 0", "--inverse"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("converted"));
}

#[test]
fn diff_and_bench_commands() {
    let a = run(&[
        "diff",
        "--exhaustive",
        "2",
        "--exhaustive-m",
        "2",
        "--json",
        "--no-timing",
    ]);
    let b = run(&[
        "diff",
        "--exhaustive",
        "2",
        "--exhaustive-m",
        "2",
        "--json",
        "--no-timing",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["count"], 51);

    let o = run(&["bench", "--sizes", "10,20,30,40,50", "--reps", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[0].starts_with("n,m,"));
    assert!(csv.contains("# loglog_slope,"));
}

#[test]
fn env_seed_is_used_and_flag_wins() {
    let base = [
        "solve",
        "-e",
        "1 2 3 0 -1 4 0 2 -4 5 0",
        "--json",
        "--no-timing",
        "--order",
        "random",
    ];
    let with_env = |seed: &str| {
        Command::new(BIN)
            .args(base)
            .env("X1SCAN_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    let flag = Command::new(BIN)
        .args(base)
        .args(["--seed", "9"])
        .env("X1SCAN_SEED", "4")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(
        flag,
        Command::new(BIN)
            .args(base)
            .args(["--seed", "9"])
            .output()
            .unwrap()
            .stdout
    );
    assert_eq!(with_env("4"), with_env("4"));
}
