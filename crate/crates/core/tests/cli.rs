use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wafom-nets"))
        .args(args)
        .env_remove("WAFOM_NETS_JOBS")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|line| line.strip_prefix(key).and_then(|rest| rest.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn search_then_merit_reproduces_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.txt");
    let out = run(&[
        "search", "--s", "1", "--d", "3", "--l", "8", "--target", "delta:3", "--trials", "50", "--seed", "1",
        "--out", path_str(&net),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(field(&text, "target_met"), "true");
    assert!(field(&text, "delta").parse::<f64>().unwrap() >= 3.0);

    let merit = run(&["merit", path_str(&net)]);
    assert_eq!(merit.status.code(), Some(0));
    let again = stdout(&merit);
    for key in ["wafom", "delta", "tail_bound", "wce_bound"] {
        assert_eq!(field(&text, key), field(&again, key));
    }
}

#[test]
fn missed_target_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.txt");
    // d = 1 with s = 2: two points cannot push every dual element past weight 4
    let out = run(&[
        "search", "--s", "2", "--d", "1", "--l", "6", "--target", "delta:4", "--trials", "3", "--seed", "5",
        "--out", path_str(&net),
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(field(&stdout(&out), "target_met"), "false");
    assert!(net.exists());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["search", "--b", "1", "--s", "1", "--d", "2"]).status.code(), Some(1));
    assert_eq!(run(&["merit", "/definitely/not/here.txt"]).status.code(), Some(1));
    // precision below M - a_1 - 1 is refused
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.txt");
    let out = run(&["search", "--s", "1", "--d", "3", "--l", "4", "--target", "delta:9", "--out", path_str(&net)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn p2_regime_is_refused() {
    let out = run(&["bounds", "--s", "1", "--regime", "p2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("there do not exist constants"));
}

#[test]
fn bounds_report_known_constants() {
    let out = run(&["bounds", "--s", "1", "--weights", "power:a=1,r=1,c=0", "--regime", "trac", "--d", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!((field(&text, "c_vol").parse::<f64>().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(field(&text, "rho_b"), "2");
}

#[test]
fn vol_matches_enumeration() {
    let out = run(&["vol", "--s", "1", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("vol=5 "), "{}", stdout(&out));
}

#[test]
fn converge_writes_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let out = run(&["converge", "--s-list", "1,2", "--d-list", "2..5", "--trials", "8", "--seed", "3", "--out", path_str(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,n,d,seed,delta,wafom,empirical,certified,lower_bound"));
    assert_eq!(lines.count(), 8);
    assert!(stdout(&out).contains("slope_vs_d_squared="));
}

#[test]
fn search_is_deterministic_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for jobs in ["1", "3"] {
        let net = dir.path().join(format!("net{jobs}.txt"));
        let out = run(&[
            "--jobs", jobs, "search", "--s", "2", "--d", "4", "--trials", "32", "--seed", "11", "--out", path_str(&net),
        ]);
        assert_eq!(out.status.code(), Some(0));
        files.push((std::fs::read(&net).unwrap(), stdout(&out)));
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn absent_seed_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.txt");
    let out = run(&["search", "--s", "1", "--d", "2", "--trials", "2", "--out", path_str(&net)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("drawn from entropy"));
}
