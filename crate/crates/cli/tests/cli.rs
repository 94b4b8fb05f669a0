//! End-to-end behaviour of the `xcsmd` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn xcsmd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xcsmd"))
        .args(args)
        .env_remove("XCSMD_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn only_subdir(base: &Path) -> std::path::PathBuf {
    let dirs: Vec<_> = fs::read_dir(base)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(dirs.len(), 1, "{dirs:?}");
    dirs[0].clone()
}

const SHORT: &[&str] = &[
    "--learning-problems",
    "40",
    "--final-exploit-problems",
    "20",
    "--runs",
    "2",
    "--n",
    "300",
];

#[test]
fn oracle_lists_every_benchmark() {
    let out = xcsmd(&["oracle"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "maze,empty_cells,optimum");
    assert_eq!(lines.len(), 10);
    assert!(lines.contains(&"woods101,10,2.9000"));
    assert!(lines.contains(&"woods1,16,1.6875"));
}

#[test]
fn analyze_reports_the_taxonomy() {
    let out = xcsmd(&["analyze-maze", "--maze", "woods101"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("woods101: type III, optimum 2.9000"));
    assert!(text.contains("pseudo-aliasing"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(xcsmd(&[]).status.code(), Some(1));
    assert_eq!(xcsmd(&["run"]).status.code(), Some(1));
    assert_eq!(
        xcsmd(&["run", "--maze", "woods1", "--bogus", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        xcsmd(&["run", "--maze", "woods1", "--beta", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        xcsmd(&["run", "--maze", "woods1", "--jobs", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(xcsmd(&["--help"]).status.code(), Some(0));
}

#[test]
fn data_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("nope.txt");
    let out = xcsmd(&["run", "--maze", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let bad = tmp.path().join("bad.txt");
    fs::write(&bad, "TTT\nT.T\nTTT\n").unwrap();
    let out = xcsmd(&["oracle", "--maze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // no output directory appears for a maze that failed to load
    let base = tmp.path().join("runs");
    let out = xcsmd(&[
        "run",
        "--maze",
        missing.to_str().unwrap(),
        "--out-dir",
        base.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!base.exists());
}

#[test]
fn run_writes_its_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let base = tmp.path().join("out");
    let mut args = vec![
        "run",
        "--maze",
        "woods101",
        "--dump-population",
        "--out-dir",
    ];
    args.push(base.to_str().unwrap());
    args.extend_from_slice(SHORT);
    let out = xcsmd(&args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("woods101 xcsmd N=300 runs=2"));
    let dir = only_subdir(&base);
    assert!(dir
        .file_name()
        .unwrap()
        .to_str()
        .unwrap()
        .ends_with("-run-woods101"));
    for f in [
        "curve_run0.csv",
        "curve_run1.csv",
        "curve.csv",
        "asl_runs.csv",
        "asl.csv",
        "manifest.txt",
        "population_run0.txt",
        "population_run1.txt",
    ] {
        assert!(dir.join(f).is_file(), "missing {f}");
    }
    let curve = fs::read_to_string(dir.join("curve_run0.csv")).unwrap();
    assert!(curve.starts_with("exploit_problem_index,raw_steps,moving_avg_50\n"));
    assert_eq!(curve.lines().count(), 1 + 20 + 20);
    let manifest = fs::read_to_string(dir.join("manifest.txt")).unwrap();
    assert!(manifest.contains("run_seeds = 1,2"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("params.txt");
    fs::write(
        &cfg,
        "# short run\nruns = 3\nlearning_problems = 20\nfinal_exploit_problems = 10\nn = 200\n",
    )
    .unwrap();
    let base = tmp.path().join("out");
    let out = xcsmd(&[
        "run",
        "--maze",
        "woods1",
        "--config",
        cfg.to_str().unwrap(),
        "--runs",
        "1",
        "--out-dir",
        base.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let manifest = fs::read_to_string(only_subdir(&base).join("manifest.txt")).unwrap();
    assert!(manifest.contains("runs = 1"));
    assert!(manifest.contains("n = 200"));

    fs::write(&cfg, "no_such_key = 4\n").unwrap();
    let out = xcsmd(&["run", "--maze", "woods1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn same_seed_gives_identical_curves() {
    let tmp = tempfile::tempdir().unwrap();
    let mut curves = Vec::new();
    for name in ["a", "b"] {
        let base = tmp.path().join(name);
        let mut args = vec![
            "run",
            "--maze",
            "maze7",
            "--out-dir",
            base.to_str().unwrap(),
        ];
        args.extend_from_slice(SHORT);
        assert!(xcsmd(&args).status.success());
        curves.push(fs::read_to_string(only_subdir(&base).join("curve.csv")).unwrap());
    }
    assert_eq!(curves[0], curves[1]);
}

#[test]
fn suite_check_reports_threshold_failures() {
    let tmp = tempfile::tempdir().unwrap();
    let base = tmp.path().join("out");
    // far too little learning to reach the ceilings
    let out = xcsmd(&[
        "suite",
        "--only",
        "woods101",
        "--check",
        "--learning-problems",
        "2",
        "--final-exploit-problems",
        "5",
        "--runs",
        "1",
        "--out-dir",
        base.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = fs::read_to_string(only_subdir(&base).join("summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert!(lines[0].starts_with("maze,aliasing_type,optimum,oracle_optimum,"));
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("Woods101,type III,2.9,2.9000,"));
}

#[test]
fn closed_stdout_is_not_a_crash() {
    use std::io::Read;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_xcsmd"))
        .args(["analyze-maze", "--maze", "maze10"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take());
    let status = child.wait().unwrap();
    let mut err = String::new();
    child
        .stderr
        .take()
        .unwrap()
        .read_to_string(&mut err)
        .unwrap();
    assert!(status.success(), "{err}");
    assert!(!err.contains("panicked"));
}
