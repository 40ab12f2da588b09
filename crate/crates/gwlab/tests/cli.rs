use std::path::Path;
use std::process::{Command, Output};

fn gwlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("GWLAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn simulate_writes_csv_report_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "simulate",
        "--construction",
        "single-line",
        "--seed",
        "1",
        "--runs",
        "200",
        "--window",
        "30",
        "--out",
        "runs.csv",
    ];
    let o = gwlab(&args, dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("mean_crossings="));
    let csv = std::fs::read_to_string(dir.path().join("runs.csv")).unwrap();
    assert!(csv.starts_with("run_index,seed,construction,lambda,r,s,p,alpha,L,"));
    assert_eq!(csv.lines().count(), 201);
    assert!(dir.path().join("runs.report.json").exists());
    assert!(dir.path().join("runs.manifest.json").exists());

    // Same seed, different worker count: identical CSV.
    let mut again = args.to_vec();
    again.extend(["--workers", "1"]);
    again[10] = "runs1.csv";
    assert!(gwlab(&again, dir.path()).status.success());
    assert_eq!(csv, std::fs::read_to_string(dir.path().join("runs1.csv")).unwrap());
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["simulate", "--construction", "parallel-thinned", "--window", "10", "--runs", "1", "--seed", "1"],
        &["simulate", "--construction", "parallel-shifted", "--s", "0.9", "--window", "10", "--runs", "1", "--seed", "1"],
        &["simulate", "--construction", "warp", "--window", "10", "--runs", "1", "--seed", "1"],
        &["verify", "--suite", "nonexistent"],
        &["frobnicate"],
    ];
    for args in cases {
        let o = gwlab(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = gwlab(cases[0], dir.path());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--p"));
}

#[test]
fn exploratory_shift_is_labeled() {
    let dir = tempfile::tempdir().unwrap();
    let o = gwlab(
        &[
            "simulate",
            "--construction",
            "parallel-shifted",
            "--s",
            "0.9",
            "--allow-unproven-s",
            "--window",
            "10",
            "--runs",
            "3",
            "--seed",
            "1",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    assert!(stdout(&o).contains("exploratory"));
}

#[test]
fn verify_lists_and_runs_suites() {
    let dir = tempfile::tempdir().unwrap();
    let o = gwlab(&["verify", "--list-suites"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 9);
    let o = gwlab(&["verify", "--suite", "oracle-equivalence", "--runs", "20"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn coupled_windows_print_growth_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = gwlab(
        &[
            "simulate",
            "--construction",
            "parallel-duplicated",
            "--seed",
            "4",
            "--runs",
            "30",
            "--windows",
            "20,40",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("L=20:") && out.contains("L=40:"));
}

#[test]
fn sweep_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let o = gwlab(
        &[
            "sweep",
            "--construction",
            "parallel-thinned",
            "--window",
            "15",
            "--param",
            "p",
            "--values",
            "0.2,0.8",
            "--runs",
            "4",
            "--seed",
            "2",
            "--out",
            "sweep.csv",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.starts_with("sweep_param,sweep_value,run_index"));
    assert_eq!(csv.lines().count(), 9);

    let bad = ["sweep", "--construction", "parallel-thinned", "--window", "15", "--param", "p"];
    let mut bad = bad.to_vec();
    bad.extend(["--values", "0.5,1.5", "--runs", "2", "--seed", "1", "--out", "x.csv"]);
    assert_eq!(gwlab(&bad, dir.path()).status.code(), Some(2));
    assert!(!dir.path().join("x.csv").exists());

    let o = gwlab(&["bounds", "--alpha", "1.5707963267948966", "--max-index", "10"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    let last = out.lines().last().unwrap();
    assert!(last.starts_with("b_n,10,7.8092574185"), "{last}");
    assert_eq!(gwlab(&["bounds", "--alpha", "4"], dir.path()).status.code(), Some(2));
}

#[test]
fn trajectory_export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = gwlab(
        &[
            "simulate",
            "--construction",
            "parallel-shifted",
            "--s",
            "0.3",
            "--seed",
            "5",
            "--runs",
            "2",
            "--window",
            "20",
            "--trajectory-out",
            "t.json",
            "--binary",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("t.realization.json").exists());
    assert!(gwlab(&["export-plot-data", "--input", "t.json", "--out", "a.csv"], dir.path()).status.success());
    let args = ["export-plot-data", "--input", "t.bin", "--realization", "t.realization.json", "--out", "b.csv"];
    assert!(gwlab(&args, dir.path()).status.success());
    let read = |f: &str| std::fs::read_to_string(dir.path().join(f)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert!(read("a.csv").starts_with("step,line,u\n"));
    assert!(read("a.clusters.csv").starts_with("cluster,label,lo,hi,lead,size\n"));
    let o = gwlab(&["export-plot-data", "--input", "missing.json", "--out", "c.csv"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}
