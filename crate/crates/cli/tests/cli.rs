use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kepler2d"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn json(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&read(dir, name)).unwrap()
}

#[test]
fn spectrum_ground_state_only() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["spectrum", "--n-max", "0"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let csv = read(dir.path(), "spectrum.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    let e: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((e + 4.0).abs() < 4e-6);
}

#[test]
fn spectrum_to_n4_has_fifteen_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["spectrum", "--n-max", "4", "--format", "csv"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(read(dir.path(), "spectrum.csv").lines().count(), 16);
    assert!(!dir.path().join("spectrum.json").exists());
}

#[test]
fn negative_n_max_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["spectrum", "--n-max", "-1"], dir.path())), 2);
}

#[test]
fn single_integral_case() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "verify-integral",
            "--n-max",
            "0",
            "--x",
            "1",
            "--format",
            "csv,json,svg",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let csv = read(dir.path(), "integral_scan.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,m,x,lhs,rhs,abs_error,rel_error,passed,cost");
    assert_eq!(lines.len(), 2);
    let rhs: f64 = lines[1].split(',').nth(4).unwrap().parse().unwrap();
    assert!((rhs - 2.0 / std::f64::consts::E).abs() < 1e-15);
    assert!(read(dir.path(), "integral_scan.svg").starts_with("<svg"));
    assert_eq!(json(dir.path(), "integral_scan.json")["passed"], 1);
}

#[test]
fn default_integral_scan_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify-integral"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(read(dir.path(), "integral_scan.csv").lines().count(), 271);
}

#[test]
fn unreachable_tolerance_fails_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify-integral", "--n-max", "2", "--tol", "1e-16"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL integral"));
    assert!(read(dir.path(), "integral_scan.csv").contains(",false,"));
}

#[test]
fn fock_ground_state() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["fock", "--n", "0", "--grid-order", "20"], dir.path());
    assert_eq!(code(&o), 0);
    let v = json(dir.path(), "fock_spectrum.json");
    let run = &v["runs"][0];
    assert_eq!(run["spectrum"]["multiplicities"][0], 1);
    let top = run["spectrum"]["eigenvalues"][0].as_f64().unwrap();
    assert!((top - 1.0).abs() < 1e-3);
}

#[test]
fn fock_shell_n2_has_five_states_at_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["fock", "--n", "2", "--grid-order", "30"], dir.path());
    assert_eq!(code(&o), 0);
    let v = json(dir.path(), "fock_spectrum.json");
    let cluster = &v["runs"][0]["spectrum"]["clusters"][2];
    assert_eq!(cluster["multiplicity"], 5);
    assert!((cluster["mean"].as_f64().unwrap() - 1.0).abs() < 1e-3);
}

#[test]
fn fock_order_too_small() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["fock", "--n", "3", "--grid-order", "2"], dir.path())), 2);
}

#[test]
fn commutator_presets() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["commutators", "--preset", "nope"], dir.path())), 2);
    let o = run(&["commutators", "--preset", "coarse"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("slope check skipped"));
    assert!(read(dir.path(), "commutators.csv").starts_with("identity,field,n,h,residual\n"));
}

#[test]
fn missing_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent");
    assert_eq!(code(&run(&["all"], &missing)), 2);
}

#[test]
fn config_file_errors_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "no_such_key = 1\n").unwrap();
    let o = run(&["spectrum", "--config", conf.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = run(&["verify-integral", "--n-max", "3", "--format", "csv,json"], dir.path());
        assert_eq!(code(&o), 0);
    }
    for name in ["integral_scan.csv", "integral_scan.json"] {
        assert_eq!(read(a.path(), name), read(b.path(), name));
    }
}

#[test]
fn full_run_passes_with_five_suites() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["all", "--no-timing"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(dir.path(), "summary.json");
    assert_eq!(v["passed"], true);
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 5);
    assert!(suites.iter().all(|s| s["runtime"].is_null()));
    for name in [
        "spectrum.csv",
        "integral_scan.csv",
        "fock_spectrum.json",
        "commutators.csv",
    ] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
}

#[test]
fn tightened_tolerances_fail() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("tight.conf");
    std::fs::write(
        &conf,
        "spectrum_tol = 1e-12\ncluster_tol = 1e-9\nfock_n_max = 1\npreset = coarse\n",
    )
    .unwrap();
    let o = run(&["all", "--parallel", "--config", conf.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("FAIL spectrum") && text.contains("FAIL fock"), "{text}");
    assert!(text.contains("relative error"));
    let v = json(dir.path(), "summary.json");
    assert_eq!(v["passed"], false);
    assert!(v["suites"][3]["passed"].as_bool().unwrap());
}
