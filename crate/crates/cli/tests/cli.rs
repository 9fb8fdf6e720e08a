use std::path::Path;
use std::process::{Command, Output};

fn noqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noqc")).args(args).output().expect("binary runs")
}

fn rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn header(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .find(|l| !l.starts_with('#'))
        .unwrap_or_default()
        .to_owned()
}

#[test]
fn gate_error_worked_example() {
    let out = noqc(&["gate-error", "--epsilon", "0.8", "--freq_over_h", "1.5e4", "--gate", "phase_z"]);
    assert!(out.status.success());
    assert_eq!(header(&out), "epsilon,freq_over_h,infidelity,N_periods");
    let r = rows(&out);
    assert_eq!(r.len(), 1);
    let inf: f64 = r[0][2].parse().unwrap();
    assert!(inf <= 0.01, "{inf}");
    assert_eq!(r[0][3], "18750");
}

#[test]
fn threshold_rows_increase_with_rounds() {
    let out = noqc(&["threshold", "--freq_over_h", "1e4", "--rounds", "9,11,13,15,17", "--workers", "2"]);
    assert!(out.status.success());
    assert_eq!(header(&out), "freq_over_h,rounds,epsilon_star,iterations");
    let eps: Vec<f64> = rows(&out).iter().map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(eps.len(), 5);
    assert!(eps.windows(2).all(|w| w[1] > w[0]), "{eps:?}");
}

#[test]
fn missing_threshold_is_nan() {
    let out = noqc(&["threshold", "--freq_over_h", "1e3", "--rounds", "9"]);
    assert!(out.status.success());
    assert_eq!(rows(&out)[0][2], "nan");
}

#[test]
fn noise_check_flags_full_depolarization() {
    let out = noqc(&["noise-check", "--epsilon", "0.5,1"]);
    assert!(out.status.success());
    let r = rows(&out);
    assert_eq!((r[0][3].as_str(), r[0][4].as_str()), ("1", "1"));
    assert_eq!((r[1][3].as_str(), r[1][4].as_str()), ("0", "0"));
}

#[test]
fn distill_schema() {
    let out = noqc(&["distill", "--rounds", "3", "--epsilon", "0.2", "--include_decoupling", "off"]);
    assert!(out.status.success());
    assert_eq!(header(&out), "rounds,epsilon,freq_over_h,p_fail");
    assert_eq!(rows(&out).len(), 1);
}

#[test]
fn other_commands_run() {
    for (cmd, cols) in [
        ("fixed-state", "epsilon_i,epsilon_h,px,py,pz"),
        ("eff-h", "epsilon_i,epsilon_h,c_I,c_X,c_Y,c_Z"),
        ("swap-check", "t,deviation"),
        ("transfer-check", "mode,epsilon,freq_over_h,dependence,distance_to_rzz"),
    ] {
        let out = noqc(&[cmd]);
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(header(&out), cols);
    }
}

#[test]
fn distinct_exit_codes() {
    let code = |args: &[&str]| noqc(args).status.code().unwrap();
    assert_eq!(code(&["gate-error", "--gate", "cnot"]), 4);
    assert_eq!(code(&["distill", "--rounds", "4"]), 3);
    assert_eq!(code(&["gate-error", "--epsilon", "lin:0:1:0"]), 3);
    assert_eq!(code(&["gate-error", "--config", "/nonexistent/noqc.conf"]), 6);
    assert_ne!(code(&["bogus"]), 0);
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("sweep.conf");
    std::fs::write(&conf, "# grid\nepsilon = 0.2, 0.4\nfreq_over_h = 1e4\ngate = rz\n").unwrap();
    let out_path = dir.path().join("table.csv");
    let out = noqc(&[
        "gate-error",
        "--config",
        conf.to_str().unwrap(),
        "--epsilon",
        "0.3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(Path::new(&out_path)).unwrap();
    assert!(text.contains("# config: epsilon = 0.3\n"));
    assert!(text.contains("# config: gate = rz\n"));
    assert!(text.lines().any(|l| l.starts_with("# config_sha256: ")));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 2);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("gate-error: rz: 1 points"));
}

#[test]
fn worker_count_does_not_change_tables() {
    let args = ["eff-h", "--epsilon", "lin:0:0.9:4", "--epsilon_h", "0.1,0.6"];
    let one = noqc(&[&args[..], &["--workers", "1"]].concat());
    let four = noqc(&[&args[..], &["--workers", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}
