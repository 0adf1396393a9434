use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fogndt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fogndt")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const TWO_NODE: &str = "# two nodes\nK = 2\nr = 2\nalpha = 0.6666666666666666\nsweep = mu\ncount = 4\n";

#[test]
fn sweep_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.cfg", TWO_NODE);
    let out = fogndt(&["ndt-sweep", "--config", &cfg, "--set", "curves=nonorthogonal"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "sweep_var,value,curve,delta_f,delta_e,delta");
    assert_eq!(lines[1], "mu,0,nonorthogonal,0.5,1.5,2");
    assert_eq!(lines.last().unwrap(), &"mu,1,nonorthogonal,0,1,1");
}

#[test]
fn out_file_gets_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.cfg", TWO_NODE);
    let csv = dir.path().join("two_node.csv");
    let status = fogndt(&["ndt-sweep", "--config", &cfg, "--seed", "9", "--out", csv.to_str().unwrap()]).status;
    assert!(status.success());
    assert!(fs::read_to_string(&csv).unwrap().starts_with("sweep_var,"));
    let sidecar = dir.path().join("two_node.csv.manifest");
    let manifest = fs::read_to_string(&sidecar).unwrap();
    assert!(manifest.contains("tool = fogndt"));
    assert!(manifest.contains("seed = 9"));
    assert!(manifest.contains("mode = ndt-sweep"));

    // The manifest replays the run.
    let again = dir.path().join("again.csv");
    let status = fogndt(&["ndt-sweep", "--config", sidecar.to_str().unwrap(), "--out", again.to_str().unwrap()]).status;
    assert!(status.success());
    assert_eq!(fs::read(&csv).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn flag_overrides_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.cfg", TWO_NODE);
    let out = fogndt(&["ndt-sweep", "--config", &cfg, "--set", "r=6", "--set", "curves=orthogonal"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "mu,0,orthogonal,0.3333333333333333,1,1.3333333333333333");
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cfg", "K = 2\nr = 2\nalpha = 1.5\nsweep = mu\n");
    let out = fogndt(&["ndt-sweep", "--config", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3") && err.contains("alpha"), "{err}");

    let unknown = write(dir.path(), "unknown.cfg", "K = 2\nbeta = 1\n");
    let out = fogndt(&["ndt-sweep", "--config", &unknown]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("beta"));

    let out = fogndt(&["ndt-sweep", "--config", dir.path().join("missing.cfg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = fogndt(&["ndt-sweep", "--set", "K=2", "--set", "curves="]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn single_round_verify_reports_every_claim() {
    let out = fogndt(&["sim-verify", "--set", "rounds=1", "--seed", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(text.lines().next().unwrap(), "claim,theory,measured,r2,pass");
    assert_eq!(rows.len(), 12);
    let all_pass = rows.iter().all(|r| r.ends_with(",true"));
    assert_eq!(out.status.code(), Some(if all_pass { 0 } else { 2 }));
}

#[test]
fn verify_failure_exits_two() {
    // No tolerance at all cannot be met by a Monte Carlo estimate.
    let out = fogndt(&["sim-verify", "--set", "rounds=50", "--set", "tolerance=0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("claims failed"));
}

#[test]
fn default_verify_passes() {
    let out = fogndt(&["sim-verify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn shipped_configs_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["cache-sweep.cfg", "csi-sweep.cfg", "verify.cfg"] {
        let path = dir.join(name);
        let mode = if name == "verify.cfg" { "sim-verify" } else { "ndt-sweep" };
        let out = fogndt(&[mode, "--config", path.to_str().unwrap()]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
