use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn advac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_advac")).args(args).env_remove("RUST_BACKTRACE").output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

const CONFIG: &str = "\
grid.J = 40
grid.L = 40
pml.cells = 8
scheme.steps = 50
source.kind = forcing
source.time = sine
source.omega = 3.141592653589793
probes = 2.5,0.5; -3.5,1.5
snapshot.every = 25
";

#[test]
fn symbol_lists_eigenpairs_and_kernel() {
    let text = stdout(&advac(&["analyze", "symbol", "--kx", "3", "--ky", "-4", "--c0", "2"]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 7);
    assert!(rows[0].starts_with("kind,lambda_re,lambda_im"));
    let lambda_im: Vec<f64> = rows[1..5].iter().map(|r| r.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(lambda_im, vec![0.0, 0.0, 10.0, -10.0]);
    assert_eq!(rows.iter().filter(|r| r.starts_with("kernel_m2")).count(), 2);
}

#[test]
fn matched_interface_does_not_reflect() {
    let text = stdout(&advac(&["analyze", "reflect", "--omega", "2", "--sigma1", "0.7", "--sigma2", "0.7", "--angle", "0.4"]));
    assert!(text.contains("|R| = 0e0"), "{text}");
}

#[test]
fn toy_model_settles_under_constant_forcing() {
    let text = stdout(&advac(&["analyze", "toy1d", "--sigma1", "1", "--sigma2", "2", "--psi", "constant"]));
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[1] + 0.5).abs() < 1e-6 && (last[2] - 0.5).abs() < 1e-6, "{last:?}");
    assert!(!advac(&["analyze", "toy1d", "--sigma1", "1", "--sigma2", "2", "--psi", "square"]).status.success());
}

#[test]
fn run_then_compare() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("case.cfg");
    fs::write(&config, CONFIG).unwrap();
    let out = dir.path().join("out");
    stdout(&advac(&["run", config.to_str().unwrap(), "--out", out.to_str().unwrap()]));
    let probe = out.join("probe_2.5_0.5.csv");
    let text = fs::read_to_string(&probe).unwrap();
    assert!(text.starts_with("# probe"));
    assert_eq!(text.lines().nth(1), Some("step,time,p,xi,zeta"));
    assert_eq!(text.lines().count(), 53);
    assert!(out.join("probe_-3.5_1.5.csv").exists());
    assert_eq!(fs::read_dir(&out).unwrap().filter(|e| e.as_ref().unwrap().file_name().to_str().unwrap().starts_with("snapshot_")).count(), 3);

    let same = advac(&["compare", probe.to_str().unwrap(), probe.to_str().unwrap()]);
    let text = stdout(&same);
    assert_eq!(text.lines().next(), Some("step,time,abs_error,l2,linf"));
    assert!(String::from_utf8_lossy(&same.stderr).contains("L2 = 0e0"));

    let other = out.join("probe_-3.5_1.5.csv");
    let diff = advac(&["compare", probe.to_str().unwrap(), other.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    stdout(&diff);
    let errors = fs::read_to_string(out.join("error.csv")).unwrap();
    let last: Vec<f64> = errors.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!(last[3] > 0.0 && last[4] > 0.0);
}

#[test]
fn missing_config_fails() {
    let out = advac(&["run", "/nonexistent/case.cfg"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("reading"));
}

#[test]
fn physical_experiment_writes_error_series_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    stdout(&advac(&["experiment", "physical", "--out", out.to_str().unwrap(), "--layers", "4,10", "--flow", "0,0"]));
    let flow_dir = out.join("flow_0.0000_0.0000");
    assert!(flow_dir.join("reference.csv").exists());
    for layers in [4, 10] {
        let sub = flow_dir.join(format!("layers_{layers}"));
        assert!(sub.join("probe_24.5_0.5.csv").exists());
        let errors = fs::read_to_string(sub.join("error_l2.csv")).unwrap();
        assert_eq!(errors.lines().next(), Some("step,time,abs_error,l2"));
        assert_eq!(errors.lines().count(), 302);
    }
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let l2: Vec<f64> = summary.lines().skip(1).map(|r| r.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(summary.lines().next(), Some("layers,u0,v0,l2"));
    assert!(l2.len() == 2 && l2[0] > l2[1], "{summary}");
}

#[test]
fn layer_experiments_reject_a_flow() {
    let dir = tempfile::tempdir().unwrap();
    let out = advac(&["experiment", "pbm2", "--out", dir.path().to_str().unwrap(), "--flow", "0.5,0"]);
    assert!(!out.status.success());
    assert!(!Path::new(&dir.path().join("summary.csv")).exists());
}
