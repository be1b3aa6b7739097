//! End-to-end runs of the `betacone` binary: output contracts, byte-level
//! determinism, and exit codes.

use std::path::Path;
use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_betacone"))
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn toy_outputs_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let status = binary()
            .args(["toy", "--iters", "400", "--seed", "7", "--rho", "0,0.01"])
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let summary = read(&out_a.join("toy_summary.csv"));
    let mut lines = summary.lines();
    assert_eq!(
        lines.next().unwrap(),
        "point,y0,y1,oracle_region,oracle_xi,oracle_loss,solver_loss,dual_value,certified,shift_c"
    );
    assert_eq!(lines.clone().count(), 4);
    // the y = (0, 1) row: oracle spike mass 0.5, certificate fired
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[3], "DiracAt1");
    let xi: f64 = first[4].parse().unwrap();
    assert!((xi - 0.5).abs() < 1e-12);
    assert_eq!(first[8], "true");
    // recovered mass within 5% of the oracle spike
    let profile = read(&out_a.join("toy_point0_profile.csv"));
    let mass: f64 = profile
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((mass - 0.5).abs() <= 0.025, "recovered mass {mass}");
    for i in 0..4 {
        assert!(out_a.join(format!("toy_point{i}_trace.csv")).exists());
        assert!(out_a.join(format!("toy_point{i}_profile.csv")).exists());
        for r in 0..2 {
            assert!(out_a.join(format!("toy_point{i}_rho{r}.png")).exists());
            assert!(out_a.join(format!("toy_point{i}_rho{r}.meta.txt")).exists());
        }
    }
    // byte-identical outputs given the seed
    for name in ["toy_summary.csv", "toy_point0_trace.csv", "toy_point0_profile.csv"] {
        assert_eq!(
            read(&out_a.join(name)),
            read(&out_b.join(name)),
            "{name} differs between reruns"
        );
    }
}

#[test]
fn tomo_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("small.conf");
    std::fs::write(&conf, "n_pixels = 16\nn_angles = 12\nn_tangential = 23\n").unwrap();
    let out = dir.path().join("out");
    let status = binary()
        .args(["tomo", "--iters", "80", "--t", "0.1", "--seed", "3"])
        .arg("--config")
        .arg(&conf)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let trace = read(&out.join("tomo_trace.csv"));
    assert!(trace.starts_with("iteration,loss,max_mass\n"));
    assert_eq!(trace.lines().count(), 82, "header + 81 trace rows");
    let certs = read(&out.join("tomo_certificates.csv"));
    assert!(certs.starts_with("iteration,shift_c,dual_value,certified\n"));
    assert_eq!(certs.lines().count(), 9, "header + 8 snapshot rows");
    assert!(out.join("tomo_phantom.png").exists());
    // snapshots are kept every 10 iterations; the early image is the one
    // nearest a tenth of the run
    assert!(out.join("tomo_iter10.png").exists());
    assert!(out.join("tomo_iter80.png").exists());
    assert!(out.join("tomo_diagnostics.csv").exists());
    let meta = read(&out.join("tomo_phantom.meta.txt"));
    assert!(meta.contains("normalization_min"));
    assert!(meta.contains("seed = 3"));
}

#[test]
fn rho_sweep_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("small.conf");
    std::fs::write(&conf, "n_pixels = 16\nn_angles = 12\nn_tangential = 23\n").unwrap();
    let out = dir.path().join("out");
    let status = binary()
        .args(["rho-sweep", "--iters", "150", "--rho", "0,0.1,1", "--seed", "5"])
        .arg("--config")
        .arg(&conf)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = read(&out.join("rho_sweep.csv"));
    assert!(csv.starts_with("rho,max_reconstruction,objective\n"));
    assert_eq!(csv.lines().count(), 4, "header + one row per rho");
    assert!(out.join("rho_sweep_low.png").exists());
    assert!(out.join("rho_sweep_high.png").exists());
}

#[test]
fn noise_demo_schema() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("small.conf");
    std::fs::write(&conf, "phi_list = 1.0, 0.1\ndraws = 500\n").unwrap();
    let out = dir.path().join("out");
    let status = binary()
        .args(["noise-demo", "--seed", "11"])
        .arg("--config")
        .arg(&conf)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = read(&out.join("noise_demo.csv"));
    // one row per (model, phi, component): 4 x 2 x 3, plus the header
    assert_eq!(csv.lines().count(), 1 + 4 * 2 * 3);
}

#[test]
fn config_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    // beta out of range
    let output = binary()
        .args(["toy", "--beta", "2.5"])
        .arg("--out")
        .arg(dir.path().join("x"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("beta"));
    // unknown config key
    let conf = dir.path().join("bad.conf");
    std::fs::write(&conf, "betta = 1.0\n").unwrap();
    let output = binary()
        .args(["toy"])
        .arg("--config")
        .arg(&conf)
        .arg("--out")
        .arg(dir.path().join("y"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("unknown config key"));
    // non-Euclidean beta rejected for the TV experiments
    let output = binary()
        .args(["rho-sweep", "--beta", "1.0"])
        .arg("--out")
        .arg(dir.path().join("z"))
        .output()
        .unwrap();
    assert!(!output.status.success());
}
