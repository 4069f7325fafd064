//! End-to-end runs of the `dirac-step` binary.

use std::process::{Command, Output};

use dirac_step::cli::sweep::CSV_HEADER;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dirac-step"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn dirac-step")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn point_text_and_json() {
    let o = run(&["point", "--mu", "0.5", "--sin-theta-c", "0.5", "--zone", "klein", "--sin-theta", "0.3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("zone         klein-oscillatory"));
    assert!(text.contains("reflected"));

    let o = run(&["point", "--mu", "0.5", "--nu", "0.2", "--theta", "1.2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["solution"]["zone"], "tunneling-sub");
    assert!(v["transmitted"].is_null());
    assert!((v["r2_total"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["conservation_residual"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("step.json");
    std::fs::write(&cfg, r#"{"mu": 0.5, "sin_theta_c": 0.5, "zone_side": "klein"}"#).unwrap();
    let cfg = cfg.to_str().unwrap();

    let o = run(&["point", "--config", cfg, "--sin-theta", "0.3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["solution"]["zone"], "klein-oscillatory");

    let o = run(&["point", "--config", cfg, "--nu", "0.2", "--sin-theta", "0.3", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["nu"].as_f64().unwrap() - 0.2).abs() < 1e-15);
}

#[test]
fn sweep_rows_and_determinism() {
    let args = ["sweep", "--mu", "0.5", "--nu", "0.2", "--samples", "2"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], CSV_HEADER);
    assert!(lines[1].contains(",diffusion-oscillatory,"));
    assert!(lines[2].contains(",tunneling-sub,"));

    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("serial.csv");
    let p2 = dir.path().join("parallel.csv");
    let common = ["sweep", "--mu", "0.3", "--sin-theta-c", "0.7", "--zone", "klein", "--samples", "64"];
    let serial = [&common[..], &["--threads", "1", "--out", p1.to_str().unwrap()]].concat();
    let parallel = [&common[..], &["--threads", "4", "--out", p2.to_str().unwrap()]].concat();
    assert_eq!(run(&serial).status.code(), Some(0));
    assert_eq!(run(&parallel).status.code(), Some(0));
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert_eq!(std::fs::read_to_string(&p1).unwrap().lines().count(), 65);
}

#[test]
fn figures_writes_data_and_scripts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("figs");
    let o = run(&["figures", "fig2", "--out", out.to_str().unwrap(), "--samples", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["fig2_klein_sc_half.csv", "fig2_diffusion_sc_sqrt3_half.csv", "fig2_reference.csv", "fig2.gp"] {
        assert!(out.join(name).is_file(), "missing {name}");
    }
    let data = std::fs::read_to_string(out.join("fig2_klein_sc_half.csv")).unwrap();
    assert_eq!(data.lines().count(), 9);
}

#[test]
fn verify_passes_on_a_coarse_grid() {
    let o = run(&["verify", "--grid-density", "20", "--random-points", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all 12 checks passed"));
}

#[test]
fn exit_codes() {
    // unknown flag
    assert_eq!(run(&["point", "--bogus"]).status.code(), Some(1));
    // out-of-range parameter
    assert_eq!(run(&["point", "--mu", "1.5", "--nu", "0.1", "--sin-theta", "0.2"]).status.code(), Some(1));
    // both barrier descriptions
    assert_eq!(
        run(&["point", "--mu", "0.5", "--nu", "0.1", "--sin-theta-c", "0.5", "--sin-theta", "0.2"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["verify", "--grid-density", "5"]).status.code(), Some(1));
    // sabotaged flux factor must be caught
    let o = run(&["verify", "--grid-density", "20", "--random-points", "20", "--corrupt-flux-sign"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("A1   conservation                 FAIL"));
    // unwritable output
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("x.csv");
    let o = run(&["sweep", "--mu", "0.5", "--nu", "0.2", "--samples", "2", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
