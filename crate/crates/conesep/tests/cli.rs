//! End-to-end checks of the `conesep` binary: exit codes, report JSON,
//! determinism, and plot export.

use std::path::Path;
use std::process::{Command, Output};

use conesep::scene::{report_from_json, Report};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_conesep")
}

fn write_scene(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

const THREE_SECTORS_SCENE: &str = r#"{
  "dimension": 2,
  "norm": "l1",
  "K": {"pieces": [[[-0.6,-0.4],[-0.4,-0.6]]]},
  "A": {"pieces": [[[1.0,0.0],[0.8,0.2]], [[0.2,0.8],[0.0,1.0]]]},
  "task": "separate",
  "tolerances": {"eps_mem": 1e-9, "eps_sep": 1e-7, "max_iter": 10000},
  "seed": 7
}"#;

const TWO_RAYS_SCENE: &str = r#"{
  "dimension": 2,
  "norm": "l2",
  "K": {"pieces": [[[-1.0,0.0],[0.0,-1.0]]]},
  "A": {"pieces": [[[-1.0,2.0]], [[2.0,-1.0]]]},
  "task": "separate",
  "seed": 7
}"#;

#[test]
fn separate_reports_obstruction_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(dir.path(), "three-sectors.json", THREE_SECTORS_SCENE);
    let out = run(&["separate", "--scene", scene.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: Report = report_from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let verdict = report.verdict.unwrap();
    assert!(!verdict.separated);
    let obs = verdict.obstruction.unwrap();
    // The witness sits on the common segment x + y = 1 between the hulls.
    let w = &obs.witness_point;
    assert!((w[0] + w[1] - 1.0).abs() < 1e-6, "witness {w:?}");
}

#[test]
fn separate_emits_certificate_with_exit_0() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(dir.path(), "two-rays.json", TWO_RAYS_SCENE);
    let out = run(&["separate", "--scene", scene.to_str().unwrap(), "--samples", "2000"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: Report = report_from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let cert = report.verdict.unwrap().certificate.unwrap();
    // x* ∝ (−1, −1) and α inside (1/√5, 1).
    assert!((cert.xstar[0] - cert.xstar[1]).abs() < 1e-6);
    assert!(cert.alpha > 0.447 && cert.alpha < 1.0);
    assert!(report.certification.unwrap().strict.ok);
}

#[test]
fn malformed_scene_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    // Zero generator.
    let bad = THREE_SECTORS_SCENE.replace("[-0.6,-0.4]", "[0.0,0.0]");
    let scene = write_scene(dir.path(), "bad.json", &bad);
    let out = run(&["separate", "--scene", scene.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Unreadable file.
    let out = run(&["separate", "--scene", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Certify without a certificate.
    let scene = write_scene(dir.path(), "two-rays.json", TWO_RAYS_SCENE);
    let out = run(&["certify", "--scene", scene.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_up_to_wall_time() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(dir.path(), "two-rays.json", TWO_RAYS_SCENE);
    let args = ["separate", "--scene", scene.to_str().unwrap(), "--samples", "1000"];
    let mut r1: Report =
        report_from_json(&String::from_utf8(run(&args).stdout).unwrap()).unwrap();
    let mut r2: Report =
        report_from_json(&String::from_utf8(run(&args).stdout).unwrap()).unwrap();
    r1.wall_time_ms = 0.0;
    r2.wall_time_ms = 0.0;
    let j1 = conesep::scene::report_to_json(&r1).unwrap();
    let j2 = conesep::scene::report_to_json(&r2).unwrap();
    assert_eq!(j1, j2);
}

#[test]
fn seed_override_is_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(dir.path(), "two-rays.json", TWO_RAYS_SCENE);
    let out = run(&[
        "separate",
        "--scene",
        scene.to_str().unwrap(),
        "--samples",
        "500",
        "--seed",
        "123",
    ]);
    let report: Report = report_from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(report.scene.seed, 123);
}

#[test]
fn analyze_and_certify_paths() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(dir.path(), "three-sectors.json", THREE_SECTORS_SCENE);
    let out = run(&["analyze", "--scene", scene.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: Report = report_from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let analysis = report.analysis.unwrap();
    assert!(analysis.necessary_conditions && !analysis.hulls_disjoint);

    // A valid hand certificate for the two-ray scene.
    let certified = TWO_RAYS_SCENE.replace(
        "\"task\": \"separate\"",
        "\"task\": \"certify\", \"certificate\": {\"xstar\": [-1.0, -1.0], \"alpha\": 0.7}",
    );
    let scene = write_scene(dir.path(), "two-rays-cert.json", &certified);
    let out = run(&["certify", "--scene", scene.to_str().unwrap(), "--samples", "2000"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    // Tampered α flips the verdict.
    let tampered = certified.replace("0.7", "1.1");
    let scene = write_scene(dir.path(), "two-rays-tampered.json", &tampered);
    let out = run(&["certify", "--scene", scene.to_str().unwrap(), "--samples", "2000"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn plot_export_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let certified = TWO_RAYS_SCENE.replace(
        "\"task\": \"separate\"",
        "\"task\": \"export-plot\", \"certificate\": {\"xstar\": [-1.0, -1.0], \"alpha\": 0.7}",
    );
    let scene = write_scene(dir.path(), "plot.json", &certified);
    let csv_path = dir.path().join("plot.csv");
    let out = run(&[
        "export-plot",
        "--scene",
        scene.to_str().unwrap(),
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("label,x,y\n"));
    for label in ["A_ray", "K_ray", "A_base", "K_base", "A_hull", "K_hull", "BP_boundary", "hyperplane"] {
        assert!(csv.contains(&format!("\n{label},")), "missing {label}");
    }

    // Forgetting --out is an input error.
    let out = run(&["export-plot", "--scene", scene.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_check_agrees_on_the_two_ray_scene() {
    let dir = tempfile::tempdir().unwrap();
    let certified = TWO_RAYS_SCENE.replace(
        "\"task\": \"separate\"",
        "\"task\": \"oracle-check\", \"certificate\": {\"xstar\": [-1.0, -1.0], \"alpha\": 0.7}",
    );
    let scene = write_scene(dir.path(), "oc.json", &certified);
    let out = run(&["oracle-check", "--scene", scene.to_str().unwrap(), "--samples", "2000"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: Report = report_from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let oracle = report.oracle.unwrap();
    assert!(oracle.mu_max_abs_err <= 5e-3);
    assert_eq!(oracle.separation_agrees, Some(true));
    assert!(oracle.cor_agrees);
}
