use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn nframes(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nframes"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, stderr)
}

fn with_instance(cmd: &str, name: &str, extra: &[&str]) -> (i32, Value, String) {
    let path = fixture(name);
    let mut args = vec![cmd, "--instance", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    nframes(&args)
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn close(v: &Value, want: f64, tol: f64) -> bool {
    (num(v) - want).abs() <= tol
}

#[test]
fn check_fixture() {
    let (code, r, _) = with_instance("check", "mb.json", &[]);
    assert_eq!(code, 0);
    assert!(close(&r["results"]["lower_bound"], 1.0, 1e-12));
    assert!(close(&r["results"]["upper_bound"], 3.0, 1e-12));
    assert_eq!(r["verdicts"]["frame"], true);
    assert_eq!(r["results"]["is_tight"], false);
    assert_eq!(r["results"]["is_bessel"], true);
    assert!(r["wall_time_ms"].is_number());
    assert_eq!(r["tolerances"]["frame"], 1e-9);
}

#[test]
fn check_bessel_bound_flag() {
    let (_, r, _) = with_instance("check", "mb.json", &["--bessel-bound", "2.9"]);
    assert_eq!(r["results"]["is_bessel"], false);
}

#[test]
fn check_non_frame_exits_one() {
    let (code, r, _) = with_instance("check", "single.json", &[]);
    assert_eq!(code, 1);
    assert_eq!(r["verdicts"]["frame"], false);
}

#[test]
fn invalid_inputs_exit_two() {
    let (code, _, err) = with_instance("check", "dependent.json", &[]);
    assert_eq!(code, 2);
    assert!(err.contains("dependent"), "{err}");
    let (code, _, err) = with_instance("check", "malformed.json", &[]);
    assert_eq!(code, 2);
    assert!(err.contains("malformed"), "{err}");
    let (code, _, _) = with_instance("check", "does_not_exist.json", &[]);
    assert_eq!(code, 2);
    let (code, _, _) = with_instance("inner", "mb.json", &["--x", "x", "--y", "nope"]);
    assert_eq!(code, 2);
    let (code, _, _) = nframes(&["check"]);
    assert_eq!(code, 2);
}

#[test]
fn inner_and_norm() {
    let (code, r, _) = with_instance("inner", "mb.json", &["--x", "x", "--y", "y"]);
    assert_eq!(code, 0);
    assert!(close(&r["results"]["n_inner"], 14.0, 1e-12));
    assert!(close(&r["results"]["induced_inner"], 14.0, 1e-12));
    let (code, r, _) = with_instance("norm", "mb.json", &["--x", "x"]);
    assert_eq!(code, 0);
    assert!(close(&r["results"]["n_norm"], 5f64.sqrt(), 1e-12));
    let (_, r, _) = with_instance("norm", "scaled_anchor.json", &["--x", "e1"]);
    assert!(close(&r["results"]["n_norm"], 2.0, 1e-12));
}

#[test]
fn bounds_reports_spectrum_and_pinv_bound() {
    let (code, r, _) = with_instance("bounds", "mb.json", &[]);
    assert_eq!(code, 0);
    assert!(close(&r["results"]["pinv_lower_bound"], 1.0, 1e-10));
    assert_eq!(
        r["results"]["frame_operator"],
        serde_json::json!([[2.0, 1.0], [1.0, 2.0]])
    );
    let (code, r, _) = with_instance("bounds", "single.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["synthesis_onto"], false);
}

#[test]
fn dual_fixture() {
    let (code, r, _) = with_instance("dual", "mb.json", &[]);
    assert_eq!(code, 0);
    let want = [
        [2.0 / 3.0, -1.0 / 3.0, 0.0],
        [-1.0 / 3.0, 2.0 / 3.0, 0.0],
        [1.0 / 3.0, 1.0 / 3.0, 0.0],
    ];
    for (row, w) in r["results"]["dual_vectors"]
        .as_array()
        .unwrap()
        .iter()
        .zip(want)
    {
        for (got, w) in row.as_array().unwrap().iter().zip(w) {
            assert!(close(got, w, 1e-12));
        }
    }
    assert!(close(&r["results"]["dual_lower_bound"], 1.0 / 3.0, 1e-10));
    assert!(close(&r["results"]["dual_upper_bound"], 1.0, 1e-10));
    assert!(num(&r["results"]["max_reconstruction_residual"]) <= 1e-8);

    let (code, r, _) = with_instance("dual", "ortho.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(
        r["results"]["dual_vectors"],
        serde_json::json!([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    );

    let (code, _, _) = with_instance("dual", "single.json", &[]);
    assert_eq!(code, 1);
}

#[test]
fn tight_fixture() {
    let (code, r, _) = with_instance("tight", "mb.json", &[]);
    assert_eq!(code, 0);
    assert!(num(&r["results"]["identity_deviation"]) <= 1e-8);

    let (code, r, _) = with_instance("tight", "scaled_anchor.json", &[]);
    assert_eq!(code, 0);
    let v = &r["results"]["tight_vectors"];
    assert!(close(&v[0][0], 0.5, 1e-14) && close(&v[1][1], 0.5, 1e-14));

    let (code, _, _) = with_instance("tight", "single.json", &[]);
    assert_eq!(code, 1);
}

#[test]
fn reconstruct_fixture() {
    let (code, r, _) = with_instance("reconstruct", "mb.json", &["--x", "f"]);
    assert_eq!(code, 0);
    let out = &r["results"]["reconstructions"]["f"];
    assert!(close(&out["dual_coefficients"][0], 5.0, 1e-12));
    assert!(close(&out["dual_coefficients"][1], -2.0, 1e-12));
    assert!(close(&out["frame_coefficients"][1], -2.0, 1e-12));
    let (code, r, _) = with_instance("reconstruct", "mb.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(
        r["results"]["reconstructions"].as_object().unwrap().len(),
        4
    );
}

#[test]
fn image_fixture() {
    let (code, r, _) = with_instance("image", "mb.json", &["--op", "double"]);
    assert_eq!(code, 0);
    assert!(close(&r["results"]["lower_bound"], 4.0, 1e-12));
    assert!(close(&r["results"]["upper_bound"], 12.0, 1e-12));
    let (code, r, _) = with_instance("image", "mb.json", &["--op", "projector"]);
    assert_eq!(code, 1);
    assert_eq!(r["results"]["operator_invertible"], false);
    let (code, r, _) = with_instance("image", "mb.json", &["--op", "identity", "--perturb"]);
    assert_eq!(code, 0);
    assert!(close(&r["results"]["upper_bound"], 12.0, 1e-12));
    let (code, _, _) = with_instance("image", "mb.json", &["--op", "minus_identity", "--perturb"]);
    assert_eq!(code, 1);
}

#[test]
fn combine_fixture() {
    let (code, r, _) = with_instance("combine", "mb.json", &["--l1", "identity", "--l2", "zero"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["analysis_bounded_below"], true);
    assert_eq!(r["results"]["dual_pair"], true);
    let (code, r, _) = with_instance("combine", "mb.json", &["--l1", "zero", "--l2", "zero"]);
    assert_eq!(code, 1);
    assert_eq!(r["results"]["analysis_bounded_below"], false);
    let (code, _, _) = with_instance("combine", "ortho.json", &["--l1", "a", "--l2", "b"]);
    assert_eq!(code, 2);
}

#[test]
fn table_output() {
    let path = fixture("mb.json");
    let out = Command::new(env!("CARGO_BIN_EXE_nframes"))
        .args(["check", "--instance", path.to_str().unwrap(), "--table"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[verdicts]") && text.contains("lower_bound"));
}

#[test]
fn certify_exit_codes() {
    let (code, _, _) = nframes(&["certify", "--trials", "0"]);
    assert_eq!(code, 2);
    let (code, r, _) = nframes(&[
        "certify",
        "--seed",
        "7",
        "--trials",
        "5",
        "--sup-samples",
        "20",
        "--oracle-samples",
        "20",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["all_passed"], true);
}

#[test]
fn generated_instances_round_trip_through_files() {
    use nframes_core::testkit::{gen_sized_frame, GenConfig};
    use nframes_core::InstanceFile;
    use std::collections::BTreeMap;

    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5 {
        let fs = gen_sized_frame(&GenConfig::with_seed(seed)).unwrap();
        let file = InstanceFile::from_parts(&fs, None, &BTreeMap::new(), &BTreeMap::new());
        let path = dir.path().join(format!("i{seed}.json"));
        std::fs::write(&path, file.to_json()).unwrap();
        let (code, r, _) = nframes(&["bounds", "--instance", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        let b = nframes_core::optimal_bounds(&fs);
        assert_eq!(
            num(&r["results"]["lower_bound"]).to_bits(),
            b.lower.to_bits()
        );
        assert_eq!(
            num(&r["results"]["upper_bound"]).to_bits(),
            b.upper.to_bits()
        );
    }
}
