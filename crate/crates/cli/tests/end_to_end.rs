//! End-to-end runs of the command pipeline through the library entry point.

use frwtk_cli::{csv_io, run, Cli, Command};
use clap::Parser;
use num_complex::Complex64;
use tempfile::tempdir;

fn cli(args: &[&str]) -> Cli {
    Cli::parse_from(std::iter::once("frwtk").chain(args.iter().copied()))
}

#[test]
fn gen_transform_inverse_pipeline() {
    let dir = tempdir().unwrap();
    let sig = dir.path().join("sig.csv");
    let plane = dir.path().join("plane.csv");
    let back = dir.path().join("back.csv");

    run(cli(&[
        "gen", "chirp", "--n", "256", "--t-min", "-8", "--t-max", "8", "--f0", "3.5",
        "--rate", "0.1", "--width", "1.4142135623730951", "--out", sig.to_str().unwrap(),
    ]))
    .unwrap();
    run(cli(&[
        "transform", "--in", sig.to_str().unwrap(), "--wavelet", "mexican", "--alpha", "1.0",
        "--rho", "1.0", "--grid", "0.1,16,36,-24,24,520", "--out", plane.to_str().unwrap(),
    ]))
    .unwrap();
    run(cli(&[
        "inverse", "--in", plane.to_str().unwrap(), "--wavelet", "mexican", "--alpha", "1.0",
        "--rho", "1.0", "--t-min", "-8", "--t-max", "8", "--n", "256", "--out",
        back.to_str().unwrap(),
    ]))
    .unwrap();

    let original = csv_io::read_signal(&sig).unwrap();
    let recovered = csv_io::read_signal(&back).unwrap();
    let err = recovered.rel_l2_distance(&original).unwrap();
    assert!(err < 0.05, "file round trip rel L2 {err}");
}

#[test]
fn golden_plane_for_documented_chirp_run() {
    // chirp defaults (f0 1.5, rate 0.7, width 2) on 128 samples over [-6, 6],
    // mexican hat, alpha 0.5, rho 1, grid 0.5..2 x 4, -1.5..1.5 x 7; values
    // archived from a quadrature-verified run
    let dir = tempdir().unwrap();
    let sig = dir.path().join("sig.csv");
    let plane_path = dir.path().join("plane.csv");
    run(cli(&[
        "gen", "chirp", "--n", "128", "--t-min", "-6", "--t-max", "6", "--out",
        sig.to_str().unwrap(),
    ]))
    .unwrap();
    run(cli(&[
        "transform", "--in", sig.to_str().unwrap(), "--wavelet", "mexican", "--alpha", "0.5",
        "--rho", "1.0", "--grid", "0.5,2.0,4,-1.5,1.5,7", "--out",
        plane_path.to_str().unwrap(),
    ]))
    .unwrap();
    let plane = csv_io::read_plane(&plane_path).unwrap();
    let golden = [
        ((0usize, 0usize), Complex64::new(-8.0600605572942130e-2, -3.8153213559371485e-1)),
        ((1, 6), Complex64::new(-5.2617356355072964e-1, 5.8062947465247827e-1)),
        ((3, 6), Complex64::new(6.6286244914880249e-2, 1.8603605728651190e-1)),
    ];
    for ((j, k), expected) in golden {
        let got = plane.value(j, k);
        assert!(
            (got - expected).norm() <= 1e-12,
            "plane({j},{k}) = {got}, expected {expected}"
        );
    }
}

#[test]
fn verify_specfun_passes_and_writes_report() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("report.json");
    run(cli(&["verify", "specfun", "--out", out.to_str().unwrap()])).unwrap();
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["check"], "specfun");
    assert_eq!(doc["pass"], true);
    assert!(doc["quadrature_evaluations"].is_u64());
}

#[test]
fn verify_malformed_config_is_exit_class_two() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "quad_tol = banana\n").unwrap();
    let err = run(cli(&[
        "verify", "specfun", "--config", cfg.to_str().unwrap(),
    ]))
    .unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn basicfn_emits_kernel_samples() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("kernel.json");
    run(cli(&[
        "basicfn", "--wavelet", "morlet:5.0", "--alpha", "0.6666666666666666", "--rho", "1.0",
        "--tol", "1e-5", "--point", "0.5,0.2,-0.3", "--out", out.to_str().unwrap(),
    ]))
    .unwrap();
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let p = &doc["points"][0];
    // value pinned by two independent reductions of the same kernel
    let got = Complex64::new(p["re"].as_f64().unwrap(), p["im"].as_f64().unwrap());
    let expected = Complex64::new(-0.004334875202, 0.004015766354);
    assert!(
        (got - expected).norm() <= 1e-4 * expected.norm(),
        "kernel sample {got} vs {expected}"
    );
}

#[test]
fn convolve_small_pipeline() {
    let dir = tempdir().unwrap();
    let sig = dir.path().join("g.csv");
    let out = dir.path().join("conv.csv");
    run(cli(&[
        "gen", "gaussian", "--n", "9", "--t-min", "-1.6", "--t-max", "1.6", "--width",
        "0.7071067811865476", "--out", sig.to_str().unwrap(),
    ]))
    .unwrap();
    // the output grid must stay off the sample lattice: the kernel is
    // singular where all three arguments coincide
    run(cli(&[
        "convolve", "--in1", sig.to_str().unwrap(), "--in2", sig.to_str().unwrap(),
        "--wavelet", "morlet:5.0", "--alpha", "0.5", "--rho", "0.5", "--tol", "1e-4",
        "--u-min", "-2.13", "--u-max", "2.07", "--n", "5", "--out", out.to_str().unwrap(),
    ]))
    .unwrap();
    let conv = csv_io::read_signal(&out).unwrap();
    assert_eq!(conv.len(), 5);
    assert!(conv.samples.iter().all(|z| z.norm().is_finite()));
    assert!(conv.samples.iter().any(|z| z.norm() > 1e-6));
}
