//! Acceptance suite: one test per release gate, each printing a PASS/FAIL line
//! with the measured quantity (run with `--nocapture` to see them).
//!
//! Gates 5 and 6 encode exact transform-domain identities of the convolution
//! structure. Both fail at a structural floor that no quadrature accuracy can
//! cross: the plane functions they compare against (a product of two
//! conjugated daughters, and a pointwise product of two transforms) lie
//! outside the reproducing-kernel range of the analysis operator, so the
//! analysis of the synthesized kernel returns their projection instead. The
//! assertions are kept as stated; the printed diagnostics quantify the floor.

use frwtk_core::bounds::{
    integrated_bound_scan, pointwise_bound_sweep, BoundCase, IntegratedAxis,
};
use frwtk_core::convo::{
    closed_form_report, BasicFunction, ClosedFormKind, ConvolveOptions,
};
use frwtk_core::specfun::{gamma, hyp1f1, hyp1f1_raw_series};
use frwtk_core::{
    admissibility_constant, classical_cwt, forward, forward_direct, forward_via_frft, inverse,
    parseval_residual, AnalyticWavelet, Error, SampledSignal, ScaleShiftGrid, TransformParams,
    UniformGrid, WaveletTriple,
};
use num_complex::Complex64;
use std::time::Instant;

fn gaussian_chirp(n: usize, half: f64) -> SampledSignal {
    // carrier high enough that the instantaneous band stays positive even
    // after the fractional chirp premultiplication adds a rate of one
    let grid = UniformGrid::spanning(-half, half, n).unwrap();
    SampledSignal::from_fn(grid, |t| {
        Complex64::new(0.0, 3.5 * t + 0.05 * t * t).exp() * (-t * t / 4.0).exp()
    })
    .unwrap()
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[{}] criterion {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

#[test]
fn criterion_01_alpha_one_reduces_to_classical_cwt() {
    let start = Instant::now();
    let h = gaussian_chirp(256, 8.0);
    let phi = AnalyticWavelet::MexicanHat;
    let params = TransformParams::new(1.0, 1.0, 1e-8).unwrap();
    let grid = ScaleShiftGrid::log_scales_uniform_shifts(0.25, 4.0, 16, -6.0, 6.0, 64).unwrap();

    let plane = forward(&h, &phi, &params, &grid).unwrap();
    let plane_direct = forward_direct(&h, &phi, &params, &grid).unwrap();
    let classical = classical_cwt(&h, &phi, 1.0, &grid).unwrap();

    let diff = plane.max_abs_diff(&classical).max(plane_direct.max_abs_diff(&classical));
    let elapsed = start.elapsed().as_secs_f64();
    let pass = diff <= 1e-12 && elapsed < 10.0;
    report(
        "1 (alpha=1 reduction)",
        pass,
        &format!("max |W - classical CWT| = {diff:.3e} (<= 1e-12), runtime {elapsed:.2}s (< 10s)"),
    );
    assert!(diff <= 1e-12, "max abs difference {diff}");
    assert!(elapsed < 10.0, "runtime {elapsed}");
}

#[test]
fn criterion_02_route_equivalence() {
    let h = gaussian_chirp(256, 8.0);
    let phi = AnalyticWavelet::MexicanHat;
    let params = TransformParams::new(0.5, 1.0, 1e-8).unwrap();
    let grid = ScaleShiftGrid::log_scales_uniform_shifts(0.5, 2.0, 8, -2.0, 2.0, 32).unwrap();

    let factored = forward(&h, &phi, &params, &grid).unwrap();
    let direct = forward_direct(&h, &phi, &params, &grid).unwrap();
    let spectral = forward_via_frft(&h, &phi, &params, &grid).unwrap();

    let path_diff = factored.max_abs_diff(&direct) / factored.max_abs().max(1e-300);
    let spectral_rel = spectral.rel_l2_distance(&factored);
    let pass = path_diff <= 1e-10 && spectral_rel <= 1e-4;
    report(
        "2 (route equivalence)",
        pass,
        &format!(
            "direct vs factored {path_diff:.3e} (<= 1e-10), spectral route rel L2 {spectral_rel:.3e} (<= 1e-4)"
        ),
    );
    assert!(path_diff <= 1e-10, "direct vs factored {path_diff}");
    assert!(spectral_rel <= 1e-4, "spectral route {spectral_rel}");
}

#[test]
fn criterion_03_parseval() {
    let start = Instant::now();
    let phi = AnalyticWavelet::MexicanHat;
    let grid = ScaleShiftGrid::log_scales_uniform_shifts(0.08, 16.0, 48, -28.0, 28.0, 800).unwrap();
    let h = gaussian_chirp(384, 8.0);
    let g_grid = h.grid();
    // second chirp: different carrier and envelope, same positive-band rule
    let g = SampledSignal::from_fn(g_grid, |t| {
        Complex64::new(0.0, 3.0 * t - 0.05 * t * t).exp() * (-t * t / 5.0).exp()
    })
    .unwrap();

    let mut pass = true;
    let mut details = Vec::new();
    for alpha in [0.5, 1.0] {
        let params = TransformParams::new(alpha, 1.0, 1e-8).unwrap();
        let same = parseval_residual(&h, &h, &phi, &params, &grid).unwrap();
        let cross = parseval_residual(&h, &g, &phi, &params, &grid).unwrap();
        pass &= same.rel_err <= 0.02 && cross.rel_err <= 0.02;
        details.push(format!(
            "alpha={alpha}: h=g {:.4}, h!=g {:.4}",
            same.rel_err, cross.rel_err
        ));
        assert!(same.rel_err <= 0.02, "alpha {alpha} same-signal rel err {}", same.rel_err);
        assert!(cross.rel_err <= 0.02, "alpha {alpha} cross rel err {}", cross.rel_err);
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 60.0;
    report(
        "3 (Parseval)",
        pass,
        &format!("rel errs (<= 0.02): {}; runtime {elapsed:.1}s (< 60s)", details.join("; ")),
    );
    assert!(elapsed < 60.0, "runtime {elapsed}");
}

#[test]
fn criterion_04_inversion_round_trip() {
    let h = gaussian_chirp(256, 8.0);
    let phi = AnalyticWavelet::MexicanHat;
    let mut pass = true;
    let mut details = Vec::new();
    for alpha in [0.5, 1.0] {
        let params = TransformParams::new(alpha, 1.0, 1e-8).unwrap();
        let mut errs = Vec::new();
        for density in [1usize, 2] {
            // the base grid is deliberately coarse so that doubling the
            // density, rather than widening the ranges, drives the error
            let grid = ScaleShiftGrid::log_scales_uniform_shifts(
                0.1,
                16.0,
                18 * density,
                -24.0,
                24.0,
                260 * density,
            )
            .unwrap();
            let plane = forward(&h, &phi, &params, &grid).unwrap();
            let recon = inverse(&plane, &phi, &params, &h.grid()).unwrap();
            errs.push(recon.rel_l2_distance(&h).unwrap());
        }
        pass &= errs[0] <= 0.05 && errs[1] < errs[0];
        details.push(format!("alpha={alpha}: base {:.4}, doubled {:.4}", errs[0], errs[1]));
        assert!(errs[0] <= 0.05, "alpha {alpha} round trip {}", errs[0]);
        assert!(errs[1] < errs[0], "alpha {alpha} no improvement: {errs:?}");
    }
    report(
        "4 (inversion)",
        pass,
        &format!("round-trip rel L2 (<= 0.05, decreasing): {}", details.join("; ")),
    );
}

#[test]
fn criterion_05_convolution_theorem() {
    // Structurally unattainable as stated: the product of two transforms is
    // not itself a transform, so analyzing the synthesized convolution returns
    // its projection. Continuum floor measured at ~0.12 for this
    // configuration; the quadrature scan below still isolates the
    // tolerance-driven part, which must decrease.
    let start = Instant::now();
    let grid = UniformGrid::spanning(-3.0, 3.0, 16).unwrap();
    let h = SampledSignal::from_fn(grid, |t| Complex64::new((-t * t).exp(), 0.0)).unwrap();
    let plane = ScaleShiftGrid::log_scales_uniform_shifts(0.95, 1.7, 6, -1.2, 1.2, 12).unwrap();
    // grid density and coefficient floor sized for the single-core budget;
    // both induce biases constant across the tolerance scan, far below the
    // structural floor this gate measures
    let opts =
        ConvolveOptions { max_samples: 50_000_000, coeff_floor: 2e-3, points_per_cycle: 4.0 };

    let mut residuals = Vec::new();
    for tol in [1e-4, 1e-5, 1e-6] {
        let triple = WaveletTriple::uniform(AnalyticWavelet::morlet(5.0).unwrap());
        let params = TransformParams::new(0.5, 0.5, tol).unwrap();
        let engine = BasicFunction::new(triple, params).unwrap();
        let r = engine.convolution_theorem_residual(&h, &h, &plane, &opts).unwrap();
        residuals.push(r);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let monotone = residuals[0] >= residuals[1] && residuals[1] >= residuals[2];
    let pass = residuals[2] <= 1e-2 && monotone && elapsed < 600.0;
    report(
        "5 (convolution theorem)",
        pass,
        &format!(
            "residuals over tol 1e-4/1e-5/1e-6: {:.4}/{:.4}/{:.4} (want <= 1e-2, decreasing), runtime {elapsed:.0}s (< 600s)",
            residuals[0], residuals[1], residuals[2]
        ),
    );
    assert!(elapsed < 600.0, "runtime {elapsed}");
    assert!(
        monotone,
        "residuals do not decrease with tolerance: {residuals:?}"
    );
    assert!(
        residuals[2] <= 1e-2,
        "residual {} exceeds 1e-2; the identity only holds after projection onto the \
         transform range (measured structural floor, not a quadrature artifact)",
        residuals[2]
    );
}

#[test]
fn criterion_06_defining_property() {
    // Same structural obstruction as criterion 5: no function has the product
    // of two conjugated daughters as its transform, so the kernel built by
    // synthesis reproduces only the projection of that product.
    let triple = WaveletTriple::uniform(AnalyticWavelet::morlet(5.0).unwrap());
    let params = TransformParams::new(0.5, 1.0, 1e-6).unwrap();
    let engine = BasicFunction::new(triple, params).unwrap();
    let u_grid = UniformGrid::spanning(-10.0, 10.0, 401).unwrap();
    let plane = ScaleShiftGrid::log_scales_uniform_shifts(0.8, 2.0, 8, -1.5, 1.5, 16).unwrap();
    let residual = engine
        .defining_property_residual(&u_grid, 0.2, -0.3, &plane)
        .unwrap();
    let pass = residual <= 5e-2;
    report(
        "6 (defining property)",
        pass,
        &format!("sup relative residual {residual:.4} (want <= 5e-2)"),
    );
    assert!(
        residual <= 5e-2,
        "residual {residual} exceeds 5e-2; the defining identity admits no exact solution \
         (measured structural floor, not a quadrature artifact)"
    );
}

#[test]
fn criterion_07_pointwise_bound_sweep() {
    let triple = WaveletTriple::uniform(AnalyticWavelet::morlet(5.0).unwrap());
    let params = TransformParams::new(0.5, 0.5, 1e-5).unwrap();
    let engine = BasicFunction::new(triple, params).unwrap();
    let reports = pointwise_bound_sweep(&engine, 2.0, 100, 20260810).unwrap();
    let violations = reports.iter().filter(|r| !r.satisfied).count();
    report(
        "7 (pointwise bound)",
        violations == 0,
        &format!("{violations} violations in {} random triples (want 0)", reports.len()),
    );
    assert_eq!(violations, 0, "pointwise bound violated");
}

#[test]
fn criterion_08_integrated_bound_scans() {
    let separations = [0.5, 1.0, 2.0, 4.0, 8.0];
    let mut pass = true;
    let mut details = Vec::new();

    let triple = WaveletTriple::uniform(AnalyticWavelet::morlet(5.0).unwrap());
    let engine = BasicFunction::new(triple.clone(), TransformParams::new(0.5, 0.5, 1e-4).unwrap())
        .unwrap();
    for (axis, label) in [
        (IntegratedAxis::W, "w"),
        (IntegratedAxis::U, "u"),
        (IntegratedAxis::V, "v"),
    ] {
        let scan = integrated_bound_scan(
            &engine,
            axis,
            BoundCase::FractionalRho { p: 4.0 / 3.0, q: 4.0 / 3.0 },
            &separations,
        )
        .unwrap();
        let finite = scan.iter().all(|p| p.product.is_finite());
        let monotone_growth = scan.windows(2).all(|w| w[1].product > w[0].product);
        let products: Vec<String> = scan.iter().map(|p| format!("{:.4}", p.product)).collect();
        pass &= finite && !monotone_growth;
        details.push(format!("axis {label}: [{}]", products.join(", ")));
        assert!(finite, "axis {label}: non-finite product");
        assert!(!monotone_growth, "axis {label}: products grow monotonically");
    }

    // weighted-hypothesis case with its fully printed right-hand side
    let engine_w =
        BasicFunction::new(triple, TransformParams::new(0.5, 1.5, 1e-4).unwrap()).unwrap();
    let scan = integrated_bound_scan(&engine_w, IntegratedAxis::W, BoundCase::WeightedLOne, &separations)
        .unwrap();
    let all_finite = scan.iter().all(|p| p.product.is_finite());
    let all_satisfied = scan.iter().all(|p| p.satisfied.unwrap_or(false));
    pass &= all_finite && all_satisfied;
    details.push(format!(
        "weighted case rho=1.5: finite {all_finite}, printed rhs satisfied {all_satisfied}"
    ));
    assert!(all_finite && all_satisfied);

    report("8 (integrated bound scans)", pass, &details.join("; "));
}

#[test]
fn criterion_09_special_functions() {
    // gamma recurrence on (0, 10)
    let mut worst_gamma = 0.0f64;
    let mut x = 0.05;
    while x < 10.0 {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        worst_gamma = worst_gamma.max((lhs - rhs).abs() / rhs.abs());
        x += 0.0173;
    }

    // series oracle across [-10, 10] for parameter pairs the kernel reductions use
    let mut worst_series = 0.0f64;
    for &(a, b) in &[(1.25, 0.5), (1.5, 0.5), (2.0, 0.5), (1.75, 1.5), (2.25, 1.5)] {
        let mut xv = -10.0;
        while xv <= 10.0 {
            let fast = hyp1f1(a, b, xv).unwrap();
            let oracle = hyp1f1_raw_series(a, b, xv).unwrap();
            worst_series = worst_series.max((fast - oracle).abs() / oracle.abs().max(1.0));
            xv += 0.25;
        }
    }

    // collapse identities
    let mut worst_ident = 0.0f64;
    let mut xv: f64 = -6.0;
    while xv <= 6.0 {
        if xv.abs() > 1e-9 {
            let e1 = (hyp1f1(1.0, 1.0, xv).unwrap() - xv.exp()).abs() / xv.exp();
            let expect = (xv.exp() - 1.0) / xv;
            let e2 = (hyp1f1(1.0, 2.0, xv).unwrap() - expect).abs() / expect.abs();
            worst_ident = worst_ident.max(e1).max(e2);
        }
        xv += 0.37;
    }

    let pass = worst_gamma <= 1e-12 && worst_series <= 1e-8 && worst_ident <= 1e-10;
    report(
        "9 (special functions)",
        pass,
        &format!(
            "gamma recurrence {worst_gamma:.2e} (<= 1e-12), series oracle {worst_series:.2e} (<= 1e-8), identities {worst_ident:.2e} (<= 1e-10)"
        ),
    );
    assert!(worst_gamma <= 1e-12);
    assert!(worst_series <= 1e-8);
    assert!(worst_ident <= 1e-10);
}

#[test]
fn criterion_10_admissibility() {
    let c_mex = admissibility_constant(&AnalyticWavelet::MexicanHat, 1e-9).unwrap();
    let mex_ok = (c_mex - 1.0).abs() <= 1e-6;

    let grid = UniformGrid::spanning(-10.0, 10.0, 2001).unwrap();
    let gauss = SampledSignal::from_fn(grid, |t| Complex64::new((-t * t / 2.0).exp(), 0.0))
        .unwrap();
    let gauss_mother = AnalyticWavelet::tabulated(gauss).unwrap();
    let rejected = matches!(
        admissibility_constant(&gauss_mother, 1e-8),
        Err(Error::NotAdmissible(_))
    );

    let pass = mex_ok && rejected;
    report(
        "10 (admissibility)",
        pass,
        &format!("mexican-hat constant {c_mex:.8} (want 1 +- 1e-6), gaussian mother rejected: {rejected}"),
    );
    assert!(mex_ok, "mexican hat constant {c_mex}");
    assert!(rejected, "gaussian mother must be rejected");
}

#[test]
fn criterion_11_closed_form_cross_checks() {
    let params_morlet = TransformParams::new(2.0 / 3.0, 1.0, 1e-5).unwrap();
    let probes = [
        (0.5, 0.2, -0.3),
        (0.9, -0.5, 0.1),
        (1.3, 0.4, -0.8),
        (-0.6, 1.0, 0.3),
        (0.2, -1.1, 0.7),
        (1.7, 0.9, -0.2),
        (-1.2, -0.4, 0.6),
        (0.8, 1.5, -1.0),
        (-0.3, 0.6, 1.4),
        (2.1, -0.7, 0.5),
    ];
    let morlet = closed_form_report(ClosedFormKind::Morlet { omega0: 5.0 }, &params_morlet, &probes)
        .unwrap();

    let params_mex = TransformParams::new(0.5, 0.8, 1e-5).unwrap();
    let mexican = closed_form_report(ClosedFormKind::MexicanHat, &params_mex, &probes).unwrap();

    // acceptance allows either direct agreement or a machine-readable
    // discrepancy report; the corrected reductions agree, the printed ones are
    // flagged discrepant, and both paths are serialized
    let morlet_ok = morlet.max_corrected_rel_err <= 1e-3 && morlet.printed_form_discrepant;
    let mexican_ok = mexican.max_corrected_rel_err <= 1e-3 && mexican.printed_form_discrepant;
    let serialized = serde_json::to_string(&morlet).is_ok() && serde_json::to_string(&mexican).is_ok();

    let pass = morlet_ok && mexican_ok && serialized;
    report(
        "11 (closed-form cross-checks)",
        pass,
        &format!(
            "corrected rel err: morlet {:.2e}, mexican {:.2e} (<= 1e-3); printed-form discrepancy flagged: {} / {} (printed rel err {:.2e} / {:.2e})",
            morlet.max_corrected_rel_err,
            mexican.max_corrected_rel_err,
            morlet.printed_form_discrepant,
            mexican.printed_form_discrepant,
            morlet.max_printed_rel_err,
            mexican.max_printed_rel_err,
        ),
    );
    assert!(morlet_ok, "morlet report: {morlet:?}");
    assert!(mexican_ok, "mexican report: {mexican:?}");
    assert!(serialized);
}
