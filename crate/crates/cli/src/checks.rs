//! Implementations of the `verify` subcommands.

use crate::config::VerifyConfig;
use crate::report::{CheckResult, VerificationReport};
use crate::CliError;
use frwtk_core::bounds::{
    integrated_bound_scan, pointwise_bound_sweep, young_bound_check, BoundCase, IntegratedAxis,
};
use frwtk_core::convo::{BasicFunction, ConvolveOptions};
use frwtk_core::specfun::{gamma, hyp1f1, hyp1f1_raw_series};
use frwtk_core::{
    classical_cwt, forward, forward_direct, forward_via_frft, inverse, parseval_residual, quad,
    AnalyticWavelet, SampledSignal, ScaleShiftGrid, TransformParams, UniformGrid, WaveletTriple,
};
use num_complex::Complex64;
use serde_json::json;
use std::time::Instant;

/// Gaussian-windowed chirp; carriers are kept high enough that the band stays
/// positive even after the fractional chirp premultiplication adds rate one.
fn gaussian_chirp(n: usize, half: f64, carrier: f64, rate: f64) -> Result<SampledSignal, CliError> {
    let grid = UniformGrid::spanning(-half, half, n)?;
    Ok(SampledSignal::from_fn(grid, |t| {
        Complex64::new(0.0, carrier * t + 0.5 * rate * t * t).exp() * (-t * t / 4.0).exp()
    })?)
}

fn timed<F: FnOnce() -> Result<Vec<CheckResult>, CliError>>(
    check: &str,
    parameters: serde_json::Value,
    body: F,
) -> Result<VerificationReport, CliError> {
    let evals0 = quad::total_evaluations();
    let start = Instant::now();
    let results = body()?;
    Ok(VerificationReport::new(
        check,
        parameters,
        results,
        start.elapsed().as_secs_f64(),
        quad::total_evaluations() - evals0,
    ))
}

pub fn check_parseval(cfg: &VerifyConfig) -> Result<VerificationReport, CliError> {
    let params_json = json!({
        "wavelet": "mexican", "alphas": [0.5, 1.0], "rho": cfg.rho,
        "grid": [cfg.parseval_a_min, cfg.parseval_a_max, cfg.parseval_n_a,
                 -cfg.parseval_b_half, cfg.parseval_b_half, cfg.parseval_n_b],
        "signal_n": cfg.parseval_signal_n,
    });
    let cfg = cfg.clone();
    timed("parseval", params_json, move || {
        let phi = AnalyticWavelet::MexicanHat;
        let grid = ScaleShiftGrid::log_scales_uniform_shifts(
            cfg.parseval_a_min,
            cfg.parseval_a_max,
            cfg.parseval_n_a,
            -cfg.parseval_b_half,
            cfg.parseval_b_half,
            cfg.parseval_n_b,
        )?;
        let h = gaussian_chirp(cfg.parseval_signal_n, 8.0, 3.5, 0.1)?;
        let g = gaussian_chirp(cfg.parseval_signal_n, 8.0, 3.0, -0.1)?;
        let mut results = Vec::new();
        for alpha in [0.5, 1.0] {
            let p = TransformParams::new(alpha, cfg.rho, cfg.quad_tol)?;
            let same = parseval_residual(&h, &h, &phi, &p, &grid)?;
            results.push(CheckResult::at_most(
                format!("rel_err_same_signal_alpha_{alpha}"),
                same.rel_err,
                cfg.parseval_rel_err_max,
            ));
            let cross = parseval_residual(&h, &g, &phi, &p, &grid)?;
            results.push(CheckResult::at_most(
                format!("rel_err_distinct_chirps_alpha_{alpha}"),
                cross.rel_err,
                cfg.parseval_rel_err_max,
            ));
        }
        Ok(results)
    })
}

pub fn check_inversion(cfg: &VerifyConfig) -> Result<VerificationReport, CliError> {
    let params_json = json!({
        "wavelet": "mexican", "alphas": [0.5, 1.0], "rho": cfg.rho,
        "grid": [cfg.inversion_a_min, cfg.inversion_a_max, cfg.inversion_n_a,
                 -cfg.inversion_b_half, cfg.inversion_b_half, cfg.inversion_n_b],
    });
    let cfg = cfg.clone();
    timed("inversion", params_json, move || {
        let phi = AnalyticWavelet::MexicanHat;
        let h = gaussian_chirp(256, 8.0, 3.5, 0.1)?;
        let mut results = Vec::new();
        for alpha in [0.5, 1.0] {
            let p = TransformParams::new(alpha, cfg.rho, cfg.quad_tol)?;
            let mut errs = Vec::new();
            for double in [1usize, 2] {
                let grid = ScaleShiftGrid::log_scales_uniform_shifts(
                    cfg.inversion_a_min,
                    cfg.inversion_a_max,
                    cfg.inversion_n_a * double,
                    -cfg.inversion_b_half,
                    cfg.inversion_b_half,
                    cfg.inversion_n_b * double,
                )?;
                let plane = forward(&h, &phi, &p, &grid)?;
                let recon = inverse(&plane, &phi, &p, &h.grid())?;
                errs.push(recon.rel_l2_distance(&h)?);
            }
            results.push(CheckResult::at_most(
                format!("round_trip_rel_l2_alpha_{alpha}"),
                errs[0],
                cfg.inversion_rel_err_max,
            ));
            results.push(CheckResult::boolean(
                format!("denser_grid_improves_alpha_{alpha}"),
                errs[1] < errs[0],
            ));
        }
        Ok(results)
    })
}

pub fn check_frft_route(cfg: &VerifyConfig) -> Result<VerificationReport, CliError> {
    let params_json = json!({
        "wavelet": "mexican", "alpha": 0.5, "rho": cfg.rho, "signal_n": 256,
    });
    let cfg = cfg.clone();
    timed("frft-route", params_json, move || {
        let phi = AnalyticWavelet::MexicanHat;
        let h = gaussian_chirp(256, 8.0, 3.5, 0.1)?;
        let grid = ScaleShiftGrid::log_scales_uniform_shifts(0.5, 2.0, 8, -2.0, 2.0, 32)?;

        let p_half = TransformParams::new(0.5, cfg.rho, cfg.quad_tol)?;
        let fast = forward(&h, &phi, &p_half, &grid)?;
        let direct = forward_direct(&h, &phi, &p_half, &grid)?;
        let spectral = forward_via_frft(&h, &phi, &p_half, &grid)?;
        let mut results = vec![
            CheckResult::at_most(
                "direct_vs_factored_max_abs_rel",
                fast.max_abs_diff(&direct) / fast.max_abs().max(1e-300),
                cfg.frft_route_factored_max,
            ),
            CheckResult::at_most(
                "spectral_vs_forward_rel_l2",
                spectral.rel_l2_distance(&fast),
                cfg.frft_route_spectral_max,
            ),
        ];

        let p_one = TransformParams::new(1.0, cfg.rho, cfg.quad_tol)?;
        let w_one = forward(&h, &phi, &p_one, &grid)?;
        let classical = classical_cwt(&h, &phi, cfg.rho, &grid)?;
        results.push(CheckResult::at_most(
            "alpha_one_equals_classical_max_abs",
            w_one.max_abs_diff(&classical),
            1e-12 * classical.max_abs().max(1.0),
        ));
        Ok(results)
    })
}

pub fn check_convolution_theorem(cfg: &VerifyConfig) -> Result<VerificationReport, CliError> {
    let params_json = json!({
        "triple": format!("morlet:{}", cfg.omega0), "alpha": 0.5, "rho": 0.5,
        "quad_tol": cfg.conv_quad_tol, "signal_n": cfg.conv_signal_n, "u_n": cfg.conv_u_n,
    });
    let cfg = cfg.clone();
    timed("convolution-theorem", params_json, move || {
        let triple = WaveletTriple::uniform(AnalyticWavelet::morlet(cfg.omega0)?);
        let p = TransformParams::new(0.5, 0.5, cfg.conv_quad_tol)?;
        let engine = BasicFunction::new(triple, p)?;
        let grid = UniformGrid::spanning(-3.0, 3.0, cfg.conv_signal_n)?;
        let h = SampledSignal::from_fn(grid, |t| Complex64::new((-t * t).exp(), 0.0))?;
        let plane = ScaleShiftGrid::log_scales_uniform_shifts(0.9, 1.8, 4, -1.0, 1.0, 8)?;
        let opts = ConvolveOptions {
            max_samples: 50_000_000,
            coeff_floor: cfg.conv_coeff_floor,
            points_per_cycle: 4.0,
        };
        let residual = engine.convolution_theorem_residual(&h, &h, &plane, &opts)?;
        Ok(vec![CheckResult::at_most(
            "transform_domain_product_residual",
            residual,
            cfg.conv_residual_max,
        )])
    })
}

pub fn check_bounds(cfg: &VerifyConfig) -> Result<VerificationReport, CliError> {
    let params_json = json!({
        "triple": format!("morlet:{}", cfg.omega0),
        "pointwise": {"rho": 0.5, "p": cfg.bounds_exponent, "points": cfg.bounds_points, "seed": cfg.seed},
        "scan_separations": [0.5, 1.0, 2.0, 4.0, 8.0],
    });
    let cfg = cfg.clone();
    timed("bounds", params_json, move || {
        let mother = AnalyticWavelet::morlet(cfg.omega0)?;
        let engine = BasicFunction::new(
            WaveletTriple::uniform(mother.clone()),
            TransformParams::new(0.5, 0.5, 1e-5)?,
        )?;
        let mut results = Vec::new();

        let sweep = pointwise_bound_sweep(&engine, cfg.bounds_exponent, cfg.bounds_points, cfg.seed)?;
        let violations = sweep.iter().filter(|r| !r.satisfied).count();
        results.push(CheckResult::at_most("pointwise_violations", violations as f64, 0.0));

        let separations = [0.5, 1.0, 2.0, 4.0, 8.0];
        for (axis, name) in [
            (IntegratedAxis::W, "scan_w"),
            (IntegratedAxis::U, "scan_u"),
            (IntegratedAxis::V, "scan_v"),
        ] {
            let scan = integrated_bound_scan(
                &engine,
                axis,
                BoundCase::FractionalRho { p: 4.0 / 3.0, q: 4.0 / 3.0 },
                &separations,
            )?;
            let finite = scan.iter().all(|p| p.product.is_finite());
            let monotone_growth = scan.windows(2).all(|w| w[1].product > w[0].product);
            results.push(CheckResult::boolean(format!("{name}_products_finite"), finite));
            results.push(CheckResult::boolean(
                format!("{name}_no_monotone_growth"),
                !monotone_growth,
            ));
        }

        let engine_w = BasicFunction::new(
            WaveletTriple::uniform(mother),
            TransformParams::new(0.5, 1.5, 1e-4)?,
        )?;
        let scan_ii = integrated_bound_scan(
            &engine_w,
            IntegratedAxis::W,
            BoundCase::WeightedLOne,
            &[1.0, 2.0, 4.0],
        )?;
        results.push(CheckResult::boolean(
            "weighted_case_printed_rhs_satisfied",
            scan_ii.iter().all(|p| p.satisfied.unwrap_or(false)),
        ));

        let grid = UniformGrid::spanning(-1.5, 1.5, 9)?;
        let h = SampledSignal::from_fn(grid, |t| Complex64::new((-t * t).exp(), 0.0))?;
        let young = young_bound_check(
            &engine,
            &h,
            &h,
            4.0 / 3.0,
            4.0 / 3.0,
            4.0 / 3.0,
            4.0 / 3.0,
            &ConvolveOptions::default(),
        )?;
        results.push(CheckResult::boolean(
            "young_ratio_finite",
            young.satisfied && young.ratio.map(|r| r.is_finite()).unwrap_or(false),
        ));
        Ok(results)
    })
}

pub fn check_specfun(cfg: &VerifyConfig) -> Result<VerificationReport, CliError> {
    let params_json = json!({
        "gamma_recurrence_range": [0.0, 10.0],
        "hyp1f1_range": [-10.0, 10.0],
    });
    let cfg = cfg.clone();
    timed("specfun", params_json, move || {
        let mut worst_gamma = 0.0f64;
        let mut x = 0.05;
        while x < 10.0 {
            let lhs = gamma(x + 1.0)?;
            let rhs = x * gamma(x)?;
            worst_gamma = worst_gamma.max((lhs - rhs).abs() / rhs.abs());
            x += 0.0173;
        }

        let mut worst_series = 0.0f64;
        for &(a, b) in &[(1.25, 0.5), (1.5, 0.5), (2.0, 0.5), (1.75, 1.5), (2.25, 1.5)] {
            let mut xv = -10.0;
            while xv <= 10.0 {
                let fast = hyp1f1(a, b, xv)?;
                let oracle = hyp1f1_raw_series(a, b, xv)?;
                worst_series =
                    worst_series.max((fast - oracle).abs() / oracle.abs().max(1.0));
                xv += 0.25;
            }
        }

        let mut worst_ident = 0.0f64;
        let mut xv: f64 = -6.0;
        while xv <= 6.0 {
            if xv.abs() > 1e-9 {
                let e1 = (hyp1f1(1.0, 1.0, xv)? - xv.exp()).abs() / xv.exp();
                let expect = (xv.exp() - 1.0) / xv;
                let e2 = (hyp1f1(1.0, 2.0, xv)? - expect).abs() / expect.abs();
                worst_ident = worst_ident.max(e1).max(e2);
            }
            xv += 0.37;
        }

        Ok(vec![
            CheckResult::at_most("gamma_recurrence_rel", worst_gamma, cfg.specfun_gamma_tol),
            CheckResult::at_most("hyp1f1_vs_raw_series", worst_series, cfg.specfun_series_tol),
            CheckResult::at_most("hyp1f1_identities", worst_ident, cfg.specfun_identity_tol),
        ])
    })
}
