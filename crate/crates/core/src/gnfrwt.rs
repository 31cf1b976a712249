//! The fractional wavelet transform: daughter wavelets, the forward transform
//! (direct, chirp-factored, and spectral routes), admissibility and
//! reconstruction constants, inversion, and the Parseval check.
//!
//! Scales run over (0, inf) only. Plane integrals use trapezoid weights in the
//! shift and, after substituting `a = e^s`, log-trapezoid weights in the scale,
//! so the measure `a^{2 rho - 3} db da` becomes `a^{2 rho - 2} ds db`.

use crate::error::{Error, Result};
use crate::frft::{frft, KernelAngle};
use crate::quad::{self, Domain1D};
use crate::signal::{
    AnalyticWavelet, CoefficientPlane, SampledSignal, ScaleShiftGrid, TransformParams,
    UniformGrid,
};
use num_complex::Complex64;
use rayon::prelude::*;

/// Chirped, scaled, shifted copy of the mother wavelet:
/// `e^{(-i/2)(t^2 - b^2) cot theta} a^{-rho} phi((t - b)/a)`.
pub fn daughter_wavelet(
    phi: &AnalyticWavelet,
    params: &TransformParams,
    a: f64,
    b: f64,
    t: f64,
) -> Complex64 {
    debug_assert!(a > 0.0);
    let cot = params.cot_theta();
    let chirp = Complex64::new(0.0, -0.5 * (t * t - b * b) * cot).exp();
    chirp * a.powf(-params.rho) * phi.eval((t - b) / a)
}

/// Classical (chirp-free) transform `int h(t) a^{-rho} conj(phi((t-b)/a)) dt`
/// by trapezoidal quadrature over the signal grid, windowed to the wavelet
/// support.
pub fn classical_cwt(
    h: &SampledSignal,
    phi: &AnalyticWavelet,
    rho: f64,
    grid: &ScaleShiftGrid,
) -> Result<CoefficientPlane> {
    let support = phi.support_radius();
    let nb = grid.n_shifts();
    let values: Vec<Complex64> = grid
        .scales()
        .par_iter()
        .flat_map_iter(|&a| {
            let amp = a.powf(-rho);
            grid.shifts().iter().map(move |&b| {
                let (k_lo, k_hi) = window(h, b - support * a, b + support * a);
                let mut acc = Complex64::new(0.0, 0.0);
                for k in k_lo..k_hi {
                    let t = h.time(k);
                    acc += h.samples[k] * phi.eval((t - b) / a).conj() * h.weight(k);
                }
                acc * amp
            })
        })
        .collect();
    debug_assert_eq!(values.len(), grid.n_scales() * nb);
    CoefficientPlane::new(grid.clone(), values, rho)
}

fn window(h: &SampledSignal, t_lo: f64, t_hi: f64) -> (usize, usize) {
    let lo = ((t_lo - h.t0) / h.dt).floor().max(0.0) as usize;
    let hi = (((t_hi - h.t0) / h.dt).ceil() as isize + 1).max(0) as usize;
    (lo.min(h.len()), hi.min(h.len()))
}

/// Forward transform via the chirp factorization: premultiply the signal by
/// `e^{(i/2) t^2 cot theta}`, run the classical transform, postmultiply each
/// shift column by `e^{(-i/2) b^2 cot theta}`.
pub fn forward(
    h: &SampledSignal,
    phi: &AnalyticWavelet,
    params: &TransformParams,
    grid: &ScaleShiftGrid,
) -> Result<CoefficientPlane> {
    let cot = params.cot_theta();
    let chirped = SampledSignal::new(
        h.t0,
        h.dt,
        h.samples
            .iter()
            .enumerate()
            .map(|(k, z)| {
                let t = h.time(k);
                z * Complex64::new(0.0, 0.5 * t * t * cot).exp()
            })
            .collect(),
    )?;
    let classical = classical_cwt(&chirped, phi, params.rho, grid)?;
    let nb = grid.n_shifts();
    let post: Vec<Complex64> = grid
        .shifts()
        .iter()
        .map(|&b| Complex64::new(0.0, -0.5 * b * b * cot).exp())
        .collect();
    let values: Vec<Complex64> = classical
        .values()
        .iter()
        .enumerate()
        .map(|(i, z)| z * post[i % nb])
        .collect();
    CoefficientPlane::new(grid.clone(), values, params.rho)
}

/// Forward transform evaluated directly from the daughter-wavelet definition,
/// without the chirp factorization. Kept as an independent route for
/// equivalence checks; [`forward`] is the default path.
pub fn forward_direct(
    h: &SampledSignal,
    phi: &AnalyticWavelet,
    params: &TransformParams,
    grid: &ScaleShiftGrid,
) -> Result<CoefficientPlane> {
    let support = phi.support_radius();
    let values: Vec<Complex64> = grid
        .scales()
        .par_iter()
        .flat_map_iter(|&a| {
            grid.shifts().iter().map(move |&b| {
                let (k_lo, k_hi) = window(h, b - support * a, b + support * a);
                let mut acc = Complex64::new(0.0, 0.0);
                for k in k_lo..k_hi {
                    let t = h.time(k);
                    acc += h.samples[k]
                        * daughter_wavelet(phi, params, a, b, t).conj()
                        * h.weight(k);
                }
                acc
            })
        })
        .collect();
    CoefficientPlane::new(grid.clone(), values, params.rho)
}

/// Frequency radius beyond which the wavelet's hat is numerically negligible.
fn hat_support_radius(phi: &AnalyticWavelet) -> f64 {
    match phi {
        AnalyticWavelet::Morlet { omega0 } => omega0 + 9.0,
        AnalyticWavelet::MexicanHat => 9.5,
        AnalyticWavelet::Tabulated(s) => {
            // scan out to the grid Nyquist rate for the last significant lobe
            let cap = std::f64::consts::PI / s.dt;
            let n = 2048;
            let mut peak = 0.0f64;
            let mags: Vec<f64> = (0..=n)
                .map(|i| {
                    let w = cap * i as f64 / n as f64;
                    let m = phi.fourier_hat(w).norm().max(phi.fourier_hat(-w).norm());
                    peak = peak.max(m);
                    m
                })
                .collect();
            let thresh = 1e-9 * peak;
            let last = mags.iter().rposition(|&m| m > thresh).unwrap_or(n);
            (cap * last as f64 / n as f64).max(1.0) * 1.2
        }
    }
}

/// Forward transform through the fractional spectrum:
/// `W(a,b) = sqrt(2 pi) a^{1-rho} int H(v) conj(phihat(a v csc)) conj(K_theta(v,b)) dv`.
///
/// The spectrum is evaluated once on a master grid sized from the hat support
/// at the smallest scale and the phase rates of the integrand.
pub fn forward_via_frft(
    h: &SampledSignal,
    phi: &AnalyticWavelet,
    params: &TransformParams,
    grid: &ScaleShiftGrid,
) -> Result<CoefficientPlane> {
    let kernel = KernelAngle::new(params.theta)?;
    let csc = kernel.csc;
    let cot = kernel.cot;

    let a_min = grid.scales()[0];
    let hat_radius = hat_support_radius(phi);
    let v_max = hat_radius / (a_min * csc.abs());
    let t_max = h.t0.abs().max(h.grid().end().abs());
    let b_max = grid
        .shifts()
        .iter()
        .fold(0.0f64, |m, &b| m.max(b.abs()));
    // phase rate of H(v) conj(K(v,b)): the quadratic chirps cancel, leaving
    // rates bounded by (t_max + b_max) |csc|; keep a |cot| v term as margin
    let rate = (t_max + b_max) * csc.abs() + v_max * cot.abs().min(1.0);
    let dv = (2.0 * std::f64::consts::PI / rate.max(1.0)) / 10.0;
    let n_v = ((2.0 * v_max / dv).ceil() as usize + 1).clamp(64, 60_000);
    let v_grid = UniformGrid::spanning(-v_max, v_max, n_v)?;

    let spectrum = frft(h, params.theta, &v_grid)?;
    let vs: Vec<f64> = v_grid.points().collect();
    let dvw = v_grid.step;
    let weighted: Vec<Complex64> = spectrum
        .values
        .iter()
        .enumerate()
        .map(|(m, z)| {
            let w = if m == 0 || m + 1 == n_v { 0.5 * dvw } else { dvw };
            z * w
        })
        .collect();

    let sqrt_2pi = (2.0 * std::f64::consts::PI).sqrt();
    let vs = &vs;
    let weighted = &weighted;
    let values: Vec<Complex64> = grid
        .scales()
        .par_iter()
        .flat_map_iter(|&a| {
            let hat: Vec<Complex64> = vs
                .iter()
                .map(|&v| phi.fourier_hat(a * v * csc).conj())
                .collect();
            let amp = sqrt_2pi * a.powf(1.0 - params.rho);
            grid.shifts().iter().map(move |&b| {
                let mut acc = Complex64::new(0.0, 0.0);
                for ((&v, hz), wz) in vs.iter().zip(&hat).zip(weighted) {
                    acc += wz * hz * kernel.eval(v, b).conj();
                }
                acc * amp
            })
        })
        .collect();
    CoefficientPlane::new(grid.clone(), values, params.rho)
}

const ADMISSIBILITY_DC_RATIO: f64 = 1e-6;
const ADMISSIBILITY_CUTOFF: f64 = 1e-12;

fn one_sided_admissibility(phi: &AnalyticWavelet, sign: f64, tol: f64) -> Result<f64> {
    let peak_radius = hat_support_radius(phi);
    let integrand = |w: f64| -> Complex64 {
        let m = phi.fourier_hat(sign * w).norm_sqr();
        Complex64::new(m / w, 0.0)
    };
    let r = quad::integrate_1d_seeded(
        integrand,
        Domain1D::HalfLine { from: ADMISSIBILITY_CUTOFF },
        tol,
        &[0.5, 1.0, peak_radius * 0.25, peak_radius * 0.5],
    )
    .map_err(|e| match e {
        Error::QuadNoConverge { .. } => {
            Error::NotAdmissible("admissibility integral did not converge".into())
        }
        other => other,
    })?;
    Ok(r.value.re)
}

fn check_dc_leak(phi: &AnalyticWavelet) -> Result<()> {
    let radius = hat_support_radius(phi);
    let n = 4096;
    let mut peak = 0.0f64;
    for i in 0..=n {
        let w = -radius + 2.0 * radius * i as f64 / n as f64;
        peak = peak.max(phi.fourier_hat(w).norm_sqr());
    }
    if peak == 0.0 {
        return Err(Error::NotAdmissible("wavelet has an identically zero spectrum".into()));
    }
    let dc = phi.fourier_hat(0.0).norm_sqr();
    if dc > ADMISSIBILITY_DC_RATIO * peak {
        return Err(Error::NotAdmissible(format!(
            "spectrum at zero frequency ({:.3e} of peak) makes the admissibility integral diverge",
            dc / peak
        )));
    }
    Ok(())
}

/// Admissibility constant `C_phi = int |phihat(w)|^2 / |w| dw` under the
/// unitary Fourier convention.
///
/// Wavelets whose hat does not vanish at zero frequency (relative to peak) are
/// rejected as [`Error::NotAdmissible`]; a residual leak below the rejection
/// ratio is tolerated and integrated outside |w| >= 1e-12, which perturbs the
/// value far below the returned tolerance.
pub fn admissibility_constant(phi: &AnalyticWavelet, tol: f64) -> Result<f64> {
    check_dc_leak(phi)?;
    Ok(one_sided_admissibility(phi, 1.0, tol)? + one_sided_admissibility(phi, -1.0, tol)?)
}

/// Normalization constant of the synthesis (inversion) formula: `2 pi` times
/// the positive-frequency half of the admissibility integral. For wavelets
/// with an even hat modulus this equals `pi * C_phi`.
pub fn reconstruction_constant(phi: &AnalyticWavelet, tol: f64) -> Result<f64> {
    check_dc_leak(phi)?;
    let c_plus = one_sided_admissibility(phi, 1.0, tol)?;
    let c_minus = one_sided_admissibility(phi, -1.0, tol)?;
    if c_plus < 1e-10 * (c_plus + c_minus) {
        return Err(Error::NotAdmissible(
            "spectrum is concentrated on negative frequencies; synthesis over positive scales cannot reconstruct".into(),
        ));
    }
    Ok(2.0 * std::f64::consts::PI * c_plus)
}

/// Synthesize a signal from a coefficient plane:
/// `h(t) = K^{-1} sum W(a,b) daughter(a,b,t) a^{2 rho - 3} db da`
/// with K the reconstruction constant of `phi`.
pub fn inverse(
    plane: &CoefficientPlane,
    phi: &AnalyticWavelet,
    params: &TransformParams,
    out: &UniformGrid,
) -> Result<SampledSignal> {
    let k_norm = reconstruction_constant(phi, params.quad_tol.min(1e-9))?;
    let synth = synthesize(plane, phi, params, out);
    SampledSignal::new(
        out.start,
        out.step,
        synth.into_iter().map(|z| z / k_norm).collect(),
    )
}

/// Unnormalized synthesis sum over the plane grid.
pub(crate) fn synthesize(
    plane: &CoefficientPlane,
    phi: &AnalyticWavelet,
    params: &TransformParams,
    out: &UniformGrid,
) -> Vec<Complex64> {
    let grid = &plane.grid;
    let wa = grid.scale_measure_weights(params.rho);
    let wb = grid.shift_weights();
    let support = phi.support_radius();
    let cot = params.cot_theta();

    (0..out.len)
        .into_par_iter()
        .map(|i| {
            let t = out.point(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &a) in grid.scales().iter().enumerate() {
                let reach = support * a;
                let amp = a.powf(-params.rho) * wa[j];
                let row = plane.row(j);
                for (k, &b) in grid.shifts().iter().enumerate() {
                    if (t - b).abs() > reach {
                        continue;
                    }
                    acc += row[k] * wb[k] * amp * phi.eval((t - b) / a)
                        * Complex64::new(0.0, -0.5 * (t * t - b * b) * cot).exp();
                }
            }
            acc
        })
        .collect()
}

/// Two sides of the Parseval identity together with their deviation.
#[derive(Debug, Clone, Copy)]
pub struct ParsevalCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// `|lhs - rhs| / |rhs|`, or the absolute deviation when `absolute` is set.
    pub rel_err: f64,
    pub absolute: bool,
}

/// Compare the plane pairing `sum W_h conj(W_g) a^{2 rho - 3} db da` against
/// `K <h, g>` with K the reconstruction constant.
pub fn parseval_residual(
    h: &SampledSignal,
    g: &SampledSignal,
    phi: &AnalyticWavelet,
    params: &TransformParams,
    grid: &ScaleShiftGrid,
) -> Result<ParsevalCheck> {
    let w_h = forward(h, phi, params, grid)?;
    let w_g = forward(g, phi, params, grid)?;
    let wa = grid.scale_measure_weights(params.rho);
    let wb = grid.shift_weights();

    let mut lhs = Complex64::new(0.0, 0.0);
    for j in 0..grid.n_scales() {
        let (row_h, row_g) = (w_h.row(j), w_g.row(j));
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..grid.n_shifts() {
            acc += row_h[k] * row_g[k].conj() * wb[k];
        }
        lhs += acc * wa[j];
    }

    let k_norm = reconstruction_constant(phi, params.quad_tol.min(1e-9))?;
    let rhs = crate::signal::inner_product(h, g)? * k_norm;
    if rhs.norm() == 0.0 {
        Ok(ParsevalCheck { lhs, rhs, rel_err: (lhs - rhs).norm(), absolute: true })
    } else {
        Ok(ParsevalCheck { lhs, rhs, rel_err: (lhs - rhs).norm() / rhs.norm(), absolute: false })
    }
}
