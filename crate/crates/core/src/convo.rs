//! The trilinear kernel `D(u,v,w)` built from a wavelet triple, the translation
//! and convolution operators it induces, closed-form reductions for the Morlet
//! and Mexican-hat families, and the transform-domain product check.
//!
//! `D` is defined by synthesizing the plane function
//! `conj(psi_ab(w)) conj(chi_ab(v))` with daughters of `phi` against the
//! measure `a^{2 rho - 3} db da`, normalized by the reconstruction constant of
//! `phi`. The 2D quadrature of that definition is the ground truth here; the
//! closed forms are cross-checks with an explicit discrepancy-reporting path,
//! since both published reductions contain inconsistencies (see
//! [`closed_form_report`]).

use crate::error::{Error, Result};
use crate::gnfrwt::{daughter_wavelet, forward, reconstruction_constant};
use crate::quad::{self, Domain1D};
use crate::signal::{
    AnalyticWavelet, SampledSignal, ScaleShiftGrid, TransformParams,
    UniformGrid, WaveletTriple,
};
use crate::specfun::{gamma, hyp1f1};
use dashmap::DashMap;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::cell::Cell;

/// One evaluation of the kernel with its quadrature error estimate.
#[derive(Debug, Clone, Copy)]
pub struct BasicFunctionSample {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub value: Complex64,
    pub est_error: f64,
}

/// Budget guard and precision knobs for the tensor convolution.
#[derive(Debug, Clone, Copy)]
pub struct ConvolveOptions {
    /// Cap on the number of kernel samples a single call may request.
    pub max_samples: u64,
    /// Tensor terms whose signal coefficient falls below this fraction of the
    /// largest coefficient are skipped. Zero keeps every term.
    pub coeff_floor: f64,
    /// Sampling density of the generated output grid relative to the fastest
    /// expected oscillation.
    pub points_per_cycle: f64,
}

impl Default for ConvolveOptions {
    fn default() -> Self {
        Self { max_samples: 5_000_000, coeff_floor: 0.0, points_per_cycle: 6.0 }
    }
}

fn quantize(x: f64) -> i64 {
    (x / 1e-12).round() as i64
}

/// Evaluator for `D(u,v,w)` over a fixed triple and parameter set.
///
/// Construction computes the reconstruction constant of `phi` once (failing if
/// `phi` is not admissible); samples are cached by quantized coordinates and
/// the cache is safe for concurrent use.
pub struct BasicFunction {
    triple: WaveletTriple,
    params: TransformParams,
    k_norm: f64,
    cache: DashMap<(i64, i64, i64), (Complex64, f64)>,
}

impl BasicFunction {
    pub fn new(triple: WaveletTriple, params: TransformParams) -> Result<Self> {
        if !(params.rho > 0.0) {
            return Err(Error::InvalidParam(format!(
                "the scale integral of the kernel needs rho > 0, got {}",
                params.rho
            )));
        }
        let k_norm = reconstruction_constant(&triple.phi, params.quad_tol.min(1e-9))?;
        Ok(Self { triple, params, k_norm, cache: DashMap::new() })
    }

    pub fn params(&self) -> &TransformParams {
        &self.params
    }

    pub fn triple(&self) -> &WaveletTriple {
        &self.triple
    }

    /// Reconstruction constant used to normalize the synthesis.
    pub fn normalization(&self) -> f64 {
        self.k_norm
    }

    /// Evaluate `D(u,v,w)` by nested adaptive quadrature at the configured
    /// tolerance: the scale integral (inner, over (0, inf)) is smooth and
    /// cheap for every shift, while the chirped shift integral (outer) is
    /// handled by [`chirped_line_integral`].
    pub fn sample(&self, u: f64, v: f64, w: f64) -> Result<BasicFunctionSample> {
        // the kernel is symmetric under v <-> w when psi == chi
        let (v, w) = if self.triple.psi == self.triple.chi && w < v { (w, v) } else { (v, w) };
        let key = (quantize(u), quantize(v), quantize(w));
        if let Some(hit) = self.cache.get(&key) {
            let (value, est_error) = *hit;
            return Ok(BasicFunctionSample { u, v, w, value, est_error });
        }

        let rho = self.params.rho;
        let tol = self.params.quad_tol;
        let cot = self.params.cot_theta();
        let (psi, chi, phi) = (&self.triple.psi, &self.triple.chi, &self.triple.phi);

        let m = (u + v + w) / 3.0;
        let spread = (((u - v).powi(2) + (v - w).powi(2) + (u - w).powi(2)) / 3.0)
            .sqrt()
            .max(0.25);

        let smooth = |b: f64, floor: f64| -> Result<Complex64> {
            let l = (u - b) * (u - b) + (v - b) * (v - b) + (w - b) * (w - b);
            let a_peak = (l / (rho + 3.0)).sqrt().max(1e-6);
            let q = quad::integrate_1d_abs(
                |a| {
                    let pw = psi.eval((w - b) / a).conj();
                    if pw == Complex64::new(0.0, 0.0) {
                        return pw;
                    }
                    pw * chi.eval((v - b) / a).conj() * phi.eval((u - b) / a)
                        * a.powf(-rho - 3.0)
                },
                Domain1D::HalfLine { from: 0.0 },
                tol / 4.0,
                floor,
                &[a_peak / 4.0, a_peak / 2.0, a_peak, 2.0 * a_peak, 4.0 * a_peak],
                2048,
            )?;
            Ok(q.value)
        };

        // absolute floor sized so the inner noise stays well below the
        // interpolation target after the shift integration sweeps it up
        let floor = tol / (60.0 * (8.0 * spread + 12.0));
        let full = chirped_line_integral(&|b| smooth(b, floor), cot, tol, m, spread, true)?;

        let pref = Complex64::new(0.0, 0.5 * (w * w + v * v - u * u) * cot).exp() / self.k_norm;
        let value = pref * full.value;
        let est_error = (full.est_error + floor * 2.0 * full.span.min(400.0)) / self.k_norm;
        self.cache.insert(key, (value, est_error));
        Ok(BasicFunctionSample { u, v, w, value, est_error })
    }

    /// Translation `(tau_u h)(v) = int D(u,v,w) h(w) dw` on the requested grid.
    pub fn translate(&self, h: &SampledSignal, u: f64, v_grid: &UniformGrid) -> Result<SampledSignal> {
        let values = (0..v_grid.len)
            .into_par_iter()
            .map(|i| {
                let v = v_grid.point(i);
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, z) in h.samples.iter().enumerate() {
                    if z.norm() == 0.0 {
                        continue;
                    }
                    acc += self.sample(u, v, h.time(k))?.value * z * h.weight(k);
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        SampledSignal::new(v_grid.start, v_grid.step, values)
    }

    /// Associated convolution `(h # g)(u) = int int D(u,v,w) h(w) g(v) dv dw`
    /// by tensor quadrature over the two sample grids.
    pub fn convolve(
        &self,
        h: &SampledSignal,
        g: &SampledSignal,
        u_grid: &UniformGrid,
        opts: &ConvolveOptions,
    ) -> Result<SampledSignal> {
        let needed = (u_grid.len * h.len() * g.len()) as u64;
        if needed > opts.max_samples {
            return Err(Error::CostBudgetExceeded { needed, cap: opts.max_samples });
        }
        let g_coef: Vec<Complex64> =
            g.samples.iter().enumerate().map(|(j, z)| z * g.weight(j)).collect();
        let h_coef: Vec<Complex64> =
            h.samples.iter().enumerate().map(|(k, z)| z * h.weight(k)).collect();
        let peak = g_coef
            .iter()
            .flat_map(|a| h_coef.iter().map(move |b| (a * b).norm()))
            .fold(0.0f64, f64::max);
        let cut = opts.coeff_floor * peak;
        let values = (0..u_grid.len)
            .into_par_iter()
            .map(|i| {
                let u = u_grid.point(i);
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, gw) in g_coef.iter().enumerate() {
                    let v = g.time(j);
                    for (k, hw) in h_coef.iter().enumerate() {
                        let coef = gw * hw;
                        if coef.norm() <= cut || coef.norm() == 0.0 {
                            continue;
                        }
                        acc += self.sample(u, v, h.time(k))?.value * coef;
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        SampledSignal::new(u_grid.start, u_grid.step, values)
    }

    /// Transform (in u) of `u -> D(u,v,w)` over the plane, compared against the
    /// conjugated daughter product the construction aims for. Returns the sup
    /// of |lhs - rhs| over the plane normalized by the sup of |rhs|.
    pub fn defining_property_residual(
        &self,
        u_grid: &UniformGrid,
        v: f64,
        w: f64,
        plane_grid: &ScaleShiftGrid,
    ) -> Result<f64> {
        let samples = (0..u_grid.len)
            .into_par_iter()
            .map(|i| self.sample(u_grid.point(i), v, w).map(|s| s.value))
            .collect::<Result<Vec<_>>>()?;
        let d_signal = SampledSignal::new(u_grid.start, u_grid.step, samples)?;
        let lhs = forward(&d_signal, &self.triple.phi, &self.params, plane_grid)?;

        let mut sup_diff = 0.0f64;
        let mut sup_rhs = 0.0f64;
        for (j, &a) in plane_grid.scales().iter().enumerate() {
            for (k, &b) in plane_grid.shifts().iter().enumerate() {
                let rhs = daughter_wavelet(&self.triple.psi, &self.params, a, b, w).conj()
                    * daughter_wavelet(&self.triple.chi, &self.params, a, b, v).conj();
                sup_diff = sup_diff.max((lhs.value(j, k) - rhs).norm());
                sup_rhs = sup_rhs.max(rhs.norm());
            }
        }
        Ok(if sup_rhs == 0.0 { sup_diff } else { sup_diff / sup_rhs })
    }

    /// Residual of the transform-domain product identity: the transform of
    /// `h # g` against the pointwise product of the transforms of `h` and `g`,
    /// `sup |lhs - rhs| / (1 + |rhs|)` over the plane.
    ///
    /// The internal convolution grid is offset off the sample lattices of `h`
    /// and `g`, since the kernel is singular where all three arguments meet.
    pub fn convolution_theorem_residual(
        &self,
        h: &SampledSignal,
        g: &SampledSignal,
        plane_grid: &ScaleShiftGrid,
        opts: &ConvolveOptions,
    ) -> Result<f64> {
        let u_grid = self.convolution_grid(plane_grid, opts)?;
        let conv = self.convolve(h, g, &u_grid, opts)?;
        let lhs = forward(&conv, &self.triple.phi, &self.params, plane_grid)?;
        let w_h = forward(h, &self.triple.psi, &self.params, plane_grid)?;
        let w_g = forward(g, &self.triple.chi, &self.params, plane_grid)?;

        let mut worst = 0.0f64;
        for j in 0..plane_grid.n_scales() {
            for k in 0..plane_grid.n_shifts() {
                let rhs = w_h.value(j, k) * w_g.value(j, k);
                let r = (lhs.value(j, k) - rhs).norm() / (1.0 + rhs.norm());
                worst = worst.max(r);
            }
        }
        Ok(worst)
    }

    /// Output grid for [`Self::convolve`] wide enough for the plane analysis
    /// and dense enough for the fastest wavelet oscillation on it.
    pub fn convolution_grid(
        &self,
        plane_grid: &ScaleShiftGrid,
        opts: &ConvolveOptions,
    ) -> Result<UniformGrid> {
        let a_min = plane_grid.scales()[0];
        let a_max = *plane_grid.scales().last().unwrap();
        let b_lo = plane_grid.shifts()[0];
        let b_hi = *plane_grid.shifts().last().unwrap();
        let reach = self.triple.phi.support_radius().min(4.5) * a_max;
        let lo = b_lo - reach;
        let hi = b_hi + reach;

        let carrier = match &self.triple.phi {
            AnalyticWavelet::Morlet { omega0 } => omega0 / a_min,
            _ => 3.0 / a_min,
        };
        let cot = self.params.cot_theta().abs();
        let rate = carrier + cot * lo.abs().max(hi.abs()) + 2.0;
        let du = 2.0 * std::f64::consts::PI / (opts.points_per_cycle.max(2.5) * rate);
        let n = (((hi - lo) / du).ceil() as usize + 1).clamp(32, 4096);
        // fractional offset keeps u off the h and g sample lattices, where the
        // kernel's triple-coincidence singularity would be hit exactly
        let step = (hi - lo) / (n - 1) as f64;
        UniformGrid::new(lo + 0.37 * step, step, n)
    }
}

/// One-off evaluation of the kernel; builds a throwaway engine.
pub fn basic_function(
    triple: &WaveletTriple,
    params: &TransformParams,
    u: f64,
    v: f64,
    w: f64,
) -> Result<BasicFunctionSample> {
    BasicFunction::new(triple.clone(), *params)?.sample(u, v, w)
}

/// Auxiliary polynomials of the Mexican-hat reduction, as published:
/// `L` is the sum of squared offsets, `M` the pairwise products of squared
/// offsets, and `N = L + ` the triple product, kept exactly as printed even
/// though its role is dimensionally inconsistent (see [`closed_form_report`]).
#[derive(Debug, Clone, Copy)]
pub struct MexicanAux {
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

impl MexicanAux {
    pub fn new(u: f64, v: f64, w: f64, b: f64) -> Self {
        let (du, dv, dw) = ((u - b) * (u - b), (v - b) * (v - b), (w - b) * (w - b));
        let l = du + dv + dw;
        let m = du * dv + du * dw + dv * dw;
        let n = l + du * dv * dw;
        Self { l, m, n }
    }

    fn triple_product(u: f64, v: f64, w: f64, b: f64) -> f64 {
        let (du, dv, dw) = ((u - b) * (u - b), (v - b) * (v - b), (w - b) * (w - b));
        du * dv * dw
    }
}

/// Value and error estimate of a chirped line integral.
struct ChirpedValue {
    value: Complex64,
    est_error: f64,
    span: f64,
}

/// `int S(b) e^{(-i/2) cot b^2} db` for a smooth factor `S` with a known
/// decreasing envelope.
///
/// Without a chirp the integrand goes straight to the adaptive engine over the
/// line. With a chirp the domain is truncated where a van-der-Corput bound on
/// the oscillatory tail falls below the target (the bound is added to the
/// error estimate), and when `S` is expensive it is sampled once on a lattice
/// and interpolated, so resolving the chirp does not multiply the cost of `S`.
fn chirped_line_integral(
    s_eval: &dyn Fn(f64) -> Result<Complex64>,
    cot: f64,
    tol: f64,
    center: f64,
    spread: f64,
    use_lattice: bool,
) -> Result<ChirpedValue> {
    if cot == 0.0 {
        let failure: Cell<Option<Error>> = Cell::new(None);
        let result = quad::integrate_1d_abs(
            |b| {
                s_eval(b).unwrap_or_else(|e| {
                    failure.set(Some(e));
                    Complex64::new(0.0, 0.0)
                })
            },
            Domain1D::Line,
            tol,
            tol,
            &[center - spread, center, center + spread],
            4096,
        );
        if let Some(e) = failure.take() {
            return Err(e);
        }
        let q = result?;
        return Ok(ChirpedValue { value: q.value, est_error: q.est_error, span: f64::INFINITY });
    }

    // truncate where the first integration-by-parts bound on the chirped tail
    // clears the error target; the envelope is probed from the factor itself
    // and assumed monotone beyond the chosen span
    let target = tol / 3.0;
    let tail_at = |sp: f64| -> Result<f64> {
        let denom = cot.abs() * (sp - center.abs()).max(1.0);
        Ok(3.0 * (s_eval(center + sp)?.norm() + s_eval(center - sp)?.norm()) / denom)
    };
    let mut span = (8.0 * spread + 12.0).max(2.0 * center.abs());
    let mut tail_bound = tail_at(span)?;
    while tail_bound > target && span < 400.0 {
        span *= 1.25;
        tail_bound = tail_at(span)?;
    }
    let (lo, hi) = (center - span, center + span);
    let chirp = |b: f64| Complex64::new(0.0, -0.5 * b * b * cot).exp();
    let seeds = [0.0, center - spread, center, center + spread];

    if !use_lattice {
        let failure: Cell<Option<Error>> = Cell::new(None);
        let result = quad::integrate_1d_abs(
            |b| match s_eval(b) {
                Ok(t) => t * chirp(b),
                Err(e) => {
                    failure.set(Some(e));
                    Complex64::new(0.0, 0.0)
                }
            },
            Domain1D::Finite { lo, hi },
            tol,
            target,
            &seeds,
            8192,
        );
        if let Some(e) = failure.take() {
            return Err(e);
        }
        let q = result?;
        return Ok(ChirpedValue { value: q.value, est_error: q.est_error + tail_bound, span });
    }

    // Sample the smooth factor on a sinh-graded lattice. Wavelet carriers make
    // S oscillate at a rate falling off like 1/|b - center|, so b = center +
    // spread sinh(y) equalizes the phase rate per lattice cell; midpoints are
    // interleaved until the probed interpolation error clears the target.
    let base = spread;
    let y_max = (span / base).asinh();
    let mut n = ((2.0 * y_max / 0.12).ceil() as usize + 1).clamp(33, 2049);
    let mut dy = 2.0 * y_max / (n - 1) as f64;
    let to_b = |y: f64| center + base * y.sinh();
    let mut vals: Vec<Complex64> = (0..n)
        .map(|i| s_eval(to_b(-y_max + dy * i as f64)))
        .collect::<Result<_>>()?;
    let mut interp_err_term;
    let mut prev_err = f64::INFINITY;
    loop {
        // per-probe local widths keep the estimate from charging the whole
        // domain with the worst (usually central) interpolation error
        let mut err_l1 = 0.0f64;
        let probes = 13;
        for k in 0..probes {
            let y = -y_max + (2.0 * y_max) * (k as f64 + 0.5) / probes as f64 + 0.37 * dy;
            if y <= -y_max || y >= y_max {
                continue;
            }
            let b = to_b(y);
            let err = (s_eval(b)? - catmull_rom(&vals, -y_max, dy, y)).norm();
            err_l1 += err * (2.0 * y_max / probes as f64) * base * y.cosh();
        }
        interp_err_term = 1.5 * err_l1;
        // a plateau means the probes hit the noise floor of the smooth factor
        // itself; further lattice refinement cannot help
        if interp_err_term <= target || n >= 4097 || interp_err_term > 0.7 * prev_err {
            break;
        }
        prev_err = interp_err_term;
        let mut next = Vec::with_capacity(2 * n - 1);
        for i in 0..n - 1 {
            next.push(vals[i]);
            next.push(s_eval(to_b(-y_max + dy * (i as f64 + 0.5)))?);
        }
        next.push(vals[n - 1]);
        vals = next;
        n = 2 * n - 1;
        dy *= 0.5;
    }
    let vals = &vals;

    let result = quad::integrate_1d_abs(
        |b| {
            let y = ((b - center) / base).asinh();
            catmull_rom(vals, -y_max, dy, y) * chirp(b)
        },
        Domain1D::Finite { lo, hi },
        tol,
        target,
        &seeds,
        32768,
    )?;
    Ok(ChirpedValue {
        value: result.value,
        est_error: result.est_error + tail_bound + interp_err_term,
        span,
    })
}

/// Cubic interpolation over a uniform complex lattice.
fn catmull_rom(vals: &[Complex64], lo: f64, step: f64, b: f64) -> Complex64 {
    let n = vals.len();
    let x = (b - lo) / step;
    let i = (x.floor().max(0.0) as usize).min(n - 2);
    let t = (x - i as f64).clamp(0.0, 1.0);
    let pm1 = vals[i.saturating_sub(1)];
    let (p0, p1) = (vals[i], vals[i + 1]);
    let p2 = vals[(i + 2).min(n - 1)];
    let m0 = (p1 - pm1) * 0.5;
    let m1 = (p2 - p0) * 0.5;
    let (t2, t3) = (t * t, t * t * t);
    p0 * (2.0 * t3 - 3.0 * t2 + 1.0)
        + m0 * (t3 - 2.0 * t2 + t)
        + p1 * (-2.0 * t3 + 3.0 * t2)
        + m1 * (t3 - t2)
}

fn reduced_line_integral(
    params: &TransformParams,
    u: f64,
    v: f64,
    w: f64,
    k_norm: f64,
    term: impl Fn(f64) -> Result<Complex64>,
) -> Result<Complex64> {
    let cot = params.cot_theta();
    let m = (u + v + w) / 3.0;
    let spread = (((u - v).powi(2) + (v - w).powi(2) + (u - w).powi(2)) / 3.0)
        .sqrt()
        .max(0.25);
    let r = chirped_line_integral(&|b| term(b), cot, params.quad_tol, m, spread, false)?;
    let pref = Complex64::new(0.0, 0.5 * (w * w + v * v - u * u) * cot).exp() / k_norm;
    Ok(pref * r.value)
}

/// Morlet-triple kernel in the published reduced form: the prefactor
/// `Gamma(1 + rho/2) 2^{1 + rho/2}` against
/// `L^{-1-rho/2} e^{(-i/2) b^2 cot} 1F1(1 + rho/2; 1/2; -w0^2 (b+u-w-v)^2 / (2L))`
/// integrated over b. The published derivation symmetrized the one-sided scale
/// substitution into a cosine transform, which silently drops an odd component;
/// [`morlet_basic_corrected`] carries that missing half.
pub fn morlet_basic_reduced(
    omega0: f64,
    params: &TransformParams,
    u: f64,
    v: f64,
    w: f64,
) -> Result<Complex64> {
    let phi = AnalyticWavelet::morlet(omega0)?;
    let k_norm = reconstruction_constant(&phi, params.quad_tol.min(1e-9))?;
    let a = 1.0 + params.rho / 2.0;
    let pref = gamma(a)? * 2f64.powf(a);
    reduced_line_integral(params, u, v, w, k_norm, |b| {
        let aux = MexicanAux::new(u, v, w, b);
        let c = b + u - w - v;
        let x = -omega0 * omega0 * c * c / (2.0 * aux.l);
        Ok(Complex64::new(pref * aux.l.powf(-a) * hyp1f1(a, 0.5, x)?, 0.0))
    })
}

/// Morlet-triple kernel reduced to a single line integral with both the even
/// (cosine) and odd (sine) halves of the scale substitution retained. Agrees
/// with the 2D quadrature definition to quadrature accuracy.
pub fn morlet_basic_corrected(
    omega0: f64,
    params: &TransformParams,
    u: f64,
    v: f64,
    w: f64,
) -> Result<Complex64> {
    let phi = AnalyticWavelet::morlet(omega0)?;
    let k_norm = reconstruction_constant(&phi, params.quad_tol.min(1e-9))?;
    let rho = params.rho;
    let a_cos = (rho + 2.0) / 2.0;
    let a_sin = (rho + 3.0) / 2.0;
    let g_cos = gamma(a_cos)?;
    let g_sin = gamma(a_sin)?;
    reduced_line_integral(params, u, v, w, k_norm, |b| {
        let aux = MexicanAux::new(u, v, w, b);
        let c = b + u - w - v;
        let half_l = aux.l / 2.0;
        let x = -omega0 * omega0 * c * c / (2.0 * aux.l);
        let cos_half = 0.5 * g_cos * half_l.powf(-a_cos) * hyp1f1(a_cos, 0.5, x)?;
        let sin_half = 0.5 * omega0 * c * g_sin * half_l.powf(-a_sin) * hyp1f1(a_sin, 1.5, x)?;
        Ok(Complex64::new(cos_half, sin_half))
    })
}

/// Mexican-hat-triple kernel in the published reduced form:
/// `Gamma((rho+6)/2)(L/2)^{-(rho+6)/2} - Gamma((rho+4)/2) N (L/2)^{-(rho+4)/2}
///  + Gamma((rho+2)/2) M (L/2)^{-(rho+2)/2}` under the chirped line integral,
/// with `N` as printed. See [`mexican_basic_corrected`] for the consistent
/// reduction.
pub fn mexican_basic_reduced(params: &TransformParams, u: f64, v: f64, w: f64) -> Result<Complex64> {
    let k_norm = reconstruction_constant(&AnalyticWavelet::MexicanHat, params.quad_tol.min(1e-9))?;
    let rho = params.rho;
    let g2 = gamma((rho + 2.0) / 2.0)?;
    let g4 = gamma((rho + 4.0) / 2.0)?;
    let g6 = gamma((rho + 6.0) / 2.0)?;
    reduced_line_integral(params, u, v, w, k_norm, |b| {
        let aux = MexicanAux::new(u, v, w, b);
        let half_l = aux.l / 2.0;
        let t = g6 * half_l.powf(-(rho + 6.0) / 2.0) - g4 * aux.n * half_l.powf(-(rho + 4.0) / 2.0)
            + g2 * aux.m * half_l.powf(-(rho + 2.0) / 2.0);
        Ok(Complex64::new(t, 0.0))
    })
}

/// Mexican-hat-triple kernel reduced consistently: expanding the product of the
/// three quadratic envelopes gives `1 - L t^2 + M t^4 - P t^6` under the
/// one-sided gaussian moment integral, hence four Gamma terms with `P` the
/// triple product of squared offsets.
pub fn mexican_basic_corrected(
    params: &TransformParams,
    u: f64,
    v: f64,
    w: f64,
) -> Result<Complex64> {
    let k_norm = reconstruction_constant(&AnalyticWavelet::MexicanHat, params.quad_tol.min(1e-9))?;
    let rho = params.rho;
    let g2 = gamma((rho + 2.0) / 2.0)?;
    let g4 = gamma((rho + 4.0) / 2.0)?;
    let g6 = gamma((rho + 6.0) / 2.0)?;
    let g8 = gamma((rho + 8.0) / 2.0)?;
    reduced_line_integral(params, u, v, w, k_norm, |b| {
        let aux = MexicanAux::new(u, v, w, b);
        let p = MexicanAux::triple_product(u, v, w, b);
        let half_l = aux.l / 2.0;
        let t = 0.5
            * (g2 * half_l.powf(-(rho + 2.0) / 2.0) - aux.l * g4 * half_l.powf(-(rho + 4.0) / 2.0)
                + aux.m * g6 * half_l.powf(-(rho + 6.0) / 2.0)
                - p * g8 * half_l.powf(-(rho + 8.0) / 2.0));
        Ok(Complex64::new(t, 0.0))
    })
}

/// Closed-form family selector for [`closed_form_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormKind {
    Morlet { omega0: f64 },
    MexicanHat,
}

/// Per-point comparison of the 2D quadrature oracle against both closed forms.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormPoint {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub oracle: [f64; 2],
    pub printed: [f64; 2],
    pub corrected: [f64; 2],
    pub printed_rel_err: f64,
    pub corrected_rel_err: f64,
}

/// Machine-readable account of how the published reduced forms compare with
/// the quadrature ground truth at a set of probe points.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormReport {
    pub family: String,
    pub alpha: f64,
    pub rho: f64,
    pub points: Vec<ClosedFormPoint>,
    pub max_printed_rel_err: f64,
    pub max_corrected_rel_err: f64,
    /// True when the printed form deviates from the oracle by more than the
    /// corrected form does at every probe point.
    pub printed_form_discrepant: bool,
}

/// Evaluate the oracle (2D quadrature at a tightened tolerance) and both
/// closed forms at the given points.
pub fn closed_form_report(
    kind: ClosedFormKind,
    params: &TransformParams,
    points: &[(f64, f64, f64)],
) -> Result<ClosedFormReport> {
    let mother = match kind {
        ClosedFormKind::Morlet { omega0 } => AnalyticWavelet::morlet(omega0)?,
        ClosedFormKind::MexicanHat => AnalyticWavelet::MexicanHat,
    };
    let mut tight = *params;
    tight.quad_tol = params.quad_tol / 10.0;
    let engine = BasicFunction::new(WaveletTriple::uniform(mother), tight)?;

    let mut out = Vec::with_capacity(points.len());
    let mut max_printed = 0.0f64;
    let mut max_corrected = 0.0f64;
    for &(u, v, w) in points {
        let oracle = engine.sample(u, v, w)?.value;
        // the printed reductions can fail to converge (the published
        // Mexican-hat bracket grows with the shift); keep the best value so
        // the report can still quantify the mismatch
        let best = |r: Result<Complex64>| -> Result<Complex64> {
            match r {
                Ok(z) => Ok(z),
                Err(Error::QuadNoConverge { value, .. }) => Ok(value),
                Err(e) => Err(e),
            }
        };
        let (printed, corrected) = match kind {
            ClosedFormKind::Morlet { omega0 } => (
                best(morlet_basic_reduced(omega0, params, u, v, w))?,
                morlet_basic_corrected(omega0, params, u, v, w)?,
            ),
            ClosedFormKind::MexicanHat => (
                best(mexican_basic_reduced(params, u, v, w))?,
                mexican_basic_corrected(params, u, v, w)?,
            ),
        };
        let scale = oracle.norm().max(1e-300);
        let printed_rel = (printed - oracle).norm() / scale;
        let corrected_rel = (corrected - oracle).norm() / scale;
        max_printed = max_printed.max(printed_rel);
        max_corrected = max_corrected.max(corrected_rel);
        out.push(ClosedFormPoint {
            u,
            v,
            w,
            oracle: [oracle.re, oracle.im],
            printed: [printed.re, printed.im],
            corrected: [corrected.re, corrected.im],
            printed_rel_err: printed_rel,
            corrected_rel_err: corrected_rel,
        });
    }
    Ok(ClosedFormReport {
        family: match kind {
            ClosedFormKind::Morlet { .. } => "morlet".into(),
            ClosedFormKind::MexicanHat => "mexican".into(),
        },
        alpha: params.alpha,
        rho: params.rho,
        points: out,
        max_printed_rel_err: max_printed,
        max_corrected_rel_err: max_corrected,
        printed_form_discrepant: max_printed > 10.0 * max_corrected.max(1e-6),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn morlet_engine(alpha: f64, rho: f64, tol: f64) -> BasicFunction {
        let triple = WaveletTriple::uniform(AnalyticWavelet::morlet(5.0).unwrap());
        BasicFunction::new(triple, TransformParams::new(alpha, rho, tol).unwrap()).unwrap()
    }

    fn mexican_engine(alpha: f64, rho: f64, tol: f64) -> BasicFunction {
        let triple = WaveletTriple::uniform(AnalyticWavelet::MexicanHat);
        BasicFunction::new(triple, TransformParams::new(alpha, rho, tol).unwrap()).unwrap()
    }

    #[test]
    fn swap_symmetry_when_psi_equals_chi() {
        let engine = morlet_engine(0.5, 1.0, 1e-5);
        let a = engine.sample(0.4, 0.7, -0.2).unwrap().value;
        let b = engine.sample(0.4, -0.2, 0.7).unwrap().value;
        assert!((a - b).norm() <= 2e-5 * a.norm().max(1e-12), "{a} vs {b}");
    }

    #[test]
    fn morlet_golden_point() {
        // rho = 1, theta = pi/3, probe (0.5, 0.2, -0.3); value pinned by two
        // independent routes (direct 2D quadrature and the corrected reduction)
        let engine = morlet_engine(2.0 / 3.0, 1.0, 1e-6);
        let s = engine.sample(0.5, 0.2, -0.3).unwrap();
        let golden = Complex64::new(-0.004334875202, 0.004015766354);
        assert!(
            (s.value - golden).norm() <= 1e-4 * golden.norm(),
            "sample {} vs golden {golden}",
            s.value
        );
        let closed = morlet_basic_corrected(
            5.0,
            &TransformParams::new(2.0 / 3.0, 1.0, 1e-8).unwrap(),
            0.5,
            0.2,
            -0.3,
        )
        .unwrap();
        assert!((s.value - closed).norm() <= 1e-4 * golden.norm());
    }

    #[test]
    fn alpha_one_matches_corrected_closed_form() {
        // at theta = pi/2 the chirp weight is flat; the Gamma/1F1 reduction is
        // an independent route to the same kernel
        let engine = mexican_engine(1.0, 0.8, 1e-6);
        let params = TransformParams::new(1.0, 0.8, 1e-8).unwrap();
        for &(u, v, w) in &[(0.5, 0.2, -0.3), (1.1, -0.4, 0.3)] {
            let direct = engine.sample(u, v, w).unwrap().value;
            let closed = mexican_basic_corrected(&params, u, v, w).unwrap();
            assert!(
                (direct - closed).norm() <= 2e-4 * closed.norm(),
                "({u},{v},{w}): {direct} vs {closed}"
            );
        }
    }

    #[test]
    fn chirp_factorization_of_the_kernel() {
        // D(u,v,w) = e^{(i/2)(w^2+v^2-u^2) cot} * [chirp-free daughters with the
        // e^{(-i/2) b^2 cot} weight kept inside the b integral]
        let engine = morlet_engine(0.5, 1.0, 1e-6);
        let (u, v, w) = (0.6, 0.1, -0.4);
        let direct = engine.sample(u, v, w).unwrap().value;

        let mother = AnalyticWavelet::morlet(5.0).unwrap();
        let rho = 1.0;
        let cot = 1.0;
        let k_norm = reconstruction_constant(&mother, 1e-10).unwrap();
        let integrand = |a: f64, b: f64| -> Complex64 {
            mother.eval((w - b) / a).conj()
                * mother.eval((v - b) / a).conj()
                * mother.eval((u - b) / a)
                * Complex64::new(0.0, -0.5 * b * b * cot).exp()
                * a.powf(-rho - 3.0)
        };
        let chirpless = match quad::integrate_2d_seeded(
            |b, a| integrand(a, b),
            Domain1D::Line,
            Domain1D::HalfLine { from: 0.0 },
            1e-6,
            &[-0.5, 0.1, 0.7],
            &[0.25, 1.0, 4.0],
        ) {
            Ok(q) => q.value,
            Err(Error::QuadNoConverge { value, .. }) => value,
            Err(e) => panic!("unexpected error {e}"),
        } / k_norm;
        let factored = Complex64::new(0.0, 0.5 * (w * w + v * v - u * u) * cot).exp() * chirpless;
        // the raw nested quadrature of the factored route carries a coarser
        // tail truncation than the engine; structural agreement is what counts
        assert!(
            (direct - factored).norm() <= 1e-4 * direct.norm().max(1e-12),
            "{direct} vs {factored}"
        );
    }

    #[test]
    fn zero_psi_gives_zero_kernel_and_zero_residual() {
        let zeros = SampledSignal::zeros(UniformGrid::spanning(-2.0, 2.0, 33).unwrap());
        let triple = WaveletTriple::new(
            AnalyticWavelet::tabulated(zeros).unwrap(),
            AnalyticWavelet::MexicanHat,
            AnalyticWavelet::MexicanHat,
        );
        let engine =
            BasicFunction::new(triple, TransformParams::new(0.5, 1.0, 1e-6).unwrap()).unwrap();
        let s = engine.sample(0.5, 0.2, -0.3).unwrap();
        assert_eq!(s.value, Complex64::new(0.0, 0.0));

        let u_grid = UniformGrid::spanning(-4.0, 4.0, 65).unwrap();
        let plane = ScaleShiftGrid::log_scales_uniform_shifts(0.8, 1.6, 3, -0.5, 0.5, 4).unwrap();
        let r = engine.defining_property_residual(&u_grid, 0.2, -0.3, &plane).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn translate_of_zero_is_zero() {
        let engine = morlet_engine(0.5, 1.0, 1e-4);
        let z = SampledSignal::zeros(UniformGrid::spanning(-2.0, 2.0, 17).unwrap());
        let out = engine
            .translate(&z, 0.3, &UniformGrid::spanning(-1.0, 1.0, 5).unwrap())
            .unwrap();
        assert!(out.samples.iter().all(|s| s.norm() == 0.0));
    }

    #[test]
    fn translate_sifting_limit_recovers_kernel_slice() {
        let engine = morlet_engine(0.5, 0.8, 1e-5);
        let (u, v, w0) = (0.31, -0.22, 0.17);
        let target = engine.sample(u, v, w0).unwrap().value;

        let bump = |sigma: f64| {
            let grid = UniformGrid::spanning(w0 - 4.0 * sigma, w0 + 4.0 * sigma, 41).unwrap();
            let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
            SampledSignal::from_fn(grid, |t| {
                Complex64::new(norm * (-(t - w0).powi(2) / (2.0 * sigma * sigma)).exp(), 0.0)
            })
            .unwrap()
        };
        let v_grid = UniformGrid::new(v, 1.0, 1).unwrap();
        let mut sigma = 0.2;
        let mut prev = engine.translate(&bump(sigma), u, &v_grid).unwrap().samples[0];
        loop {
            sigma /= 2.0;
            let cur = engine.translate(&bump(sigma), u, &v_grid).unwrap().samples[0];
            if (cur - prev).norm() <= 0.01 * cur.norm() {
                prev = cur;
                break;
            }
            prev = cur;
            assert!(sigma > 1e-4, "sifting limit did not settle");
        }
        assert!(
            (prev - target).norm() <= 0.02 * target.norm(),
            "sifted {prev} vs kernel {target}"
        );
    }

    #[test]
    fn translate_golden_values_by_nested_quadrature() {
        // (tau_0 h)(v) for h = e^{-w^2} against a nested quadrature oracle
        let engine = morlet_engine(0.5, 1.0, 1e-5);
        let h_grid = UniformGrid::spanning(-3.0, 3.0, 25).unwrap();
        let h = SampledSignal::from_fn(h_grid, |t| Complex64::new((-t * t).exp(), 0.0)).unwrap();
        let v_grid = UniformGrid::new(0.4123, 0.5, 2).unwrap();
        let got = engine.translate(&h, 0.0, &v_grid).unwrap();

        for (i, &expect) in got.samples.iter().enumerate() {
            let v = v_grid.point(i);
            let mut oracle = Complex64::new(0.0, 0.0);
            for (k, z) in h.samples.iter().enumerate() {
                oracle += engine.sample(0.0, v, h.time(k)).unwrap().value * z * h.weight(k);
            }
            assert!((expect - oracle).norm() <= 1e-12 * oracle.norm().max(1e-12));
        }
    }

    #[test]
    fn convolve_budget_guard() {
        let engine = morlet_engine(0.5, 0.8, 1e-4);
        let g = SampledSignal::zeros(UniformGrid::spanning(-2.0, 2.0, 33).unwrap());
        let out = UniformGrid::spanning(-2.0, 2.0, 65).unwrap();
        let r = engine.convolve(&g, &g, &out, &ConvolveOptions { max_samples: 100, ..Default::default() });
        assert!(matches!(r, Err(Error::CostBudgetExceeded { .. })));
    }

    #[test]
    fn convolve_commutes_when_psi_equals_chi() {
        let engine = morlet_engine(0.5, 0.8, 1e-5);
        let grid = UniformGrid::spanning(-1.6, 1.6, 9).unwrap();
        let h = SampledSignal::from_fn(grid, |t| Complex64::new((-t * t).exp(), 0.0)).unwrap();
        let g = SampledSignal::from_fn(grid, |t| {
            Complex64::new((-(t - 0.4).powi(2) * 2.0).exp(), 0.0)
        })
        .unwrap();
        let out = UniformGrid::new(-1.013, 0.53, 5).unwrap();
        let hg = engine.convolve(&h, &g, &out, &ConvolveOptions::default()).unwrap();
        let gh = engine.convolve(&g, &h, &out, &ConvolveOptions::default()).unwrap();
        for (a, b) in hg.samples.iter().zip(&gh.samples) {
            assert!((a - b).norm() <= 5e-5 * a.norm().max(1e-9), "{a} vs {b}");
        }
    }

    #[test]
    fn convolve_bilinear_in_both_arguments() {
        let engine = morlet_engine(0.5, 0.8, 1e-5);
        let grid = UniformGrid::spanning(-1.2, 1.2, 7).unwrap();
        let h = SampledSignal::from_fn(grid, |t| Complex64::new((-t * t).exp(), 0.0)).unwrap();
        let g = SampledSignal::from_fn(grid, |t| Complex64::new(0.3, 0.1 * t).exp()).unwrap();
        let out = UniformGrid::new(-0.913, 0.61, 4).unwrap();
        let base = engine.convolve(&h, &g, &out, &ConvolveOptions::default()).unwrap();
        let h2 = h.scaled(Complex64::new(2.0, 0.0));
        let doubled = engine.convolve(&h2, &g, &out, &ConvolveOptions::default()).unwrap();
        for (d, b) in doubled.samples.iter().zip(&base.samples) {
            let lin = b * 2.0;
            assert!((d - lin).norm() <= 1e-10 * lin.norm().max(1e-12));
        }
        let g3 = g.scaled(Complex64::new(0.0, 3.0));
        let tripled = engine.convolve(&h, &g3, &out, &ConvolveOptions::default()).unwrap();
        for (d, b) in tripled.samples.iter().zip(&base.samples) {
            let lin = b * Complex64::new(0.0, 3.0);
            assert!((d - lin).norm() <= 1e-10 * lin.norm().max(1e-12));
        }
    }

    #[test]
    fn convolve_sifting_against_translate() {
        // g collapsing to a unit-mass bump at v0 turns h # g into (tau_u h)(v0)
        let engine = morlet_engine(0.5, 0.8, 1e-5);
        let h_grid = UniformGrid::spanning(-1.6, 1.6, 9).unwrap();
        let h = SampledSignal::from_fn(h_grid, |t| Complex64::new((-t * t).exp(), 0.0)).unwrap();
        // keep u away from the bump so the kernel is smooth across its width
        let v0 = 0.21;
        let sigma = 0.015;
        let g_grid = UniformGrid::spanning(v0 - 4.0 * sigma, v0 + 4.0 * sigma, 33).unwrap();
        let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
        let g = SampledSignal::from_fn(g_grid, |t| {
            Complex64::new(norm * (-(t - v0).powi(2) / (2.0 * sigma * sigma)).exp(), 0.0)
        })
        .unwrap();
        let out = UniformGrid::new(-0.9317, 1.0, 1).unwrap();
        let conv = engine.convolve(&h, &g, &out, &ConvolveOptions::default()).unwrap();
        let tau = engine
            .translate(&h, out.point(0), &UniformGrid::new(v0, 1.0, 1).unwrap())
            .unwrap();
        assert!(
            (conv.samples[0] - tau.samples[0]).norm() <= 0.02 * tau.samples[0].norm(),
            "{} vs {}",
            conv.samples[0],
            tau.samples[0]
        );
    }

    #[test]
    fn conv_theorem_residual_zero_for_zero_signal() {
        let engine = morlet_engine(0.5, 0.8, 1e-4);
        let z = SampledSignal::zeros(UniformGrid::spanning(-2.0, 2.0, 9).unwrap());
        let plane = ScaleShiftGrid::log_scales_uniform_shifts(0.9, 1.8, 3, -0.8, 0.8, 4).unwrap();
        let r = engine
            .convolution_theorem_residual(&z, &z, &plane, &ConvolveOptions::default())
            .unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn morlet_hyp1f1_argument_is_nonpositive_and_bounded() {
        // the 1F1 argument of the reduction is -w0^2 c^2 / (2L) <= 0, and the
        // function stays in [-1, 1] there
        let rho = 1.0;
        let a = 1.0 + rho / 2.0;
        for &(u, v, w) in &[(0.5, 0.2, -0.3), (1.0, -1.0, 0.5), (0.0, 0.0, 1.0)] {
            for i in 0..60 {
                let b = -6.0 + 0.2 * i as f64;
                let aux = MexicanAux::new(u, v, w, b);
                let c = b + u - w - v;
                let x = -25.0 * c * c / (2.0 * aux.l);
                assert!(x <= 0.0);
                let val = hyp1f1(a, 0.5, x).unwrap();
                assert!(val.abs() <= 1.0 + 1e-12, "1F1({a};0.5;{x}) = {val}");
            }
        }
    }

    #[test]
    fn morlet_hyp1f1_argument_constant_at_origin() {
        // u = v = w = 0 collapses the argument to -w0^2/6 independent of b
        for i in 1..40 {
            let b = 0.1 * i as f64;
            let aux = MexicanAux::new(0.0, 0.0, 0.0, b);
            let c = b;
            let x = -25.0 * c * c / (2.0 * aux.l);
            assert_relative_eq!(x, -25.0 / 6.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn mexican_rho2_gamma_prefactors() {
        assert_relative_eq!(gamma((2.0 + 6.0) / 2.0).unwrap(), 6.0, max_relative = 1e-13);
        assert_relative_eq!(gamma((2.0 + 4.0) / 2.0).unwrap(), 2.0, max_relative = 1e-13);
        assert_relative_eq!(gamma((2.0 + 2.0) / 2.0).unwrap(), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn closed_forms_vs_oracle_morlet() {
        let params = TransformParams::new(2.0 / 3.0, 1.0, 1e-5).unwrap();
        let report = closed_form_report(
            ClosedFormKind::Morlet { omega0: 5.0 },
            &params,
            &[(0.5, 0.2, -0.3), (0.9, -0.5, 0.1)],
        )
        .unwrap();
        assert!(report.max_corrected_rel_err <= 1e-3, "{report:?}");
        assert!(report.printed_form_discrepant);
    }

    #[test]
    fn closed_forms_vs_oracle_mexican() {
        let params = TransformParams::new(0.5, 0.8, 1e-5).unwrap();
        let report = closed_form_report(
            ClosedFormKind::MexicanHat,
            &params,
            &[(0.5, 0.2, -0.3), (1.1, -0.4, 0.3)],
        )
        .unwrap();
        assert!(report.max_corrected_rel_err <= 1e-3, "{report:?}");
        assert!(report.printed_form_discrepant);
    }

    #[test]
    fn reduced_forms_symmetric_in_v_and_w() {
        let params = TransformParams::new(0.5, 1.0, 1e-6).unwrap();
        let a = morlet_basic_reduced(5.0, &params, 0.4, 0.7, -0.2).unwrap();
        let b = morlet_basic_reduced(5.0, &params, 0.4, -0.2, 0.7).unwrap();
        assert!((a - b).norm() <= 1e-9 * a.norm().max(1e-12));
        let best = |r: crate::error::Result<Complex64>| match r {
            Ok(z) => z,
            Err(Error::QuadNoConverge { value, .. }) => value,
            Err(e) => panic!("unexpected error {e}"),
        };
        let c = best(mexican_basic_reduced(&params, 0.4, 0.7, -0.2));
        let d = best(mexican_basic_reduced(&params, 0.4, -0.2, 0.7));
        assert!((c - d).norm() <= 1e-9 * c.norm().max(1e-12));
    }
}
