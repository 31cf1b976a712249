//! Adaptive numerical integration over finite and infinite intervals.
//!
//! Complex-valued integrands are handled natively: each panel carries a 7-point
//! Gauss estimate embedded in a 15-point Kronrod estimate, and the panel with the
//! largest error estimate is bisected until the global estimate meets the target.
//! Infinite ends are folded onto finite parameter ranges with
//! `t = x/(1-x^2)` for the whole line and `t = a + x/(1-x)` for a half line.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicU64, Ordering};

static TOTAL_EVALS: AtomicU64 = AtomicU64::new(0);

/// Running total of integrand evaluations across the process, for reporting.
pub fn total_evaluations() -> u64 {
    TOTAL_EVALS.load(Ordering::Relaxed)
}

/// Integration domain for [`integrate_1d`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain1D {
    /// Closed interval `[lo, hi]`.
    Finite { lo: f64, hi: f64 },
    /// Half line `[from, +inf)`.
    HalfLine { from: f64 },
    /// The whole real line.
    Line,
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub est_error: f64,
    pub evaluations: u64,
}

// 15-point Kronrod abscissae (positive half) with embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const MAX_PANELS: usize = 8192;
const INITIAL_SPLITS: usize = 5;

/// One Gauss-Kronrod pass over `[lo, hi]` in mapped coordinates.
fn gk15<F: Fn(f64) -> Complex64>(f: &F, lo: f64, hi: f64, evals: &mut u64) -> (Complex64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let mut fv = [Complex64::new(0.0, 0.0); 15];
    for (i, &x) in XGK.iter().enumerate() {
        if i == 7 {
            fv[7] = f(center);
        } else {
            fv[i] = f(center - half * x);
            fv[14 - i] = f(center + half * x);
        }
    }
    *evals += 15;
    TOTAL_EVALS.fetch_add(15, Ordering::Relaxed);

    let mut kronrod = Complex64::new(0.0, 0.0);
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut res_abs = 0.0;
    for i in 0..8 {
        let pair = if i == 7 { fv[7] } else { fv[i] + fv[14 - i] };
        let pair_abs = if i == 7 {
            fv[7].norm()
        } else {
            fv[i].norm() + fv[14 - i].norm()
        };
        kronrod += WGK[i] * pair;
        res_abs += WGK[i] * pair_abs;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK[7] * (fv[7] - mean).norm();
    for i in 0..7 {
        res_asc += WGK[i] * ((fv[i] - mean).norm() + (fv[14 - i] - mean).norm());
    }

    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    // QUADPACK-style error damping keeps smooth panels from being over-refined.
    let mut err = ((kronrod - gauss) * half).norm();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if floor > err {
        err = floor;
    }
    (value, err)
}

#[derive(Debug)]
struct Panel {
    lo: f64,
    hi: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Map a point of the finite parameter interval to (t, jacobian).
fn map_point(domain: Domain1D, x: f64) -> (f64, f64) {
    match domain {
        Domain1D::Finite { .. } => (x, 1.0),
        Domain1D::HalfLine { from } => {
            let d = 1.0 - x;
            (from + x / d, 1.0 / (d * d))
        }
        Domain1D::Line => {
            let d = 1.0 - x * x;
            (x / d, (1.0 + x * x) / (d * d))
        }
    }
}

/// Inverse of [`map_point`], used to place seed boundaries.
fn unmap_point(domain: Domain1D, t: f64) -> f64 {
    match domain {
        Domain1D::Finite { .. } => t,
        Domain1D::HalfLine { from } => {
            let s = t - from;
            s / (1.0 + s)
        }
        Domain1D::Line => {
            if t == 0.0 {
                0.0
            } else {
                ((1.0 + 4.0 * t * t).sqrt() - 1.0) / (2.0 * t)
            }
        }
    }
}

fn parameter_range(domain: Domain1D) -> (f64, f64) {
    match domain {
        Domain1D::Finite { lo, hi } => (lo, hi),
        Domain1D::HalfLine { .. } => (0.0, 1.0),
        Domain1D::Line => (-1.0, 1.0),
    }
}

/// Adaptive integration of `f` over `domain` to relative target `tol`.
///
/// Succeeds once the accumulated error estimate drops below
/// `tol * max(1, |value|)`; otherwise returns [`Error::QuadNoConverge`]
/// carrying the best value reached.
pub fn integrate_1d<F>(f: F, domain: Domain1D, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    integrate_1d_seeded(f, domain, tol, &[])
}

/// Like [`integrate_1d`], with extra initial panel boundaries at the given
/// abscissae (in integrand coordinates). Useful when the caller knows where the
/// integrand is localized so early panels cannot miss it.
pub fn integrate_1d_seeded<F>(f: F, domain: Domain1D, tol: f64, seeds: &[f64]) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    integrate_1d_abs(f, domain, tol, tol, seeds, MAX_PANELS)
}

/// Full control over the stopping rule: converges when the error estimate
/// drops below `max(epsabs, epsrel * |value|)`.
pub(crate) fn integrate_1d_abs<F>(
    f: F,
    domain: Domain1D,
    epsrel: f64,
    epsabs: f64,
    seeds: &[f64],
    max_panels: usize,
) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    let tol = epsrel;
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParam(format!("quadrature tol {tol} must be positive")));
    }
    if let Domain1D::Finite { lo, hi } = domain {
        if !(lo < hi) {
            return Err(Error::InvalidParam(format!("empty interval [{lo}, {hi}]")));
        }
    }

    let (plo, phi) = parameter_range(domain);
    let mapped = |x: f64| -> Complex64 {
        let (t, jac) = map_point(domain, x);
        if !t.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        let v = f(t);
        if v == Complex64::new(0.0, 0.0) {
            return v;
        }
        v * jac
    };

    // callers that seed the integrand's features densely enough don't need the
    // uniform warmup panels
    let splits = if seeds.len() >= 3 { 1 } else { INITIAL_SPLITS };
    let mut cuts: Vec<f64> = Vec::with_capacity(splits + seeds.len() + 1);
    for i in 0..=splits {
        cuts.push(plo + (phi - plo) * i as f64 / splits as f64);
    }
    for &s in seeds {
        let x = unmap_point(domain, s);
        if x > plo && x < phi {
            cuts.push(x);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut evals: u64 = 0;
    let mut heap: BinaryHeap<Panel> = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    // panels too narrow to split further; their error is irreducible
    let mut frozen_err = 0.0;

    for w in cuts.windows(2) {
        let (value, err) = gk15(&mapped, w[0], w[1], &mut evals);
        total += value;
        total_err += err;
        heap.push(Panel { lo: w[0], hi: w[1], value, err });
    }

    let min_width = (phi - plo) * 1e-14;
    let converged = |total: Complex64, err: f64| err <= (epsrel * total.norm()).max(epsabs);

    // bail out early when splitting has stopped reducing the estimate, which
    // happens on oscillatory tails the error estimator cannot credit
    let mut stagnation_reference = f64::INFINITY;
    let mut splits: usize = 0;

    while !converged(total, total_err + frozen_err) {
        if heap.len() >= max_panels || heap.is_empty() {
            return Err(Error::QuadNoConverge {
                value: total,
                est_error: total_err + frozen_err,
                evaluations: evals,
            });
        }
        if splits % 256 == 0 {
            let est = total_err + frozen_err;
            if est > 0.98 * stagnation_reference {
                return Err(Error::QuadNoConverge {
                    value: total,
                    est_error: est,
                    evaluations: evals,
                });
            }
            stagnation_reference = est;
        }
        splits += 1;
        let worst = heap.pop().unwrap();
        if worst.hi - worst.lo < min_width {
            total_err -= worst.err;
            frozen_err += worst.err;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        let (v1, e1) = gk15(&mapped, worst.lo, mid, &mut evals);
        let (v2, e2) = gk15(&mapped, mid, worst.hi, &mut evals);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel { lo: worst.lo, hi: mid, value: v1, err: e1 });
        heap.push(Panel { lo: mid, hi: worst.hi, value: v2, err: e2 });
    }

    let est = total_err + frozen_err;
    if !converged(total, est) {
        return Err(Error::QuadNoConverge {
            value: total,
            est_error: est,
            evaluations: evals,
        });
    }
    Ok(QuadResult { value: total, est_error: est, evaluations: evals })
}

/// Iterated 2D integration: the inner axis is integrated at `tol / 10` relative
/// for each outer evaluation. Inner non-convergence is tolerated panel-by-panel
/// (the best inner value is used) but poisons the final result into
/// [`Error::QuadNoConverge`].
///
/// Runs in two passes. A cheap first pass estimates the magnitude of the
/// result; the second pass ties the inner integrals' absolute error floor to
/// that magnitude. Without this, inner evaluations in regions where the inner
/// integral is tiny stop at an absolute floor and the outer integral sweeps up
/// their noise over a long range.
pub fn integrate_2d<F>(f: F, outer: Domain1D, inner: Domain1D, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> Complex64,
{
    integrate_2d_seeded(f, outer, inner, tol, &[], &[])
}

/// [`integrate_2d`] with seed boundaries on both axes.
pub fn integrate_2d_seeded<F>(
    f: F,
    outer: Domain1D,
    inner: Domain1D,
    tol: f64,
    outer_seeds: &[f64],
    inner_seeds: &[f64],
) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> Complex64,
{
    let scale = match iterated_pass(&f, outer, inner, 30.0 * tol, tol, outer_seeds, inner_seeds) {
        Ok(q) => q.value.norm(),
        Err(Error::QuadNoConverge { value, .. }) => value.norm(),
        Err(e) => return Err(e),
    };
    let inner_floor = (tol / 30.0) * scale.max(1e-300);
    iterated_pass(&f, outer, inner, tol, inner_floor, outer_seeds, inner_seeds)
}

fn iterated_pass<F>(
    f: &F,
    outer: Domain1D,
    inner: Domain1D,
    tol: f64,
    inner_floor: f64,
    outer_seeds: &[f64],
    inner_seeds: &[f64],
) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> Complex64,
{
    use std::cell::Cell;
    let inner_evals = Cell::new(0u64);
    let inner_bad = Cell::new(false);

    let outer_fn = |x: f64| -> Complex64 {
        let r = integrate_1d_abs(|y| f(x, y), inner, tol / 10.0, inner_floor, inner_seeds, 4096);
        match r {
            Ok(q) => {
                inner_evals.set(inner_evals.get() + q.evaluations);
                q.value
            }
            Err(Error::QuadNoConverge { value, est_error, evaluations }) => {
                inner_evals.set(inner_evals.get() + evaluations);
                // missing a below-scale floor is fine as long as the iterated
                // contract (tol/10 relative to this inner value) still holds
                if est_error > (tol / 10.0) * value.norm().max(1.0) {
                    inner_bad.set(true);
                }
                value
            }
            Err(_) => {
                inner_bad.set(true);
                Complex64::new(0.0, 0.0)
            }
        }
    };

    let result = integrate_1d_abs(outer_fn, outer, tol, tol, outer_seeds, MAX_PANELS);
    match result {
        Ok(mut q) => {
            q.evaluations += inner_evals.get();
            if inner_bad.get() {
                Err(Error::QuadNoConverge {
                    value: q.value,
                    est_error: q.est_error,
                    evaluations: q.evaluations,
                })
            } else {
                Ok(q)
            }
        }
        Err(Error::QuadNoConverge { value, est_error, evaluations }) => Err(Error::QuadNoConverge {
            value,
            est_error,
            evaluations: evaluations + inner_evals.get(),
        }),
        Err(e) => Err(e),
    }
}
