//! Domain types: sampled signals, analyzing wavelets, transform parameters,
//! scale-shift grids, coefficient planes, and the norms and inner products
//! shared by the rest of the crate.

use crate::error::{Error, Result};
use crate::quad::{self, Domain1D};
use num_complex::Complex64;

/// Sentinel for the supremum norm in [`SampledSignal::lp_norm`] and friends.
pub const P_INF: f64 = f64::INFINITY;

/// Effective support radius of the built-in mother wavelets: both carry a
/// gaussian envelope, so |phi(t)| < 2e-17 beyond |t| = 10.
const WAVELET_SUPPORT: f64 = 10.0;

/// A uniform grid `start + k * step`, `k = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl UniformGrid {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() || !start.is_finite() {
            return Err(Error::InvalidParam(format!(
                "uniform grid needs finite start and step > 0, got start={start} step={step}"
            )));
        }
        if len == 0 {
            return Err(Error::InvalidParam("uniform grid needs len >= 1".into()));
        }
        Ok(Self { start, step, len })
    }

    /// Grid spanning `[lo, hi]` with `len` points.
    pub fn spanning(lo: f64, hi: f64, len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::InvalidParam("spanning grid needs len >= 2".into()));
        }
        Self::new(lo, (hi - lo) / (len - 1) as f64, len)
    }

    pub fn point(&self, k: usize) -> f64 {
        self.start + self.step * k as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|k| self.point(k))
    }

    pub fn end(&self) -> f64 {
        self.point(self.len - 1)
    }
}

/// A uniformly sampled complex-valued function of one real variable.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    pub t0: f64,
    pub dt: f64,
    pub samples: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(t0: f64, dt: f64, samples: Vec<Complex64>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() || !t0.is_finite() {
            return Err(Error::InvalidParam(format!(
                "signal needs finite t0 and dt > 0, got t0={t0} dt={dt}"
            )));
        }
        if samples.is_empty() {
            return Err(Error::InvalidParam("signal needs at least one sample".into()));
        }
        if let Some(bad) = samples.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParam(format!("non-finite sample at index {bad}")));
        }
        Ok(Self { t0, dt, samples })
    }

    /// Build a signal by sampling `f` on `grid`.
    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid.start, grid.step, grid.points().map(f).collect())
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        Self {
            t0: grid.start,
            dt: grid.step,
            samples: vec![Complex64::new(0.0, 0.0); grid.len],
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn grid(&self) -> UniformGrid {
        UniformGrid { start: self.t0, step: self.dt, len: self.samples.len() }
    }

    /// Time of sample `k`.
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + self.dt * k as f64
    }

    /// Linear interpolation between samples; zero outside the grid.
    pub fn value_at(&self, t: f64) -> Complex64 {
        let x = (t - self.t0) / self.dt;
        if x < 0.0 || x > (self.len() - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let k = (x.floor() as usize).min(self.len() - 2);
        let frac = x - k as f64;
        self.samples[k] * (1.0 - frac) + self.samples[k + 1] * frac
    }

    /// Trapezoidal quadrature weight for sample `k`.
    pub fn weight(&self, k: usize) -> f64 {
        if self.len() == 1 {
            self.dt
        } else if k == 0 || k == self.len() - 1 {
            0.5 * self.dt
        } else {
            self.dt
        }
    }

    /// Lp norm on the sample grid by trapezoidal quadrature; `p = P_INF`
    /// returns the supremum of |f| on the grid.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p == P_INF {
            return Ok(self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
        if !(p >= 1.0) {
            return Err(Error::InvalidParam(format!("lp_norm needs p >= 1, got {p}")));
        }
        let mut acc = 0.0;
        for (k, z) in self.samples.iter().enumerate() {
            acc += z.norm().powf(p) * self.weight(k);
        }
        let val = acc.powf(1.0 / p);
        if !val.is_finite() {
            return Err(Error::DivergentNorm);
        }
        Ok(val)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            t0: self.t0,
            dt: self.dt,
            samples: self.samples.iter().map(|z| z * c).collect(),
        }
    }

    /// Relative L2 distance to another signal on the same grid.
    pub fn rel_l2_distance(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        let mut num = 0.0;
        let mut den = 0.0;
        for (k, (a, b)) in self.samples.iter().zip(&other.samples).enumerate() {
            let w = self.weight(k);
            num += (a - b).norm_sqr() * w;
            den += b.norm_sqr() * w;
        }
        Ok(if den == 0.0 { num.sqrt() } else { (num / den).sqrt() })
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.t0 != other.t0 || self.dt != other.dt || self.len() != other.len() {
            return Err(Error::GridMismatch(format!(
                "(t0,dt,n) = ({},{},{}) vs ({},{},{})",
                self.t0,
                self.dt,
                self.len(),
                other.t0,
                other.dt,
                other.len()
            )));
        }
        Ok(())
    }
}

/// Inner product `int h(t) conj(g(t)) dt` by trapezoidal rule on the shared grid.
pub fn inner_product(h: &SampledSignal, g: &SampledSignal) -> Result<Complex64> {
    h.check_same_grid(g)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, (a, b)) in h.samples.iter().zip(&g.samples).enumerate() {
        acc += a * b.conj() * h.weight(k);
    }
    Ok(acc)
}

/// An analyzing mother wavelet.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticWavelet {
    /// `e^{i omega0 t - t^2/2}`
    Morlet { omega0: f64 },
    /// `(1 - t^2) e^{-t^2/2}`
    MexicanHat,
    /// Arbitrary sampled wavelet, linearly interpolated, zero off-grid.
    Tabulated(SampledSignal),
}

impl AnalyticWavelet {
    pub fn morlet(omega0: f64) -> Result<Self> {
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(Error::InvalidParam(format!("Morlet needs omega0 > 0, got {omega0}")));
        }
        Ok(Self::Morlet { omega0 })
    }

    pub fn tabulated(samples: SampledSignal) -> Result<Self> {
        let w = Self::Tabulated(samples);
        // both norms must be finite on the grid; construction already rejects
        // non-finite samples, this catches overflow in the accumulation
        let l1 = w.as_tabulated().unwrap().lp_norm(1.0)?;
        let l2 = w.as_tabulated().unwrap().lp_norm(2.0)?;
        if !l1.is_finite() || !l2.is_finite() {
            return Err(Error::DivergentNorm);
        }
        Ok(w)
    }

    fn as_tabulated(&self) -> Option<&SampledSignal> {
        match self {
            Self::Tabulated(s) => Some(s),
            _ => None,
        }
    }

    /// Point evaluation.
    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            Self::Morlet { omega0 } => {
                Complex64::new(-t * t / 2.0, omega0 * t).exp()
            }
            Self::MexicanHat => Complex64::new((1.0 - t * t) * (-t * t / 2.0).exp(), 0.0),
            Self::Tabulated(s) => s.value_at(t),
        }
    }

    /// Radius beyond which the wavelet is numerically zero.
    pub fn support_radius(&self) -> f64 {
        match self {
            Self::Morlet { .. } | Self::MexicanHat => WAVELET_SUPPORT,
            Self::Tabulated(s) => s.t0.abs().max(s.grid().end().abs()),
        }
    }

    /// Unitary-convention Fourier transform of the wavelet.
    ///
    /// Analytic for the built-in shapes; for tabulated wavelets this evaluates
    /// the trapezoidal transform sum directly at the requested frequency, which
    /// equals the zero-padded discrete transform in the dense-padding limit.
    pub fn fourier_hat(&self, omega: f64) -> Complex64 {
        match self {
            Self::Morlet { omega0 } => {
                let d = omega - omega0;
                Complex64::new((-d * d / 2.0).exp(), 0.0)
            }
            Self::MexicanHat => Complex64::new(omega * omega * (-omega * omega / 2.0).exp(), 0.0),
            Self::Tabulated(s) => {
                let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, z) in s.samples.iter().enumerate() {
                    let t = s.time(k);
                    acc += z * Complex64::new(0.0, -omega * t).exp() * s.weight(k);
                }
                acc * norm
            }
        }
    }

    /// Lp norm over the real line; quadrature at relative target `tol`.
    /// `p = P_INF` returns the sup over a dense probe grid.
    pub fn lp_norm(&self, p: f64, tol: f64) -> Result<f64> {
        // (1 + |z|^0) doubles the function, so halve the rho = 0 weighted norm
        self.weighted_norm(0.0, p, tol).map(|v| v / 2.0)
    }

    /// Weighted norm `|| (1 + |z|^rho) f(z) ||_p`.
    ///
    /// Analytic shapes go through adaptive quadrature; tabulated wavelets are
    /// integrated with the trapezoid rule on their own grid, since the sampled
    /// data is the function (the interpolant's kinks defeat high-accuracy
    /// adaptive refinement without adding information).
    pub fn weighted_norm(&self, rho: f64, p: f64, tol: f64) -> Result<f64> {
        if !(rho >= 0.0) {
            return Err(Error::InvalidParam(format!("weighted_norm needs rho >= 0, got {rho}")));
        }
        let weight = |z: f64| 1.0 + z.abs().powf(rho);
        if p == P_INF {
            let r = self.support_radius();
            let n = 8192;
            let mut sup = 0.0f64;
            for i in 0..=n {
                let z = -r + 2.0 * r * i as f64 / n as f64;
                sup = sup.max(weight(z) * self.eval(z).norm());
            }
            return Ok(sup);
        }
        if !(p >= 1.0) {
            return Err(Error::InvalidParam(format!("weighted_norm needs p >= 1, got {p}")));
        }
        if let Self::Tabulated(s) = self {
            let mut acc = 0.0;
            for (k, z) in s.samples.iter().enumerate() {
                acc += (weight(s.time(k)) * z.norm()).powf(p) * s.weight(k);
            }
            let val = acc.powf(1.0 / p);
            if !val.is_finite() {
                return Err(Error::DivergentNorm);
            }
            return Ok(val);
        }
        let r = self.support_radius();
        let integrand =
            |z: f64| Complex64::new((weight(z) * self.eval(z).norm()).powf(p), 0.0);
        let result = quad::integrate_1d_seeded(
            integrand,
            Domain1D::Finite { lo: -r, hi: r },
            tol,
            &[-1.0, 0.0, 1.0],
        )
        .map_err(|e| match e {
            Error::QuadNoConverge { .. } => Error::DivergentNorm,
            other => other,
        })?;
        let val = result.value.re.powf(1.0 / p);
        if !val.is_finite() {
            return Err(Error::DivergentNorm);
        }
        Ok(val)
    }
}

/// Parameters of the fractional transform family.
///
/// The angle is tied to the fractional order by `theta = alpha * pi / 2`;
/// angles within 1e-6 of a multiple of pi are rejected outright rather than
/// approximated, since cot and csc degenerate there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformParams {
    pub alpha: f64,
    pub theta: f64,
    pub rho: f64,
    pub quad_tol: f64,
}

const ANGLE_REJECT_WINDOW: f64 = 1e-6;
// cot(pi/2) evaluates to ~6.1e-17 in f64; snap below this so the alpha = 1
// chirp factor is identically one.
const COT_SNAP: f64 = 1e-14;

impl TransformParams {
    pub fn new(alpha: f64, rho: f64, quad_tol: f64) -> Result<Self> {
        let theta = alpha * std::f64::consts::FRAC_PI_2;
        Self::from_angle(alpha, theta, rho, quad_tol)
    }

    fn from_angle(alpha: f64, theta: f64, rho: f64, quad_tol: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidParam(format!("non-finite angle {theta}")));
        }
        check_angle(theta)?;
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(Error::InvalidParam(format!("rho must be >= 0, got {rho}")));
        }
        if !(quad_tol > 0.0) || !quad_tol.is_finite() {
            return Err(Error::InvalidParam(format!("quad_tol must be positive, got {quad_tol}")));
        }
        Ok(Self { alpha, theta, rho, quad_tol })
    }

    pub fn cot_theta(&self) -> f64 {
        let c = self.theta.cos() / self.theta.sin();
        if c.abs() < COT_SNAP {
            0.0
        } else {
            c
        }
    }

    pub fn csc_theta(&self) -> f64 {
        1.0 / self.theta.sin()
    }
}

/// Reject angles where the chirp coefficients degenerate.
pub(crate) fn check_angle(theta: f64) -> Result<()> {
    let r = theta.rem_euclid(std::f64::consts::PI);
    if r.min(std::f64::consts::PI - r) < ANGLE_REJECT_WINDOW {
        return Err(Error::SingularAngle { theta });
    }
    Ok(())
}

/// Strictly increasing positive scales and uniformly spaced shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleShiftGrid {
    scales: Vec<f64>,
    shifts: Vec<f64>,
}

impl ScaleShiftGrid {
    pub fn new(scales: Vec<f64>, shifts: Vec<f64>) -> Result<Self> {
        if scales.is_empty() || shifts.is_empty() {
            return Err(Error::InvalidParam("grid needs at least one scale and shift".into()));
        }
        for pair in scales.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::InvalidParam(
                    "scales must be strictly increasing".into(),
                ));
            }
        }
        if !(scales[0] > 0.0) || !scales.iter().all(|a| a.is_finite()) {
            return Err(Error::InvalidParam("scales must be positive and finite".into()));
        }
        if shifts.len() > 1 {
            let db = shifts[1] - shifts[0];
            if !(db > 0.0) {
                return Err(Error::InvalidParam("shifts must be increasing".into()));
            }
            for (k, pair) in shifts.windows(2).enumerate() {
                let step = pair[1] - pair[0];
                if (step - db).abs() > 1e-9 * db.abs() {
                    return Err(Error::InvalidParam(format!(
                        "shifts must be uniformly spaced (step {step} at index {k} vs {db})"
                    )));
                }
            }
        }
        Ok(Self { scales, shifts })
    }

    /// Log-spaced scales over `[a_min, a_max]` and uniform shifts over
    /// `[b_min, b_max]`.
    pub fn log_scales_uniform_shifts(
        a_min: f64,
        a_max: f64,
        n_a: usize,
        b_min: f64,
        b_max: f64,
        n_b: usize,
    ) -> Result<Self> {
        if !(a_min > 0.0) || !(a_max > a_min) {
            return Err(Error::InvalidParam(format!(
                "need 0 < a_min < a_max, got [{a_min}, {a_max}]"
            )));
        }
        if n_a < 1 || n_b < 1 {
            return Err(Error::InvalidParam("need n_a >= 1 and n_b >= 1".into()));
        }
        let scales = if n_a == 1 {
            vec![a_min]
        } else {
            let (lo, hi) = (a_min.ln(), a_max.ln());
            (0..n_a)
                .map(|j| (lo + (hi - lo) * j as f64 / (n_a - 1) as f64).exp())
                .collect()
        };
        let shifts = if n_b == 1 {
            vec![b_min]
        } else {
            (0..n_b)
                .map(|k| b_min + (b_max - b_min) * k as f64 / (n_b - 1) as f64)
                .collect()
        };
        Self::new(scales, shifts)
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }

    pub fn n_scales(&self) -> usize {
        self.scales.len()
    }

    pub fn n_shifts(&self) -> usize {
        self.shifts.len()
    }

    /// Trapezoid weights for the shift axis.
    pub fn shift_weights(&self) -> Vec<f64> {
        trapezoid_weights(&self.shifts)
    }

    /// Quadrature weights for `int f(a) a^{2 rho - 3} da` over the scale range:
    /// trapezoid in s = ln a, so each scale contributes `w_s * a^{2 rho - 2}`.
    pub fn scale_measure_weights(&self, rho: f64) -> Vec<f64> {
        let logs: Vec<f64> = self.scales.iter().map(|a| a.ln()).collect();
        trapezoid_weights(&logs)
            .iter()
            .zip(&self.scales)
            .map(|(w, a)| w * a.powf(2.0 * rho - 2.0))
            .collect()
    }
}

fn trapezoid_weights(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    if n == 1 {
        return vec![1.0];
    }
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let h = 0.5 * (xs[i + 1] - xs[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    w
}

/// Transform values W(a_j, b_k) on a scale-shift grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPlane {
    pub grid: ScaleShiftGrid,
    values: Vec<Complex64>,
    pub rho: f64,
}

impl CoefficientPlane {
    pub fn new(grid: ScaleShiftGrid, values: Vec<Complex64>, rho: f64) -> Result<Self> {
        if values.len() != grid.n_scales() * grid.n_shifts() {
            return Err(Error::InvalidParam(format!(
                "plane shape mismatch: {} values for {} x {} grid",
                values.len(),
                grid.n_scales(),
                grid.n_shifts()
            )));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParam("non-finite plane value".into()));
        }
        Ok(Self { grid, values, rho })
    }

    pub fn value(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.grid.n_shifts() + k]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn row(&self, j: usize) -> &[Complex64] {
        let nb = self.grid.n_shifts();
        &self.values[j * nb..(j + 1) * nb]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Relative L2 distance under the plane measure `a^{2 rho - 3} db da`.
    pub fn rel_l2_distance(&self, other: &Self) -> f64 {
        let wa = self.grid.scale_measure_weights(self.rho);
        let wb = self.grid.shift_weights();
        let nb = self.grid.n_shifts();
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..self.grid.n_scales() {
            for k in 0..nb {
                let w = wa[j] * wb[k];
                num += (self.values[j * nb + k] - other.values[j * nb + k]).norm_sqr() * w;
                den += other.values[j * nb + k].norm_sqr() * w;
            }
        }
        if den == 0.0 {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    }
}

/// The three analyzing wavelets entering the basic-function integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletTriple {
    pub psi: AnalyticWavelet,
    pub chi: AnalyticWavelet,
    pub phi: AnalyticWavelet,
}

impl WaveletTriple {
    pub fn new(psi: AnalyticWavelet, chi: AnalyticWavelet, phi: AnalyticWavelet) -> Self {
        Self { psi, chi, phi }
    }

    /// All three wavelets set to the same mother.
    pub fn uniform(w: AnalyticWavelet) -> Self {
        Self { psi: w.clone(), chi: w.clone(), phi: w }
    }
}
