//! Fractional Fourier transform with the Namias kernel
//! `K_theta(u,t) = sqrt((1 - i cot theta)/(2 pi)) exp(i ((u^2+t^2)/2) cot theta - i u t csc theta)`.
//!
//! At `theta = pi/2` this reduces to the unitary Fourier kernel
//! `(2 pi)^{-1/2} e^{-i u t}`, and `K_{-theta} = conj(K_theta)`, so the inverse
//! transform is the transform at the negated angle.

use crate::error::Result;
use crate::signal::{check_angle, SampledSignal, UniformGrid};
use num_complex::Complex64;
use rayon::prelude::*;

/// Transform values on a uniform output grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FrftSpectrum {
    pub v0: f64,
    pub dv: f64,
    pub values: Vec<Complex64>,
}

impl FrftSpectrum {
    pub fn grid(&self) -> UniformGrid {
        UniformGrid { start: self.v0, step: self.dv, len: self.values.len() }
    }

    /// Reinterpret the spectrum as a sampled signal so it can be transformed again.
    pub fn into_signal(self) -> Result<SampledSignal> {
        SampledSignal::new(self.v0, self.dv, self.values)
    }

    pub fn l2_norm(&self) -> f64 {
        let w = |k: usize| {
            if k == 0 || k + 1 == self.values.len() {
                0.5 * self.dv
            } else {
                self.dv
            }
        };
        self.values
            .iter()
            .enumerate()
            .map(|(k, z)| z.norm_sqr() * w(k))
            .sum::<f64>()
            .sqrt()
    }
}

/// Precomputed angle-dependent kernel factors.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KernelAngle {
    pub cot: f64,
    pub csc: f64,
    amp: Complex64,
}

impl KernelAngle {
    pub fn new(theta: f64) -> Result<Self> {
        check_angle(theta)?;
        let cot = theta.cos() / theta.sin();
        let csc = 1.0 / theta.sin();
        let amp = (Complex64::new(1.0, -cot) / (2.0 * std::f64::consts::PI)).sqrt();
        Ok(Self { cot, csc, amp })
    }

    #[inline]
    pub fn eval(&self, u: f64, t: f64) -> Complex64 {
        let phase = 0.5 * (u * u + t * t) * self.cot - u * t * self.csc;
        self.amp * Complex64::new(0.0, phase).exp()
    }
}

/// Transform kernel `K_theta(u, t)`; symmetric in its two arguments.
pub fn frft_kernel(theta: f64, u: f64, t: f64) -> Result<Complex64> {
    Ok(KernelAngle::new(theta)?.eval(u, t))
}

/// Fractional Fourier transform of a sampled signal, evaluated on `out`:
/// `H(v_m) = int h(t) K_theta(v_m, t) dt` by trapezoidal quadrature over the
/// signal grid.
pub fn frft(h: &SampledSignal, theta: f64, out: &UniformGrid) -> Result<FrftSpectrum> {
    let kernel = KernelAngle::new(theta)?;
    let times: Vec<f64> = (0..h.len()).map(|k| h.time(k)).collect();
    let weighted: Vec<Complex64> = h
        .samples
        .iter()
        .enumerate()
        .map(|(k, z)| z * h.weight(k))
        .collect();

    let values: Vec<Complex64> = (0..out.len)
        .into_par_iter()
        .map(|m| {
            let v = out.point(m);
            let mut acc = Complex64::new(0.0, 0.0);
            for (t, wz) in times.iter().zip(&weighted) {
                acc += wz * kernel.eval(v, *t);
            }
            acc
        })
        .collect();
    Ok(FrftSpectrum { v0: out.start, dv: out.step, values })
}
