use frwtk_core::convo::{BasicFunction, ConvolveOptions};
use frwtk_core::*;
use num_complex::Complex64;
use std::time::Instant;

fn main() {
    let grid = UniformGrid::spanning(-3.0, 3.0, 16).unwrap();
    let h = SampledSignal::from_fn(grid, |t| Complex64::new((-t * t).exp(), 0.0)).unwrap();
    let plane = ScaleShiftGrid::log_scales_uniform_shifts(0.9, 1.8, 6, -1.2, 1.2, 12).unwrap();
    let opts = ConvolveOptions { max_samples: 50_000_000, coeff_floor: 1e-4 };
    for tol in [1e-4, 1e-5, 1e-6] {
        let triple = WaveletTriple::uniform(AnalyticWavelet::morlet(5.0).unwrap());
        let params = TransformParams::new(0.5, 0.5, tol).unwrap();
        let engine = BasicFunction::new(triple, params).unwrap();
        let full_grid = engine.convolution_grid(&h, &h, &plane).unwrap();
        let probe = UniformGrid::new(full_grid.start, full_grid.step * (full_grid.len / 12) as f64, 12).unwrap();
        let t0 = Instant::now();
        let conv = engine.convolve(&h, &h, &probe, &opts).unwrap();
        let dt = t0.elapsed().as_secs_f64();
        let est_total = dt / 12.0 * full_grid.len as f64;
        println!(
            "tol {tol:.0e}: full n_u = {}, probe 12 pts took {dt:.1}s -> est full pass {est_total:.0}s, |conv[0]| = {:.3e}",
            full_grid.len,
            conv.samples[0].norm()
        );
    }
}
