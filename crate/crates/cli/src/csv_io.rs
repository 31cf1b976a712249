//! Signal and plane CSV files.
//!
//! Signals carry the header `t,re,im`, planes `a,b,re,im` (scale-major rows).
//! Values are written with 17 significant digits so a read of a write
//! reproduces every f64 bit-exactly.

use crate::CliError;
use frwtk_core::{CoefficientPlane, SampledSignal, ScaleShiftGrid};
use num_complex::Complex64;
use std::fmt::Write as _;
use std::path::Path;

const GRID_REL_TOL: f64 = 1e-9;

pub fn format_signal(signal: &SampledSignal) -> String {
    let mut out = String::with_capacity(signal.len() * 64 + 16);
    out.push_str("t,re,im\n");
    for (k, z) in signal.samples.iter().enumerate() {
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", signal.time(k), z.re, z.im);
    }
    out
}

pub fn write_signal(path: &Path, signal: &SampledSignal) -> Result<(), CliError> {
    std::fs::write(path, format_signal(signal))
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

pub fn format_plane(plane: &CoefficientPlane) -> String {
    let grid = &plane.grid;
    let mut out = String::with_capacity(grid.n_scales() * grid.n_shifts() * 80 + 16);
    out.push_str("a,b,re,im\n");
    for (j, &a) in grid.scales().iter().enumerate() {
        for (k, &b) in grid.shifts().iter().enumerate() {
            let z = plane.value(j, k);
            let _ = writeln!(out, "{a:.16e},{b:.16e},{:.16e},{:.16e}", z.re, z.im);
        }
    }
    out
}

pub fn write_plane(path: &Path, plane: &CoefficientPlane) -> Result<(), CliError> {
    std::fs::write(path, format_plane(plane))
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

fn parse_fields<const N: usize>(path: &Path, lineno: usize, line: &str) -> Result<[f64; N], CliError> {
    let mut out = [0.0; N];
    let mut fields = line.split(',');
    for (i, slot) in out.iter_mut().enumerate() {
        let raw = fields.next().ok_or_else(|| {
            CliError::Parse(format!(
                "{}:{lineno}: expected {N} comma-separated fields, found {i}",
                path.display()
            ))
        })?;
        *slot = raw.trim().parse::<f64>().map_err(|e| {
            CliError::Parse(format!("{}:{lineno}: field {}: {e}", path.display(), i + 1))
        })?;
    }
    if fields.next().is_some() {
        return Err(CliError::Parse(format!(
            "{}:{lineno}: more than {N} fields",
            path.display()
        )));
    }
    Ok(out)
}

pub fn read_signal(path: &Path) -> Result<SampledSignal, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "t,re,im" => {}
        Some((_, header)) => {
            return Err(CliError::Parse(format!(
                "{}:1: expected header 't,re,im', found '{header}'",
                path.display()
            )))
        }
        None => return Err(CliError::Parse(format!("{}: empty file", path.display()))),
    }

    let mut times = Vec::new();
    let mut samples = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let [t, re, im] = parse_fields(path, idx + 1, line)?;
        times.push(t);
        samples.push(Complex64::new(re, im));
    }
    if times.is_empty() {
        return Err(CliError::Parse(format!("{}: no samples", path.display())));
    }
    let t0 = times[0];
    let dt = if times.len() > 1 { times[1] - times[0] } else { 1.0 };
    if !(dt > 0.0) {
        return Err(CliError::Parse(format!(
            "{}: sample times must be strictly increasing",
            path.display()
        )));
    }
    for (k, &t) in times.iter().enumerate() {
        let expected = t0 + dt * k as f64;
        if (t - expected).abs() > GRID_REL_TOL * dt.abs().max(t0.abs()).max(1.0) {
            return Err(CliError::Parse(format!(
                "{}:{}: non-uniform sample time {t} (expected {expected})",
                path.display(),
                k + 2
            )));
        }
    }
    SampledSignal::new(t0, dt, samples)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn read_plane(path: &Path) -> Result<CoefficientPlane, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "a,b,re,im" => {}
        Some((_, header)) => {
            return Err(CliError::Parse(format!(
                "{}:1: expected header 'a,b,re,im', found '{header}'",
                path.display()
            )))
        }
        None => return Err(CliError::Parse(format!("{}: empty file", path.display()))),
    }

    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let [a, b, re, im] = parse_fields(path, idx + 1, line)?;
        rows.push((a, b, Complex64::new(re, im)));
    }
    if rows.is_empty() {
        return Err(CliError::Parse(format!("{}: no values", path.display())));
    }

    let mut scales = Vec::new();
    for (a, _, _) in &rows {
        if scales.last() != Some(a) {
            scales.push(*a);
        }
    }
    let n_b = rows.len() / scales.len();
    if n_b * scales.len() != rows.len() {
        return Err(CliError::Parse(format!(
            "{}: ragged plane ({} rows over {} scales)",
            path.display(),
            rows.len(),
            scales.len()
        )));
    }
    let shifts: Vec<f64> = rows[..n_b].iter().map(|(_, b, _)| *b).collect();
    for (i, (a, b, _)) in rows.iter().enumerate() {
        let (j, k) = (i / n_b, i % n_b);
        if *a != scales[j] || *b != shifts[k] {
            return Err(CliError::Parse(format!(
                "{}:{}: plane rows must enumerate shifts within each scale",
                path.display(),
                i + 2
            )));
        }
    }
    let values: Vec<Complex64> = rows.iter().map(|(_, _, z)| *z).collect();
    // rho is not part of the file; the caller supplies it with the transform
    // parameters when the plane is consumed
    let grid = ScaleShiftGrid::new(scales, shifts)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    CoefficientPlane::new(grid, values, 0.0)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}
