//! Command line front end: signal generation, transforms, convolution,
//! verification reports, and file I/O. `frwtk --help` lists the subcommands.

pub mod checks;
pub mod config;
pub mod csv_io;
pub mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::VerifyConfig;
use frwtk_core::convo::{basic_function, BasicFunction, ConvolveOptions};
use frwtk_core::{
    forward, inverse, AnalyticWavelet, Error as CoreError, SampledSignal, ScaleShiftGrid,
    TransformParams, UniformGrid, WaveletTriple,
};
use num_complex::Complex64;
use serde_json::json;
use std::path::{Path, PathBuf};

/// Exit codes: 1 check failed, 2 invalid configuration or input, 3 numeric
/// non-convergence.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Config(String),
    Numeric(String),
    CheckFailed,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::CheckFailed => write!(f, "verification check failed"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed => 1,
            CliError::Io(_) | CliError::Parse(_) | CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::QuadNoConverge { .. }
            | CoreError::NoConverge { .. }
            | CoreError::DivergentNorm => CliError::Numeric(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "frwtk", about = "Fractional wavelet transform toolkit", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a test signal as CSV.
    Gen(GenArgs),
    /// Transform a signal into a scale-shift coefficient plane.
    Transform(TransformArgs),
    /// Synthesize a signal back from a coefficient plane.
    Inverse(InverseArgs),
    /// Convolve two signals through the kernel of a wavelet triple.
    Convolve(ConvolveArgs),
    /// Evaluate the kernel D(u,v,w) at given points.
    Basicfn(BasicfnArgs),
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SignalKind {
    Gaussian,
    Chirp,
    Bump,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct GenArgs {
    /// Signal family.
    pub kind: SignalKind,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = -8.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 8.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1.0)]
    pub amp: f64,
    #[arg(long, default_value_t = 0.0)]
    pub center: f64,
    /// Gaussian width (gaussian, chirp) or support half-width (bump).
    #[arg(long, default_value_t = 2.0)]
    pub width: f64,
    /// Carrier frequency (chirp).
    #[arg(long, default_value_t = 1.5)]
    pub f0: f64,
    /// Frequency sweep rate (chirp).
    #[arg(long, default_value_t = 0.7)]
    pub rate: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct TransformArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// morlet:OMEGA0 | mexican | file:PATH
    #[arg(long)]
    pub wavelet: String,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// a_min,a_max,n_a,b_min,b_max,n_b
    #[arg(long)]
    pub grid: String,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct InverseArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub wavelet: String,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = -8.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 8.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct ConvolveArgs {
    /// First input (paired with the integration over w).
    #[arg(long = "in1")]
    pub input1: PathBuf,
    /// Second input (paired with the integration over v).
    #[arg(long = "in2")]
    pub input2: PathBuf,
    /// Analysis wavelet phi; also psi and chi unless overridden.
    #[arg(long)]
    pub wavelet: String,
    #[arg(long)]
    pub psi: Option<String>,
    #[arg(long)]
    pub chi: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    #[arg(long, default_value_t = -8.0)]
    pub u_min: f64,
    #[arg(long, default_value_t = 8.0)]
    pub u_max: f64,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Cap on kernel evaluations.
    #[arg(long, default_value_t = 5_000_000)]
    pub budget: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct BasicfnArgs {
    #[arg(long)]
    pub wavelet: String,
    #[arg(long)]
    pub psi: Option<String>,
    #[arg(long)]
    pub chi: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Evaluation point u,v,w; repeatable.
    #[arg(long = "point", required = true)]
    pub points: Vec<String>,
    /// Optional JSON output path (stdout otherwise).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum CheckName {
    Parseval,
    Inversion,
    FrftRoute,
    ConvolutionTheorem,
    Bounds,
    Specfun,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub check: CheckName,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Report file; the report always goes to stdout as well.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_wavelet(spec: &str) -> Result<AnalyticWavelet, CliError> {
    if spec == "mexican" {
        return Ok(AnalyticWavelet::MexicanHat);
    }
    if let Some(rest) = spec.strip_prefix("morlet:") {
        let omega0: f64 = rest
            .parse()
            .map_err(|e| CliError::Config(format!("wavelet '{spec}': {e}")))?;
        return Ok(AnalyticWavelet::morlet(omega0)?);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let signal = csv_io::read_signal(Path::new(path))?;
        return Ok(AnalyticWavelet::tabulated(signal)?);
    }
    Err(CliError::Config(format!(
        "wavelet '{spec}' not recognized; expected morlet:OMEGA0, mexican, or file:PATH"
    )))
}

fn parse_grid(spec: &str) -> Result<ScaleShiftGrid, CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 6 {
        return Err(CliError::Config(format!(
            "grid '{spec}': expected a_min,a_max,n_a,b_min,b_max,n_b"
        )));
    }
    let f = |i: usize| -> Result<f64, CliError> {
        parts[i]
            .trim()
            .parse()
            .map_err(|e| CliError::Config(format!("grid field {}: {e}", i + 1)))
    };
    let u = |i: usize| -> Result<usize, CliError> {
        parts[i]
            .trim()
            .parse()
            .map_err(|e| CliError::Config(format!("grid field {}: {e}", i + 1)))
    };
    Ok(ScaleShiftGrid::log_scales_uniform_shifts(f(0)?, f(1)?, u(2)?, f(3)?, f(4)?, u(5)?)?)
}

pub fn generate_signal(args: &GenArgs) -> Result<SampledSignal, CliError> {
    let grid = UniformGrid::spanning(args.t_min, args.t_max, args.n)?;
    let (amp, c, w) = (args.amp, args.center, args.width);
    let signal = match args.kind {
        SignalKind::Gaussian => SampledSignal::from_fn(grid, |t| {
            let x = (t - c) / w;
            Complex64::new(amp * (-x * x / 2.0).exp(), 0.0)
        })?,
        SignalKind::Chirp => {
            let (f0, rate) = (args.f0, args.rate);
            SampledSignal::from_fn(grid, |t| {
                let x = (t - c) / w;
                let envelope = amp * (-x * x / 2.0).exp();
                envelope * Complex64::new(0.0, f0 * (t - c) + 0.5 * rate * (t - c) * (t - c)).exp()
            })?
        }
        SignalKind::Bump => SampledSignal::from_fn(grid, |t| {
            let x = (t - c) / w;
            if x.abs() >= 1.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(amp * (1.0 - 1.0 / (1.0 - x * x)).exp(), 0.0)
            }
        })?,
    };
    Ok(signal)
}

fn triple_from_args(
    wavelet: &str,
    psi: &Option<String>,
    chi: &Option<String>,
) -> Result<WaveletTriple, CliError> {
    let phi = parse_wavelet(wavelet)?;
    let psi = match psi {
        Some(spec) => parse_wavelet(spec)?,
        None => phi.clone(),
    };
    let chi = match chi {
        Some(spec) => parse_wavelet(spec)?,
        None => phi.clone(),
    };
    Ok(WaveletTriple::new(psi, chi, phi))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(args) => {
            let signal = generate_signal(&args)?;
            csv_io::write_signal(&args.out, &signal)
        }
        Command::Transform(args) => {
            let signal = csv_io::read_signal(&args.input)?;
            let wavelet = parse_wavelet(&args.wavelet)?;
            let params = TransformParams::new(args.alpha, args.rho, args.tol)?;
            let grid = parse_grid(&args.grid)?;
            let plane = forward(&signal, &wavelet, &params, &grid)?;
            csv_io::write_plane(&args.out, &plane)
        }
        Command::Inverse(args) => {
            let plane_file = csv_io::read_plane(&args.input)?;
            let wavelet = parse_wavelet(&args.wavelet)?;
            let params = TransformParams::new(args.alpha, args.rho, args.tol)?;
            let plane = frwtk_core::CoefficientPlane::new(
                plane_file.grid.clone(),
                plane_file.values().to_vec(),
                params.rho,
            )?;
            let out_grid = UniformGrid::spanning(args.t_min, args.t_max, args.n)?;
            let signal = inverse(&plane, &wavelet, &params, &out_grid)?;
            csv_io::write_signal(&args.out, &signal)
        }
        Command::Convolve(args) => {
            let h = csv_io::read_signal(&args.input1)?;
            let g = csv_io::read_signal(&args.input2)?;
            let triple = triple_from_args(&args.wavelet, &args.psi, &args.chi)?;
            let params = TransformParams::new(args.alpha, args.rho, args.tol)?;
            let engine = BasicFunction::new(triple, params)?;
            let u_grid = UniformGrid::spanning(args.u_min, args.u_max, args.n)?;
            let opts = ConvolveOptions {
                max_samples: args.budget,
                coeff_floor: 0.0,
                ..Default::default()
            };
            let conv = engine.convolve(&h, &g, &u_grid, &opts)?;
            csv_io::write_signal(&args.out, &conv)
        }
        Command::Basicfn(args) => {
            let triple = triple_from_args(&args.wavelet, &args.psi, &args.chi)?;
            let params = TransformParams::new(args.alpha, args.rho, args.tol)?;
            let mut rows = Vec::new();
            for spec in &args.points {
                let parts: Vec<&str> = spec.split(',').collect();
                if parts.len() != 3 {
                    return Err(CliError::Config(format!("point '{spec}': expected u,v,w")));
                }
                let mut vals = [0.0f64; 3];
                for (i, p) in parts.iter().enumerate() {
                    vals[i] = p.trim().parse().map_err(|e| {
                        CliError::Config(format!("point '{spec}' field {}: {e}", i + 1))
                    })?;
                }
                let s = basic_function(&triple, &params, vals[0], vals[1], vals[2])?;
                rows.push(json!({
                    "u": s.u, "v": s.v, "w": s.w,
                    "re": s.value.re, "im": s.value.im,
                    "est_error": s.est_error,
                }));
            }
            let doc = serde_json::to_string_pretty(&json!({ "points": rows }))
                .expect("json serialization");
            match &args.out {
                Some(path) => std::fs::write(path, doc)
                    .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display()))),
                None => {
                    println!("{doc}");
                    Ok(())
                }
            }
        }
        Command::Verify(args) => {
            let cfg = match &args.config {
                Some(path) => VerifyConfig::load(path)?,
                None => VerifyConfig::default(),
            };
            let report = match args.check {
                CheckName::Parseval => checks::check_parseval(&cfg)?,
                CheckName::Inversion => checks::check_inversion(&cfg)?,
                CheckName::FrftRoute => checks::check_frft_route(&cfg)?,
                CheckName::ConvolutionTheorem => checks::check_convolution_theorem(&cfg)?,
                CheckName::Bounds => checks::check_bounds(&cfg)?,
                CheckName::Specfun => checks::check_specfun(&cfg)?,
            };
            let doc = report.to_json();
            println!("{doc}");
            if let Some(path) = &args.out {
                std::fs::write(path, &doc)
                    .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
            }
            if report.pass {
                Ok(())
            } else {
                Err(CliError::CheckFailed)
            }
        }
    }
}
