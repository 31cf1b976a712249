//! Flat key-value configuration for the verification commands.
//!
//! The file format is one `key = value` pair per line, `#` comments. Unknown
//! keys are rejected so typos fail loudly. Every key has a default; see
//! [`VerifyConfig::default`] for the full list.

use crate::CliError;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub quad_tol: f64,
    pub alpha: f64,
    pub rho: f64,
    pub omega0: f64,
    pub seed: u64,

    pub parseval_rel_err_max: f64,
    pub parseval_a_min: f64,
    pub parseval_a_max: f64,
    pub parseval_n_a: usize,
    pub parseval_b_half: f64,
    pub parseval_n_b: usize,
    pub parseval_signal_n: usize,

    pub inversion_rel_err_max: f64,
    pub inversion_a_min: f64,
    pub inversion_a_max: f64,
    pub inversion_n_a: usize,
    pub inversion_b_half: f64,
    pub inversion_n_b: usize,

    pub frft_route_factored_max: f64,
    pub frft_route_spectral_max: f64,

    pub conv_residual_max: f64,
    pub conv_quad_tol: f64,
    pub conv_signal_n: usize,
    pub conv_u_n: usize,
    pub conv_coeff_floor: f64,

    pub bounds_points: usize,
    pub bounds_exponent: f64,

    pub specfun_series_tol: f64,
    pub specfun_identity_tol: f64,
    pub specfun_gamma_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            quad_tol: 1e-8,
            alpha: 0.5,
            rho: 1.0,
            omega0: 5.0,
            seed: 20260810,

            parseval_rel_err_max: 0.02,
            parseval_a_min: 0.08,
            parseval_a_max: 16.0,
            parseval_n_a: 48,
            parseval_b_half: 28.0,
            parseval_n_b: 800,
            parseval_signal_n: 384,

            inversion_rel_err_max: 0.05,
            inversion_a_min: 0.1,
            inversion_a_max: 16.0,
            inversion_n_a: 18,
            inversion_b_half: 24.0,
            inversion_n_b: 260,

            frft_route_factored_max: 1e-10,
            frft_route_spectral_max: 1e-4,

            conv_residual_max: 1e-2,
            conv_quad_tol: 1e-5,
            conv_signal_n: 12,
            conv_u_n: 96,
            conv_coeff_floor: 1e-4,

            bounds_points: 100,
            bounds_exponent: 2.0,

            specfun_series_tol: 1e-8,
            specfun_identity_tol: 1e-10,
            specfun_gamma_tol: 1e-12,
        }
    }
}

impl VerifyConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected 'key = value'", idx + 1))
            })?;
            map.insert(key.trim().to_string(), (idx + 1, value.trim().to_string()));
        }

        let mut cfg = Self::default();
        let mut take_f64 = |key: &str, slot: &mut f64| -> Result<(), CliError> {
            if let Some((line, value)) = map.remove(key) {
                *slot = value.parse().map_err(|e| {
                    CliError::Config(format!("line {line}: key '{key}': {e}"))
                })?;
            }
            Ok(())
        };

        take_f64("quad_tol", &mut cfg.quad_tol)?;
        take_f64("alpha", &mut cfg.alpha)?;
        take_f64("rho", &mut cfg.rho)?;
        take_f64("omega0", &mut cfg.omega0)?;
        take_f64("parseval.rel_err_max", &mut cfg.parseval_rel_err_max)?;
        take_f64("parseval.a_min", &mut cfg.parseval_a_min)?;
        take_f64("parseval.a_max", &mut cfg.parseval_a_max)?;
        take_f64("parseval.b_half", &mut cfg.parseval_b_half)?;
        take_f64("inversion.rel_err_max", &mut cfg.inversion_rel_err_max)?;
        take_f64("inversion.a_min", &mut cfg.inversion_a_min)?;
        take_f64("inversion.a_max", &mut cfg.inversion_a_max)?;
        take_f64("inversion.b_half", &mut cfg.inversion_b_half)?;
        take_f64("frft_route.factored_max", &mut cfg.frft_route_factored_max)?;
        take_f64("frft_route.spectral_max", &mut cfg.frft_route_spectral_max)?;
        take_f64("convolution.residual_max", &mut cfg.conv_residual_max)?;
        take_f64("convolution.quad_tol", &mut cfg.conv_quad_tol)?;
        take_f64("convolution.coeff_floor", &mut cfg.conv_coeff_floor)?;
        take_f64("bounds.exponent", &mut cfg.bounds_exponent)?;
        take_f64("specfun.series_tol", &mut cfg.specfun_series_tol)?;
        take_f64("specfun.identity_tol", &mut cfg.specfun_identity_tol)?;
        take_f64("specfun.gamma_tol", &mut cfg.specfun_gamma_tol)?;

        let mut take_usize = |key: &str, slot: &mut usize| -> Result<(), CliError> {
            if let Some((line, value)) = map.remove(key) {
                *slot = value.parse().map_err(|e| {
                    CliError::Config(format!("line {line}: key '{key}': {e}"))
                })?;
            }
            Ok(())
        };
        take_usize("parseval.n_a", &mut cfg.parseval_n_a)?;
        take_usize("parseval.n_b", &mut cfg.parseval_n_b)?;
        take_usize("parseval.signal_n", &mut cfg.parseval_signal_n)?;
        take_usize("inversion.n_a", &mut cfg.inversion_n_a)?;
        take_usize("inversion.n_b", &mut cfg.inversion_n_b)?;
        take_usize("convolution.signal_n", &mut cfg.conv_signal_n)?;
        take_usize("convolution.u_n", &mut cfg.conv_u_n)?;
        take_usize("bounds.points", &mut cfg.bounds_points)?;

        if let Some((line, value)) = map.remove("seed") {
            cfg.seed = value
                .parse()
                .map_err(|e| CliError::Config(format!("line {line}: key 'seed': {e}")))?;
        }

        if let Some((key, (line, _))) = map.into_iter().next() {
            return Err(CliError::Config(format!("line {line}: unknown key '{key}'")));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.quad_tol > 0.0) {
            return Err(CliError::Config("quad_tol must be positive".into()));
        }
        if !(self.rho >= 0.0) {
            return Err(CliError::Config("rho must be nonnegative".into()));
        }
        if !(self.omega0 > 0.0) {
            return Err(CliError::Config("omega0 must be positive".into()));
        }
        Ok(())
    }
}
