//! Run configuration: JSON document, defaults and validation.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;
use tra_spectrum::cs::{StabilityOptions, DEFAULT_TOL, DEFAULT_TOL_BOUND};
use tra_spectrum::pps::{default_eps_min, PpsOptions, DEFAULT_EPS_MAX, DEFAULT_GRID};
use tra_spectrum::PotentialParams;

pub const DEFAULT_N: usize = 50;
pub const DEFAULT_RHO: f64 = 20.0;
pub const DEFAULT_THETA: f64 = 0.8;
pub const DEFAULT_OUT: &str = "out";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("invalid value for `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawPps {
    eps_min: Option<f64>,
    grid: Option<usize>,
    curves: Option<usize>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawHd {
    kquad: Option<usize>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawCs {
    rho: Option<f64>,
    theta: Option<f64>,
    kquad: Option<usize>,
    drho: Option<f64>,
    dtheta: Option<f64>,
    tol: Option<f64>,
    tol_bound: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    v1_from: f64,
    v1_to: f64,
    frames: usize,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawWavefunction {
    level: Option<usize>,
    terms: Option<usize>,
    scan: Option<usize>,
    r_max: Option<f64>,
    points: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    lambda: Option<f64>,
    u: [f64; 3],
    ell: Option<u32>,
    #[serde(rename = "N")]
    n: Option<usize>,
    #[serde(default)]
    pps: RawPps,
    #[serde(default)]
    hd: RawHd,
    #[serde(default)]
    cs: RawCs,
    sweep: Option<RawSweep>,
    #[serde(default)]
    wavefunction: RawWavefunction,
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PpsSettings {
    pub eps_min: f64,
    pub grid: usize,
    pub curves: usize,
}

impl PpsSettings {
    pub fn options(&self) -> PpsOptions {
        PpsOptions {
            eps_min: Some(self.eps_min),
            eps_max: DEFAULT_EPS_MAX,
            grid_size: self.grid,
            curves: Some(self.curves),
            ..PpsOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsSettings {
    pub rho: f64,
    pub theta: f64,
    pub kquad: usize,
    pub stability: StabilityOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub v1_from: f64,
    pub v1_to: f64,
    pub frames: usize,
}

impl SweepSettings {
    /// Evenly spaced physical `V1` values, endpoints included.
    pub fn grid(&self) -> Vec<f64> {
        if self.frames == 1 {
            return vec![self.v1_from];
        }
        let step = (self.v1_to - self.v1_from) / (self.frames - 1) as f64;
        (0..self.frames)
            .map(|k| self.v1_from + step * k as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionSettings {
    /// `None` writes every level.
    pub level: Option<usize>,
    /// `None` uses the term count with the smallest relative change.
    pub terms: Option<usize>,
    pub scan: usize,
    pub r_max: f64,
    pub points: usize,
}

/// Fully validated configuration with defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub lambda: f64,
    pub u: [f64; 3],
    pub ell: u32,
    pub n: usize,
    pub pps: PpsSettings,
    pub hd_kquad: usize,
    pub cs: CsSettings,
    pub sweep: Option<SweepSettings>,
    pub wavefunction: WavefunctionSettings,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn potential(&self) -> PotentialParams {
        PotentialParams::from_reduced(self.lambda, self.u).expect("validated at load time")
    }
}

/// Parse `text` as a JSON configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    validate(raw)
}

/// Load from a file path, or parse the argument itself when it starts with `{`.
pub fn load_config(path_or_inline: &str) -> Result<RunConfig, ConfigError> {
    if path_or_inline.trim_start().starts_with('{') {
        return parse_config(path_or_inline);
    }
    let path = Path::new(path_or_inline);
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

fn finite(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(field, format!("{v} is not finite")))
    }
}

fn validate(raw: RawConfig) -> Result<RunConfig, ConfigError> {
    let lambda = raw.lambda.unwrap_or(1.0);
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid("lambda", format!("must be > 0, got {lambda}")));
    }
    let [u0, u1, u2] = raw.u;
    if !(u0 > 0.0 && u0.is_finite()) {
        return Err(invalid("u[0]", format!("must be > 0 (V0 > 0), got {u0}")));
    }
    finite("u[1]", u1)?;
    finite("u[2]", u2)?;
    let n = raw.n.unwrap_or(DEFAULT_N);
    if n == 0 {
        return Err(invalid("N", "must be ≥ 1"));
    }

    let eps_min = raw
        .pps
        .eps_min
        .unwrap_or_else(|| default_eps_min(u0, u1, u2));
    if !(eps_min < DEFAULT_EPS_MAX) {
        return Err(invalid(
            "pps.eps_min",
            format!("must be < {DEFAULT_EPS_MAX}, got {eps_min}"),
        ));
    }
    let grid = raw.pps.grid.unwrap_or(DEFAULT_GRID);
    if grid < 4 {
        return Err(invalid(
            "pps.grid",
            format!("need at least 4 points, got {grid}"),
        ));
    }
    let curves = raw.pps.curves.unwrap_or(n);
    if curves == 0 || curves > n {
        return Err(invalid(
            "pps.curves",
            format!("must lie in 1..={n}, got {curves}"),
        ));
    }

    let hd_kquad = raw.hd.kquad.unwrap_or(n);
    if hd_kquad < n {
        return Err(invalid(
            "hd.kquad",
            format!("must be ≥ N = {n}, got {hd_kquad}"),
        ));
    }

    let rho = raw.cs.rho.unwrap_or(DEFAULT_RHO);
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(invalid("cs.rho", format!("must be > 0, got {rho}")));
    }
    let theta = raw.cs.theta.unwrap_or(DEFAULT_THETA);
    if !(0.0..FRAC_PI_2).contains(&theta) {
        return Err(invalid(
            "cs.theta",
            format!("must lie in [0, π/2), got {theta}"),
        ));
    }
    let kquad = raw.cs.kquad.unwrap_or(n + 20);
    if kquad < n + 10 {
        return Err(invalid(
            "cs.kquad",
            format!("must be ≥ N + 10 = {}, got {kquad}", n + 10),
        ));
    }
    let defaults = StabilityOptions::default();
    let drho = finite("cs.drho", raw.cs.drho.unwrap_or(defaults.drho))?;
    if drho <= -1.0 {
        return Err(invalid("cs.drho", format!("must exceed −1, got {drho}")));
    }
    let dtheta = finite("cs.dtheta", raw.cs.dtheta.unwrap_or(defaults.dtheta))?;
    if dtheta.abs() >= FRAC_PI_2 {
        return Err(invalid(
            "cs.dtheta",
            format!("must be smaller than π/2 in magnitude, got {dtheta}"),
        ));
    }
    if drho == 0.0 && dtheta == 0.0 {
        return Err(invalid("cs.drho", "drho and dtheta cannot both be zero"));
    }
    let tol = raw.cs.tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0) {
        return Err(invalid("cs.tol", format!("must be > 0, got {tol}")));
    }
    let tol_bound = raw.cs.tol_bound.unwrap_or(DEFAULT_TOL_BOUND);
    if !(tol_bound > 0.0) {
        return Err(invalid(
            "cs.tol_bound",
            format!("must be > 0, got {tol_bound}"),
        ));
    }

    let sweep = match raw.sweep {
        Some(s) => {
            finite("sweep.v1_from", s.v1_from)?;
            finite("sweep.v1_to", s.v1_to)?;
            if s.frames == 0 {
                return Err(invalid("sweep.frames", "must be ≥ 1"));
            }
            Some(SweepSettings {
                v1_from: s.v1_from,
                v1_to: s.v1_to,
                frames: s.frames,
            })
        }
        None => None,
    };

    let w = raw.wavefunction;
    let scan = w.scan.unwrap_or(30);
    if !(3..=tra_spectrum::tra::MAX_RECURSION_TERMS).contains(&scan) {
        return Err(invalid(
            "wavefunction.scan",
            format!("must lie in 3..=200, got {scan}"),
        ));
    }
    if let Some(t) = w.terms {
        if t < 2 || t > scan {
            return Err(invalid(
                "wavefunction.terms",
                format!("must lie in 2..={scan}, got {t}"),
            ));
        }
    }
    let r_max = w.r_max.unwrap_or(6.0);
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(invalid(
            "wavefunction.r_max",
            format!("must be > 0, got {r_max}"),
        ));
    }
    let points = w.points.unwrap_or(601);
    if points < 2 {
        return Err(invalid("wavefunction.points", "need at least 2 points"));
    }

    Ok(RunConfig {
        lambda,
        u: raw.u,
        ell: raw.ell.unwrap_or(0),
        n,
        pps: PpsSettings {
            eps_min,
            grid,
            curves,
        },
        hd_kquad,
        cs: CsSettings {
            rho,
            theta,
            kquad,
            stability: StabilityOptions {
                drho,
                dtheta,
                tol,
                tol_bound,
            },
        },
        sweep,
        wavefunction: WavefunctionSettings {
            level: w.level,
            terms: w.terms,
            scan,
            r_max,
            points,
        },
        out: raw.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
    })
}
