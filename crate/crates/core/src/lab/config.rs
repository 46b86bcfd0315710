//! `key = value` sweep configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::finite::{DEFAULT_BOX_FACTOR, DEFAULT_TAIL_TOL};
use crate::functionals::DEFAULT_SCHATTEN_PS;
use crate::geometry::Domain;
use crate::kernels::KernelSpec;
use crate::spectral::DEFAULT_SPECTRAL_TOL;

pub const DEFAULT_QUAD_ORDER: usize = 24;
pub const DEFAULT_AREA_LAW_SPREAD: f64 = 0.05;
pub const DEFAULT_DIMENSION_CAP: usize = 4000;
pub const DEFAULT_SAMPLES: usize = 100;

/// How each spectrum in a sweep is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverMethod {
    /// Dense Nyström when it fits the dimension cap, radial blocks otherwise.
    #[default]
    Auto,
    Nystrom,
    /// Angular-block solver; centered disks with rotation-invariant kernels only.
    Radial,
}

impl FromStr for SolverMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(SolverMethod::Auto),
            "nystrom" => Ok(SolverMethod::Nystrom),
            "radial" => Ok(SolverMethod::Radial),
            other => Err(format!("unknown method '{other}' (auto|nystrom|radial)")),
        }
    }
}

impl fmt::Display for SolverMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverMethod::Auto => "auto",
            SolverMethod::Nystrom => "nystrom",
            SolverMethod::Radial => "radial",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub kernel: KernelSpec,
    pub domain: Domain,
    pub l_grid: Vec<f64>,
    pub quad_order: usize,
    pub schatten_ps: Vec<f64>,
    pub spectral_tol: f64,
    /// Relative spread threshold of `S / perimeter` for the area-law check.
    pub area_law_spread: f64,
    pub dimension_cap: usize,
    pub method: SolverMethod,
    /// Grow the quadrature order with the dilated extent.
    pub scale_order: bool,
    pub seed: u64,
    pub samples: usize,
    pub box_factor: f64,
    pub tail_tol: f64,
    pub out: Option<PathBuf>,
    pub stats_out: Option<PathBuf>,
}

impl SweepConfig {
    /// Config with defaults for everything but kernel and domain.
    pub fn new(kernel: KernelSpec, domain: Domain) -> SweepConfig {
        SweepConfig {
            kernel,
            domain,
            l_grid: vec![1.0],
            quad_order: DEFAULT_QUAD_ORDER,
            schatten_ps: DEFAULT_SCHATTEN_PS.to_vec(),
            spectral_tol: DEFAULT_SPECTRAL_TOL,
            area_law_spread: DEFAULT_AREA_LAW_SPREAD,
            dimension_cap: DEFAULT_DIMENSION_CAP,
            method: SolverMethod::Auto,
            scale_order: true,
            seed: 0,
            samples: DEFAULT_SAMPLES,
            box_factor: DEFAULT_BOX_FACTOR,
            tail_tol: DEFAULT_TAIL_TOL,
            out: None,
            stats_out: None,
        }
    }

    pub fn with_grid(mut self, l_grid: Vec<f64>) -> Result<SweepConfig> {
        check_grid(&l_grid).map_err(|message| Error::Config { line: 0, message })?;
        self.l_grid = l_grid;
        Ok(self)
    }
}

fn check_grid(grid: &[f64]) -> std::result::Result<(), String> {
    if grid.is_empty() {
        return Err("L_grid is empty".into());
    }
    if let Some(l) = grid.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
        return Err(format!("L_grid entries must be positive, got {l}"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err("L_grid must be strictly increasing".into());
    }
    Ok(())
}

fn list<T: FromStr>(value: &str) -> std::result::Result<Vec<T>, String> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("malformed list entry '{s}'")))
        .collect()
}

fn scalar<T: FromStr>(value: &str) -> std::result::Result<T, String> {
    value.parse().map_err(|_| format!("malformed value '{value}'"))
}

fn positive(value: &str) -> std::result::Result<f64, String> {
    let v: f64 = scalar(value)?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("expected a positive number, got '{value}'"))
    }
}

/// Parses `key = value` lines (`#` starts a comment). `kernel` and `domain`
/// are required; a repeated key overrides the earlier one.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut kernel = None;
    let mut domain = None;
    let mut cfg = SweepConfig::new(KernelSpec::Ginibre, Domain::from_descriptor("disk:1")?);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| Error::Config { line, message };
        let (key, value) =
            content.split_once('=').ok_or_else(|| err(format!("expected 'key = value', got '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "kernel" => kernel = Some(KernelSpec::from_descriptor(value).map_err(|e| err(e.to_string()))?),
            "domain" => domain = Some(Domain::from_descriptor(value).map_err(|e| err(e.to_string()))?),
            "L_grid" => {
                let grid: Vec<f64> = list(value).map_err(err)?;
                check_grid(&grid).map_err(err)?;
                cfg.l_grid = grid;
            }
            "quad_order" => {
                let q: usize = scalar(value).map_err(err)?;
                if q < crate::geometry::MIN_ORDER {
                    return Err(err(format!("quad_order must be at least {}", crate::geometry::MIN_ORDER)));
                }
                cfg.quad_order = q;
            }
            "schatten_ps" => {
                let ps: Vec<f64> = list(value).map_err(err)?;
                if ps.is_empty() || ps.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
                    return Err(err(format!("schatten_ps must be positive numbers, got '{value}'")));
                }
                cfg.schatten_ps = ps;
            }
            "spectral_tol" => cfg.spectral_tol = positive(value).map_err(err)?,
            "area_law_spread" => cfg.area_law_spread = positive(value).map_err(err)?,
            "dimension_cap" => cfg.dimension_cap = scalar(value).map_err(err)?,
            "method" => cfg.method = value.parse().map_err(err)?,
            "scale_order" => cfg.scale_order = scalar(value).map_err(err)?,
            "seed" => cfg.seed = scalar(value).map_err(err)?,
            "samples" => cfg.samples = scalar(value).map_err(err)?,
            "box_factor" => {
                let f = positive(value).map_err(err)?;
                if f < 1.0 {
                    return Err(err(format!("box_factor must be >= 1, got {f}")));
                }
                cfg.box_factor = f;
            }
            "tail_tol" => cfg.tail_tol = positive(value).map_err(err)?,
            "out" => cfg.out = Some(PathBuf::from(value)),
            "stats_out" => cfg.stats_out = Some(PathBuf::from(value)),
            other => return Err(err(format!("unknown key '{other}'"))),
        }
    }
    let missing = |key: &str| Error::Config { line: 0, message: format!("missing required key '{key}'") };
    cfg.kernel = kernel.ok_or_else(|| missing("kernel"))?;
    cfg.domain = domain.ok_or_else(|| missing("domain"))?;
    Ok(cfg)
}
