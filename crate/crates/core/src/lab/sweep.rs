//! Dilation sweeps: one spectrum and one set of functionals per `L`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::functionals::{FunctionalReport, ENTROPY_VARIANCE_BOUND};
use crate::geometry::{Domain, Shape};
use crate::kernels::KernelSpec;
use crate::spectral::{assemble, eigenvalues, landau_disk_spectrum_radial, Spectrum, RADIAL_MAX_LEVEL};

use super::classify::{classify_curve, fit_through_origin, top_half_start, Classification};
use super::config::{SolverMethod, SweepConfig};

/// Relative tolerance between the expected count and the area.
pub const TRACE_TOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRecord {
    pub l: f64,
    pub area: f64,
    pub perimeter: f64,
    pub expected_count: f64,
    pub variance: f64,
    pub entropy: f64,
    /// `(p, Σ (λ(1-λ))^p)`; always contains `p = 0.5` and `p = 1`.
    pub schatten: Vec<(f64, f64)>,
    pub s_over_v: f64,
    pub s_over_perimeter: f64,
    pub v_over_perimeter: f64,
}

impl ScalingRecord {
    pub fn from_functionals(l: f64, d: &Domain, f: &FunctionalReport) -> ScalingRecord {
        ScalingRecord {
            l,
            area: d.area(),
            perimeter: d.perimeter(),
            expected_count: f.expected_count,
            variance: f.variance,
            entropy: f.entropy,
            schatten: f.schatten.clone(),
            s_over_v: f.ratio_entropy_variance,
            s_over_perimeter: f.entropy / d.perimeter(),
            v_over_perimeter: f.variance / d.perimeter(),
        }
    }

    pub fn schatten(&self, p: f64) -> Option<f64> {
        self.schatten.iter().find(|(q, _)| *q == p).map(|(_, v)| *v)
    }

    /// Checks `S ≥ 4 ln2 · V` and `E[count] ≈ area`.
    pub fn validate(&self) -> Result<()> {
        if self.entropy < ENTROPY_VARIANCE_BOUND * self.variance - 1e-12 * self.variance.max(1.0) {
            return Err(Error::Report(format!(
                "record L={}: entropy {} below 4 ln2 x variance {}",
                self.l, self.entropy, self.variance
            )));
        }
        if (self.expected_count - self.area).abs() > TRACE_TOL * self.area {
            return Err(Error::Report(format!(
                "record L={}: expected count {} differs from area {}",
                self.l, self.expected_count, self.area
            )));
        }
        Ok(())
    }
}

/// Fitted quantities over the top half of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FitSummary {
    pub classification: Classification,
    /// `(max - min) / mean` of `S / perimeter`.
    pub area_law_spread: f64,
    pub area_law_holds: bool,
    /// Log-log slope of `V` against `L`.
    pub variance_exponent: f64,
    /// Log-log slope of `S` against `L`.
    pub entropy_exponent: f64,
    /// Least-squares `a` in `S ≈ a · perimeter`.
    pub entropy_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScalingReport {
    pub records: Vec<ScalingRecord>,
    /// Present with at least three records.
    pub fits: Option<FitSummary>,
}

impl ScalingReport {
    pub fn from_records(records: Vec<ScalingRecord>, spread_threshold: f64) -> ScalingReport {
        let fits = fit_summary(&records, spread_threshold);
        ScalingReport { records, fits }
    }
}

/// Relative spread `(max - min) / mean`.
pub fn relative_spread(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (max - min) / mean
}

fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn fit_summary(records: &[ScalingRecord], spread_threshold: f64) -> Option<FitSummary> {
    if records.len() < 3 {
        return None;
    }
    let top = &records[top_half_start(records.len())..];
    let ls: Vec<f64> = records.iter().map(|r| r.l).collect();
    let vs: Vec<f64> = records.iter().map(|r| r.variance).collect();
    let ratios: Vec<f64> = top.iter().map(|r| r.s_over_perimeter).collect();
    let area_law_spread = relative_spread(&ratios);
    let tl: Vec<f64> = top.iter().map(|r| r.l).collect();
    let per: Vec<f64> = top.iter().map(|r| r.perimeter).collect();
    let tv: Vec<f64> = top.iter().map(|r| r.variance).collect();
    let ts: Vec<f64> = top.iter().map(|r| r.entropy).collect();
    Some(FitSummary {
        classification: classify_curve(&ls, &vs),
        area_law_spread,
        area_law_holds: area_law_spread < spread_threshold,
        variance_exponent: log_log_slope(&tl, &tv),
        entropy_exponent: log_log_slope(&tl, &ts),
        entropy_slope: fit_through_origin(&per, &ts).0,
    })
}

/// Quadrature order used at a dilated domain.
pub fn scaled_order(cfg: &SweepConfig, d: &Domain) -> usize {
    if cfg.scale_order {
        let scaled = (cfg.quad_order as f64 * d.extent() / 2.0).ceil() as usize;
        cfg.quad_order.max(scaled)
    } else {
        cfg.quad_order
    }
}

fn radial_level(kernel: &KernelSpec) -> Option<usize> {
    match kernel {
        KernelSpec::Ginibre => Some(0),
        KernelSpec::Landau(n) | KernelSpec::WhHermite(n) if *n <= RADIAL_MAX_LEVEL => Some(*n),
        _ => None,
    }
}

/// Spectrum of the configured kernel on `d`, with the solver chosen by
/// `cfg.method`. Flagged spectra are errors.
pub fn solve_domain(cfg: &SweepConfig, d: &Domain) -> Result<Spectrum> {
    let order = scaled_order(cfg, d);
    let radial = || -> Result<Spectrum> {
        let (Shape::Disk { radius, .. }, Some(level)) = (d.shape(), radial_level(&cfg.kernel)) else {
            return Err(Error::InvalidArgument(format!(
                "radial solver needs a disk and a Ginibre, Landau or Hermite-window kernel of level <= {RADIAL_MAX_LEVEL}"
            )));
        };
        let area = PI * radius * radius;
        let max_angular = 2 * area.ceil() as usize + 10 * radius.ceil() as usize + 20;
        let mut rad = landau_disk_spectrum_radial(level, *radius, max_angular, order)?;
        rad.spectrum = Spectrum::from_raw(rad.spectrum.raw_lambdas().to_vec(), cfg.spectral_tol);
        Ok(rad.validated()?.spectrum)
    };
    let nystrom = || -> Result<Spectrum> {
        let rule = d.quadrature(order)?;
        if rule.len() > cfg.dimension_cap {
            return Err(Error::DimensionCap { dim: rule.len(), cap: cfg.dimension_cap });
        }
        eigenvalues(&assemble(&cfg.kernel, &rule)?, cfg.spectral_tol)?.validated()
    };
    match cfg.method {
        SolverMethod::Nystrom => nystrom(),
        SolverMethod::Radial => radial(),
        SolverMethod::Auto => match nystrom() {
            Err(Error::DimensionCap { dim, cap }) => {
                if matches!(d.shape(), Shape::Disk { .. }) && radial_level(&cfg.kernel).is_some() {
                    radial()
                } else {
                    Err(Error::DimensionCap { dim, cap })
                }
            }
            other => other,
        },
    }
}

/// Functionals of the configured kernel on `d`.
pub fn functionals_on(cfg: &SweepConfig, d: &Domain) -> Result<FunctionalReport> {
    let mut ps = cfg.schatten_ps.clone();
    for p in [0.5, 1.0] {
        if !ps.contains(&p) {
            ps.push(p);
        }
    }
    FunctionalReport::compute(&solve_domain(cfg, d)?, &ps)
}

/// Runs the sweep over `cfg.l_grid` in order; the first failure aborts with
/// the offending `L`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<ScalingReport> {
    let mut records = Vec::with_capacity(cfg.l_grid.len());
    for &l in &cfg.l_grid {
        let wrap = |e: Error| Error::Sweep { dilation: l, source: Box::new(e) };
        let d = cfg.domain.dilate(l).map_err(wrap)?;
        let f = functionals_on(cfg, &d).map_err(wrap)?;
        let record = ScalingRecord::from_functionals(l, &d, &f);
        record.validate().map_err(wrap)?;
        records.push(record);
    }
    Ok(ScalingReport::from_records(records, cfg.area_law_spread))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::parse_config;

    #[test]
    fn single_point_sweep_has_no_fits() {
        let cfg =
            parse_config("kernel = ginibre\ndomain = disk:0.5641895835477563\nL_grid = 1\nquad_order = 12\n").unwrap();
        let report = run_sweep(&cfg).unwrap();
        assert_eq!(report.records.len(), 1);
        assert!(report.fits.is_none());
        let r = &report.records[0];
        assert!((r.area - 1.0).abs() < 1e-12);
        assert!((r.variance - 0.523777611803).abs() < 1e-8);
        assert!(r.s_over_v >= ENTROPY_VARIANCE_BOUND);
    }

    #[test]
    fn scaled_order_follows_extent() {
        let mut cfg = parse_config("kernel = ginibre\ndomain = disk:1\n").unwrap();
        let d = cfg.domain.dilate(3.0).unwrap();
        assert_eq!(scaled_order(&cfg, &cfg.domain), 24);
        assert_eq!(scaled_order(&cfg, &d), 72);
        cfg.scale_order = false;
        assert_eq!(scaled_order(&cfg, &d), 24);
    }

    #[test]
    fn dimension_cap_and_radial_fallback() {
        let mut cfg =
            parse_config("kernel = landau:1\ndomain = disk:1\nquad_order = 16\ndimension_cap = 100\n").unwrap();
        cfg.method = SolverMethod::Nystrom;
        assert!(matches!(solve_domain(&cfg, &cfg.domain), Err(Error::DimensionCap { .. })));
        cfg.method = SolverMethod::Auto;
        let s = solve_domain(&cfg, &cfg.domain).unwrap();
        let trace: f64 = s.lambdas().iter().sum();
        assert!((trace - PI).abs() < 1e-6);
        cfg.domain = crate::geometry::Domain::from_descriptor("rect:2x2").unwrap();
        assert!(matches!(solve_domain(&cfg, &cfg.domain), Err(Error::DimensionCap { .. })));
        cfg.method = SolverMethod::Radial;
        assert!(solve_domain(&cfg, &cfg.domain).is_err());
    }

    #[test]
    fn failing_sweep_names_the_dilation() {
        let cfg =
            parse_config("kernel = ginibre\ndomain = rect:1x1\nL_grid = 1, 4\nquad_order = 24\ndimension_cap = 1000\n")
                .unwrap();
        match run_sweep(&cfg) {
            Err(Error::Sweep { dilation, .. }) => assert_eq!(dilation, 4.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn spread_examples() {
        assert_eq!(relative_spread(&[1.0, 1.0]), 0.0);
        assert!((relative_spread(&[0.9, 1.1]) - 0.2).abs() < 1e-15);
    }
}
