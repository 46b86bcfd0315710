use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::special::hermite_function;

/// Relative magnitude below which window samples count as tail.
pub const TAIL_TOL: f64 = 1e-12;

/// Samples below this fraction of the peak are skipped in STFT sums.
const NEGLIGIBLE: f64 = 1e-18;

/// A window `g` sampled on a uniform grid, normalized so that the trapezoid
/// approximation of `‖g‖²` is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSamples {
    t0: f64,
    dt: f64,
    values: Vec<Complex64>,
    // index range outside of which every sample is negligible
    support: (usize, usize),
    peak: f64,
}

impl WindowSamples {
    pub fn new(t0: f64, dt: f64, values: Vec<Complex64>) -> Result<WindowSamples> {
        if !(dt.is_finite() && dt > 0.0) || !t0.is_finite() {
            return Err(Error::Window(format!("grid needs finite t0 and dt > 0, got t0={t0} dt={dt}")));
        }
        if values.len() < 2 {
            return Err(Error::Window("window needs at least two samples".into()));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Window("window has non-finite samples".into()));
        }
        let norm2 = trapezoid(&values, dt, |v| v.norm_sqr());
        if norm2.is_nan() || norm2 <= 0.0 {
            return Err(Error::Window("window has zero norm".into()));
        }
        let scale = norm2.sqrt().recip();
        let values: Vec<Complex64> = values.into_iter().map(|v| v * scale).collect();
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let cut = NEGLIGIBLE * peak;
        let lo = values.iter().position(|v| v.norm() > cut).unwrap_or(0);
        let hi = values.iter().rposition(|v| v.norm() > cut).unwrap_or(values.len() - 1);
        Ok(WindowSamples { t0, dt, values, support: (lo, hi), peak })
    }

    /// Samples `f` at `t0 + k·dt` for `k < count`.
    pub fn from_fn(t0: f64, dt: f64, count: usize, f: impl Fn(f64) -> Complex64) -> Result<WindowSamples> {
        WindowSamples::new(t0, dt, (0..count).map(|k| f(t0 + k as f64 * dt)).collect())
    }

    /// Hermite window `h_n` sampled symmetrically on `[-half_width, half_width]`.
    pub fn hermite(n: usize, half_width: f64, dt: f64) -> Result<WindowSamples> {
        let count = (2.0 * half_width / dt).round() as usize + 1;
        let t0 = -dt * ((count - 1) as f64) * 0.5;
        let mut values = Vec::with_capacity(count);
        for k in 0..count {
            values.push(Complex64::new(hermite_function(n, t0 + k as f64 * dt)?, 0.0));
        }
        WindowSamples::new(t0, dt, values)
    }

    /// Parses the window file format: `t re [im]` per line, uniform spacing.
    pub fn parse(text: &str) -> Result<WindowSamples> {
        let mut ts = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<f64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Window(format!("line {}: malformed number in '{line}'", lineno + 1)))?;
            match cols.as_slice() {
                [t, re] => {
                    ts.push(*t);
                    values.push(Complex64::new(*re, 0.0));
                }
                [t, re, im] => {
                    ts.push(*t);
                    values.push(Complex64::new(*re, *im));
                }
                _ => return Err(Error::Window(format!("line {}: expected 2 or 3 columns", lineno + 1))),
            }
        }
        if ts.len() < 2 {
            return Err(Error::Window("window file needs at least two samples".into()));
        }
        let dt = (ts[ts.len() - 1] - ts[0]) / (ts.len() - 1) as f64;
        for (k, t) in ts.iter().enumerate() {
            let expected = ts[0] + k as f64 * dt;
            if (t - expected).abs() > 1e-6 * dt.abs() {
                return Err(Error::Window(format!("non-uniform spacing at sample {k} (t = {t}, expected {expected})")));
            }
        }
        WindowSamples::new(ts[0], dt, values)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<WindowSamples> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        WindowSamples::parse(&text)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Last grid point.
    pub fn t_end(&self) -> f64 {
        self.t0 + (self.values.len() - 1) as f64 * self.dt
    }

    /// Largest end sample relative to the peak; small values mean the grid
    /// covers the effective support.
    pub fn tail_ratio(&self) -> f64 {
        let first = self.values[0].norm();
        let last = self.values[self.values.len() - 1].norm();
        first.max(last) / self.peak
    }

    /// Trapezoid `‖g‖²` (1 after normalization, up to rounding).
    pub fn norm_sqr(&self) -> f64 {
        trapezoid(&self.values, self.dt, |v| v.norm_sqr())
    }

    fn at(&self, idx: isize) -> Complex64 {
        if idx < 0 || idx as usize >= self.values.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[idx as usize]
        }
    }
}

fn trapezoid<T>(values: &[T], dt: f64, f: impl Fn(&T) -> f64) -> f64 {
    let n = values.len();
    let inner: f64 = values.iter().map(&f).sum();
    dt * (inner - 0.5 * (f(&values[0]) + f(&values[n - 1])))
}

/// Short-time Fourier transform `V_g f(x, ξ) = ∫ f(t) conj(g(t - x)) e^{-2πiξt} dt`
/// by the trapezoid rule on `f`'s grid, with `g(t - x)` linearly
/// interpolated on `g`'s grid (zero outside it).
pub fn stft(g: &WindowSamples, f: &WindowSamples, x: f64, xi: f64) -> Result<Complex64> {
    if (g.dt - f.dt).abs() > 1e-9 * f.dt {
        return Err(Error::Window(format!("incompatible grids: dt {} vs {}", g.dt, f.dt)));
    }
    let dt = f.dt;
    // g(t_k - x) = g at fractional index k + offset
    let offset = (f.t0 - x - g.t0) / dt;
    let base = offset.floor();
    let theta = offset - base;
    let shift = base as isize;
    let shifted_g = |k: usize| -> Complex64 {
        let i = k as isize + shift;
        g.at(i) * (1.0 - theta) + g.at(i + 1) * theta
    };

    // Truncation: the integrand must be negligible where either grid ends.
    let nf = f.values.len();
    let limit = TAIL_TOL * f.peak * g.peak;
    let mut edge = (f.values[0] * shifted_g(0)).norm().max((f.values[nf - 1] * shifted_g(nf - 1)).norm());
    for g_edge in [0isize, g.values.len() as isize - 1] {
        let k = g_edge - shift;
        if k >= 0 && (k as usize) < nf {
            edge = edge.max(f.values[k as usize].norm() * g.values[g_edge as usize].norm());
        }
    }
    if edge > limit {
        return Err(Error::StftTruncation { shift: x, edge });
    }

    // Only indices where both factors are non-negligible contribute.
    let lo_g = g.support.0 as isize - shift - 1;
    let hi_g = g.support.1 as isize - shift;
    let lo = (f.support.0 as isize).max(lo_g).max(0);
    let hi = (f.support.1 as isize).min(hi_g).min(nf as isize - 1);
    if lo > hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let step = Complex64::from_polar(1.0, -2.0 * PI * xi * dt);
    let mut phase = Complex64::from_polar(1.0, -2.0 * PI * xi * (f.t0 + lo as f64 * dt));
    let mut acc = Complex64::new(0.0, 0.0);
    for k in lo as usize..=hi as usize {
        let w = if k == 0 || k == nf - 1 { 0.5 } else { 1.0 };
        acc += f.values[k] * shifted_g(k).conj() * phase * w;
        phase *= step;
    }
    Ok(acc * dt)
}
