//! Disk oracles: the closed-form Ginibre spectrum and an angular-mode block
//! solver for Landau-level kernels.
//!
//! On a centered disk the Landau kernels are rotation covariant once the
//! gauge factor `e^{iπ(x'ξ' - xξ)}` is dropped (it is a diagonal unitary
//! change and leaves the spectrum alone). Writing `z = r e^{iψ}`, `w = s`,
//! the kernel depends on `(r, s, ψ)` only, and each angular Fourier mode `m`
//! gives an independent radial integral operator with kernel `2π c_m(r, s)`
//! against `s ds`.

use std::f64::consts::PI;

use faer::{Mat, Side};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::{regularized_lower_incomplete_gamma, Spectrum, DEFAULT_SPECTRAL_TOL};
use crate::error::{Error, Result};
use crate::gauss;
use crate::kernels::laguerre;

/// Largest eigenvalue tolerated in a discarded angular block.
pub const DISCARD_TOL: f64 = 1e-10;

/// Highest Landau level handled by the radial solver.
pub const RADIAL_MAX_LEVEL: usize = 5;

/// `λ_j = P(j + 1, πR²)` for `j < count`: the Ginibre spectrum on `D_R`.
pub fn ginibre_disk_spectrum_analytic(radius: f64, count: usize) -> Result<Spectrum> {
    if !(radius.is_finite() && radius > 0.0) || count == 0 {
        return Err(Error::InvalidArgument(format!("need R > 0 and count >= 1, got R={radius} count={count}")));
    }
    let area = PI * radius * radius;
    let values =
        (0..count).map(|j| regularized_lower_incomplete_gamma(j as f64 + 1.0, area)).collect::<Result<Vec<_>>>()?;
    Spectrum::from_values(values)
}

/// Result of the angular-block solve.
#[derive(Debug, Clone)]
pub struct RadialSpectrum {
    pub spectrum: Spectrum,
    /// Angular blocks with a non-negligible (> 1e-14) eigenvalue.
    pub blocks_used: usize,
    /// Inclusive range of angular modes solved.
    pub modes: (i64, i64),
    /// Largest eigenvalue among the probe blocks just outside `modes`.
    pub max_discarded: f64,
    pub max_angular: usize,
}

impl RadialSpectrum {
    pub fn is_flagged(&self) -> bool {
        self.spectrum.is_flagged() || self.max_discarded > DISCARD_TOL
    }

    pub fn validated(self) -> Result<RadialSpectrum> {
        if self.max_discarded > DISCARD_TOL {
            return Err(Error::AngularTruncation { discarded: self.max_discarded, max_angular: self.max_angular });
        }
        let RadialSpectrum { spectrum, blocks_used, modes, max_discarded, max_angular } = self;
        Ok(RadialSpectrum { spectrum: spectrum.validated()?, blocks_used, modes, max_discarded, max_angular })
    }
}

/// Spectrum of the Landau level `n` concentration operator on the centered
/// disk `D_R`, from one radial Nyström problem (Gauss–Legendre, `radial_order`
/// nodes on `[0, R]`) per angular mode `m ∈ [-(n+1), max_angular]`.
pub fn landau_disk_spectrum_radial(
    n: usize,
    radius: f64,
    max_angular: usize,
    radial_order: usize,
) -> Result<RadialSpectrum> {
    if n > RADIAL_MAX_LEVEL {
        return Err(Error::InvalidArgument(format!("radial solver supports levels <= {RADIAL_MAX_LEVEL}, got {n}")));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidArgument(format!("disk radius must be positive, got {radius}")));
    }
    let needed = 2 * (PI * radius * radius).ceil() as usize;
    if max_angular < needed {
        return Err(Error::InvalidArgument(format!(
            "max_angular must be at least 2·⌈πR²⌉ = {needed}, got {max_angular}"
        )));
    }
    if radial_order < 2 {
        return Err(Error::InvalidArgument("radial order must be at least 2".into()));
    }

    let lo = -(n as i64) - 1;
    let hi = max_angular as i64;
    let (probe_lo, probe_hi) = (lo - 1, hi + 1);
    let span = (probe_hi.max(-probe_lo) as usize) * 2 + 2;
    let fft_len = span.next_power_of_two().max(64);
    let n_modes = (probe_hi - probe_lo + 1) as usize;

    let (rs, wr) = gauss::legendre_on(radial_order, 0.0, radius);
    let measure: Vec<f64> = rs.iter().zip(&wr).map(|(r, w)| (w * r).sqrt()).collect();
    let pairs: Vec<(usize, usize)> = (0..radial_order).flat_map(|j| (j..radial_order).map(move |i| (i, j))).collect();

    let fft = FftPlanner::<f64>::new().plan_fft_forward(fft_len);
    // coefficients per pair: c_m for m in probe_lo..=probe_hi
    let coefficients: Vec<Vec<f64>> = pairs
        .par_iter()
        .map_init(
            || vec![Complex64::new(0.0, 0.0); fft_len],
            |buf, &(i, j)| {
                let (r, s) = (rs[i], rs[j]);
                for (l, v) in buf.iter_mut().enumerate() {
                    let (sn, cs) = (2.0 * PI * l as f64 / fft_len as f64).sin_cos();
                    let d2 = (r * r + s * s - 2.0 * r * s * cs).max(0.0);
                    let modulus = (-0.5 * PI * d2).exp() * laguerre(n, PI * d2);
                    *v = Complex64::from_polar(modulus, PI * r * s * sn);
                }
                fft.process(buf);
                (probe_lo..=probe_hi).map(|m| buf[m.rem_euclid(fft_len as i64) as usize].re / fft_len as f64).collect()
            },
        )
        .collect();

    let block_eigs: Vec<Vec<f64>> = (0..n_modes)
        .into_par_iter()
        .map(|k| {
            let mut b = Mat::<f64>::zeros(radial_order, radial_order);
            for (p, &(i, j)) in pairs.iter().enumerate() {
                let v = 2.0 * PI * coefficients[p][k] * measure[i] * measure[j];
                b[(i, j)] = v;
                b[(j, i)] = v;
            }
            b.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::Eigensolver(format!("{e:?}")))
        })
        .collect::<Result<_>>()?;

    let mut raw = Vec::with_capacity((n_modes - 2) * radial_order);
    let mut blocks_used = 0;
    let mut max_discarded = 0.0f64;
    for (k, eigs) in block_eigs.into_iter().enumerate() {
        let m = probe_lo + k as i64;
        let top = eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if m == probe_lo || m == probe_hi {
            max_discarded = max_discarded.max(top);
            continue;
        }
        if top > 1e-14 {
            blocks_used += 1;
        }
        raw.extend(eigs);
    }
    Ok(RadialSpectrum {
        spectrum: Spectrum::from_raw(raw, DEFAULT_SPECTRAL_TOL),
        blocks_used,
        modes: (lo, hi),
        max_discarded,
        max_angular,
    })
}
