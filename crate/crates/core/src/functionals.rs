//! Scalar functionals of a spectrum: expected count, number variance,
//! entanglement entropy and Schatten-type traces `Σ λ^p (1 - λ)^p`.

use std::f64::consts::LN_2;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::QuadratureRule;
use crate::kernels::KernelSpec;
use crate::spectral::Spectrum;

/// Eigenvalues below this contribute nothing at working precision.
pub const NEGLIGIBLE_EIGENVALUE: f64 = 1e-14;

/// `4 ln 2`, the pointwise constant in `4 ln2 · x(1 - x) ≤ f(x)`.
pub const ENTROPY_VARIANCE_BOUND: f64 = 4.0 * LN_2;

/// Default Schatten exponents.
pub const DEFAULT_SCHATTEN_PS: [f64; 2] = [0.5, 1.0];

/// Binary entropy `f(x) = -x ln x - (1 - x) ln(1 - x)` with `f(0) = f(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("binary entropy needs x in [0, 1], got {x}")));
    }
    Ok(xlogx(x) + xlogx(1.0 - x))
}

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

fn significant(s: &Spectrum) -> impl Iterator<Item = f64> + '_ {
    s.lambdas().iter().copied().filter(|&l| l >= NEGLIGIBLE_EIGENVALUE)
}

/// Entanglement entropy `Σ f(λ_n)`.
pub fn entropy(s: &Spectrum) -> f64 {
    significant(s).map(|l| xlogx(l) + xlogx(1.0 - l)).sum()
}

/// Number variance `Σ λ_n (1 - λ_n)`.
pub fn variance_spectral(s: &Spectrum) -> f64 {
    significant(s).map(|l| l * (1.0 - l)).sum()
}

/// Expected count `Σ λ_n`.
pub fn expected_count(s: &Spectrum) -> f64 {
    significant(s).sum()
}

/// `Σ λ^p (1 - λ)^p`, with `0^p = 0`.
pub fn schatten_h_trace(s: &Spectrum, p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidArgument(format!("Schatten exponent must be positive, got {p}")));
    }
    if p == 1.0 {
        return Ok(variance_spectral(s));
    }
    Ok(significant(s).map(|l| (l * (1.0 - l)).powf(p)).sum())
}

/// Number variance straight from the kernel:
/// `Σ_i w_i K(z_i, z_i) - Σ_{i,j} w_i w_j |K(z_i, z_j)|²`.
pub fn variance_direct(spec: &KernelSpec, rule: &QuadratureRule) -> Result<f64> {
    let nodes = rule.nodes();
    let w = rule.weights();
    let n = nodes.len();
    let (diag, square) = (0..n)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64)> {
            let kii = spec.eval(nodes[i], nodes[i])?;
            let mut sq = w[i] * w[i] * kii.norm_sqr();
            for j in (i + 1)..n {
                sq += 2.0 * w[i] * w[j] * spec.eval(nodes[i], nodes[j])?.norm_sqr();
            }
            Ok((w[i] * kii.re, sq))
        })
        .try_reduce(|| (0.0, 0.0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    Ok(diag - square)
}

/// All functionals of one spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalReport {
    pub expected_count: f64,
    pub variance: f64,
    pub entropy: f64,
    /// `(p, Σ λ^p (1 - λ)^p)` in the order requested.
    pub schatten: Vec<(f64, f64)>,
    /// `S / V` (NaN when `V = 0`).
    pub ratio_entropy_variance: f64,
}

impl FunctionalReport {
    pub fn compute(s: &Spectrum, schatten_ps: &[f64]) -> Result<FunctionalReport> {
        let variance = variance_spectral(s);
        let entropy = entropy(s);
        let schatten = schatten_ps.iter().map(|&p| Ok((p, schatten_h_trace(s, p)?))).collect::<Result<Vec<_>>>()?;
        Ok(FunctionalReport {
            expected_count: expected_count(s),
            variance,
            entropy,
            schatten,
            ratio_entropy_variance: if variance > 0.0 { entropy / variance } else { f64::NAN },
        })
    }

    pub fn schatten(&self, p: f64) -> Option<f64> {
        self.schatten.iter().find(|(q, _)| *q == p).map(|(_, v)| *v)
    }

    /// `S - 4 ln2 · V`; non-negative for every valid spectrum.
    pub fn entropy_slack(&self) -> f64 {
        self.entropy - ENTROPY_VARIANCE_BOUND * self.variance
    }
}
