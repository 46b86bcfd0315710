//! Correlation kernels of the planar ensembles.
//!
//! All kernels are Hermitian reproducing kernels with unit diagonal. The
//! Ginibre and Landau kernels carry the phase factor `e^{iπ(x'ξ' - xξ)}` of
//! the time-frequency picture; spectral functionals are insensitive to it.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Point2;

mod constant;
mod special;
mod window;

pub use constant::{window_constant, WindowConstant};
pub use special::{hermite_function, laguerre, laguerre_roots, HERMITE_MAX};
pub use window::{stft, WindowSamples, TAIL_TOL};

/// Which correlation kernel to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// Infinite Ginibre ensemble (lowest Landau level).
    Ginibre,
    /// Landau level `n`.
    Landau(usize),
    /// Weyl-Heisenberg ensemble with Hermite window `h_n`.
    WhHermite(usize),
    /// Weyl-Heisenberg ensemble with a sampled window.
    WhSampled(Arc<WindowSamples>),
}

impl KernelSpec {
    /// Parses `ginibre`, `landau:<n>`, `wh-hermite:<n>` or `wh-file:<path>`.
    pub fn from_descriptor(desc: &str) -> Result<KernelSpec> {
        let desc = desc.trim();
        let (kind, arg) = match desc.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (desc, None),
        };
        let level = |arg: Option<&str>| -> Result<usize> {
            arg.and_then(|a| a.parse::<usize>().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("kernel '{desc}' needs a non-negative integer level")))
        };
        match (kind, arg) {
            ("ginibre", None) => Ok(KernelSpec::Ginibre),
            ("landau", a) => Ok(KernelSpec::Landau(level(a)?)),
            ("wh-hermite", a) => {
                let n = level(a)?;
                if n > HERMITE_MAX {
                    return Err(Error::HermiteIndex(n));
                }
                Ok(KernelSpec::WhHermite(n))
            }
            ("wh-file", Some(path)) => Ok(KernelSpec::WhSampled(Arc::new(WindowSamples::load(path)?))),
            _ => Err(Error::InvalidArgument(format!("unknown kernel descriptor '{desc}'"))),
        }
    }

    /// Evaluates `K(z, w)`.
    pub fn eval(&self, z: Point2, w: Point2) -> Result<Complex64> {
        match self {
            KernelSpec::Ginibre => Ok(ginibre_kernel(z, w)),
            KernelSpec::Landau(n) => Ok(landau_kernel(*n, z, w)),
            KernelSpec::WhHermite(_) | KernelSpec::WhSampled(_) => wh_kernel(self, z, w),
        }
    }

    /// Landau level when the kernel is one (Ginibre is level 0).
    pub fn landau_level(&self) -> Option<usize> {
        match self {
            KernelSpec::Ginibre => Some(0),
            KernelSpec::Landau(n) | KernelSpec::WhHermite(n) => Some(*n),
            KernelSpec::WhSampled(_) => None,
        }
    }

    /// Whether `|K|` and the spectrum on disks are rotation invariant.
    pub fn is_rotation_invariant(&self) -> bool {
        self.landau_level().is_some()
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Ginibre => write!(f, "ginibre"),
            KernelSpec::Landau(n) => write!(f, "landau:{n}"),
            KernelSpec::WhHermite(n) => write!(f, "wh-hermite:{n}"),
            KernelSpec::WhSampled(w) => write!(f, "wh-sampled({} samples)", w.len()),
        }
    }
}

/// Infinite Ginibre kernel
/// `e^{iπ(x'ξ' - xξ)} e^{-π(|z|² + |w|²)/2} e^{π z conj(w)}`.
pub fn ginibre_kernel(z: Point2, w: Point2) -> Complex64 {
    // Combined exponent: real part is -π|z-w|²/2, so nothing overflows.
    let zw = z.to_complex() * w.to_complex().conj();
    let re = -0.5 * PI * z.dist_sqr(w);
    let im = PI * (w.x * w.y - z.x * z.y) + PI * zw.im;
    Complex64::from_polar(re.exp(), im)
}

/// Landau level `n` kernel: the Ginibre kernel times `L_n(π|z - w|²)`.
pub fn landau_kernel(n: usize, z: Point2, w: Point2) -> Complex64 {
    ginibre_kernel(z, w) * laguerre(n, PI * z.dist_sqr(w))
}

/// Weyl-Heisenberg kernel. Hermite windows delegate to the Landau kernel of
/// the same index; sampled windows use
/// `K(z, w) = e^{-2πi(ξ - ξ')x'} V_g g(x - x', ξ - ξ')`.
pub fn wh_kernel(spec: &KernelSpec, z: Point2, w: Point2) -> Result<Complex64> {
    match spec {
        KernelSpec::WhHermite(n) => {
            if *n > HERMITE_MAX {
                return Err(Error::HermiteIndex(*n));
            }
            Ok(landau_kernel(*n, z, w))
        }
        KernelSpec::WhSampled(g) => {
            let v = stft(g, g, z.x - w.x, z.y - w.y)?;
            Ok(v * Complex64::from_polar(1.0, -2.0 * PI * (z.y - w.y) * w.x))
        }
        other => Err(Error::InvalidArgument(format!("wh_kernel needs a Weyl-Heisenberg spec, got {other}"))),
    }
}
