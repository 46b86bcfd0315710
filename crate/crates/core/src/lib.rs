//! Numerical laboratory for planar determinantal point processes.
//!
//! The crate discretizes the concentration operator of a correlation kernel
//! (infinite Ginibre, higher Landau levels, Weyl-Heisenberg ensembles with
//! Hermite or sampled windows) on a compact planar domain, computes its
//! spectrum, and evaluates the spectral functionals built from it: expected
//! count, number variance, entanglement entropy and Schatten-type traces.
//!
//! Layout:
//!
//! * [`geometry`]: domains, dilation, membership and quadrature rules.
//! * [`kernels`]: correlation kernels, STFT, Hermite/Laguerre functions.
//! * [`spectral`]: Nyström assembly, eigenvalues, disk oracles.
//! * [`functionals`]: entropy, variance, Schatten traces.
//! * [`finite`]: the finite (truncated) ensemble, its intensity and sampler.
//! * [`lab`]: configuration, dilation sweeps, classification and reports.

pub mod error;
pub mod finite;
pub mod functionals;
pub mod geometry;
pub mod kernels;
pub mod lab;
pub mod spectral;

mod gauss;

pub use error::{Error, Result};
pub use finite::{CountStats, FiniteEnsemble, PointConfiguration};
pub use functionals::FunctionalReport;
pub use geometry::{Domain, Point2, QuadratureRule, Shape};
pub use kernels::{KernelSpec, WindowSamples};
pub use spectral::{ConcentrationMatrix, RadialSpectrum, Spectrum};
