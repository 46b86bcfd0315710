//! Nyström discretization of the concentration operator and its spectrum.

use std::io::Write;
use std::path::Path;

use faer::{Mat, Side};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::QuadratureRule;
use crate::kernels::KernelSpec;

mod gamma;
mod radial;

pub use gamma::{ln_gamma, regularized_lower_incomplete_gamma};
pub use radial::{
    ginibre_disk_spectrum_analytic, landau_disk_spectrum_radial, RadialSpectrum, DISCARD_TOL, RADIAL_MAX_LEVEL,
};

/// Default tolerance on the clamp excess of a spectrum.
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-7;

/// Symmetrized Nyström matrix `A[i][j] = √(w_i w_j) K(z_i, z_j)`.
#[derive(Debug, Clone)]
pub struct ConcentrationMatrix {
    entries: Mat<Complex64>,
    kernel: KernelSpec,
    rule: QuadratureRule,
}

impl ConcentrationMatrix {
    pub fn entries(&self) -> &Mat<Complex64> {
        &self.entries
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// Real part of the matrix trace.
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).sum()
    }

    /// `max |A - A*|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

/// Assembles the concentration matrix on the nodes of `rule`. Only the lower
/// triangle is evaluated; the upper one is its conjugate, so the result is
/// exactly Hermitian.
pub fn assemble(spec: &KernelSpec, rule: &QuadratureRule) -> Result<ConcentrationMatrix> {
    let n = rule.len();
    let nodes = rule.nodes();
    let sqrt_w: Vec<f64> = rule.weights().iter().map(|w| w.sqrt()).collect();
    let columns: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            (j..n).map(|i| Ok(spec.eval(nodes[i], nodes[j])? * (sqrt_w[i] * sqrt_w[j]))).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut entries = Mat::<Complex64>::zeros(n, n);
    for (j, col) in columns.into_iter().enumerate() {
        for (k, v) in col.into_iter().enumerate() {
            let i = j + k;
            if i == j {
                entries[(i, i)] = Complex64::new(v.re, 0.0);
            } else {
                entries[(i, j)] = v;
                entries[(j, i)] = v.conj();
            }
        }
    }
    Ok(ConcentrationMatrix { entries, kernel: spec.clone(), rule: rule.clone() })
}

/// Eigenvalues sorted non-increasingly and clamped to [0, 1], with the raw
/// values and clamp excess retained.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    lambdas: Vec<f64>,
    raw: Vec<f64>,
    clamp_excess: f64,
    tolerance: f64,
}

impl Spectrum {
    /// Builds a spectrum from raw eigenvalues in any order.
    pub fn from_raw(mut raw: Vec<f64>, tolerance: f64) -> Spectrum {
        raw.sort_by(|a, b| b.total_cmp(a));
        let clamp_excess = raw.iter().fold(0.0f64, |m, &l| m.max(l - 1.0).max(-l));
        let lambdas = raw.iter().map(|l| l.clamp(0.0, 1.0)).collect();
        Spectrum { lambdas, raw, clamp_excess, tolerance }
    }

    /// Spectrum of exact values already in [0, 1] (analytic oracles, tests).
    pub fn from_values(values: Vec<f64>) -> Result<Spectrum> {
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidArgument(format!("eigenvalue {v} outside [0, 1]")));
        }
        Ok(Spectrum::from_raw(values, DEFAULT_SPECTRAL_TOL))
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn raw_lambdas(&self) -> &[f64] {
        &self.raw
    }

    pub fn clamp_excess(&self) -> f64 {
        self.clamp_excess
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Clamp excess above tolerance: the quadrature is under-resolved.
    pub fn is_flagged(&self) -> bool {
        self.clamp_excess > self.tolerance
    }

    /// Errors out on a flagged spectrum.
    pub fn validated(self) -> Result<Spectrum> {
        if self.is_flagged() {
            Err(Error::SpectrumFlagged { excess: self.clamp_excess, tolerance: self.tolerance })
        } else {
            Ok(self)
        }
    }

    /// CSV with header `index,lambda,raw_lambda`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "index,lambda,raw_lambda")?;
        for (i, (l, r)) in self.lambdas.iter().zip(&self.raw).enumerate() {
            writeln!(out, "{i},{l:.16e},{r:.16e}")?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        self.write_csv(&mut out).and_then(|_| out.flush()).map_err(|e| Error::io(path, e))
    }
}

/// Full Hermitian eigensolve of the concentration matrix.
pub fn eigenvalues(m: &ConcentrationMatrix, tol: f64) -> Result<Spectrum> {
    let raw = m.entries.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    Ok(Spectrum::from_raw(raw, tol))
}

/// Eigenpairs sorted by non-increasing eigenvalue: `(spectrum, vectors)`
/// where column `k` of `vectors` belongs to `spectrum.raw_lambdas()[k]`.
pub fn eigenpairs(m: &ConcentrationMatrix, tol: f64) -> Result<(Spectrum, Mat<Complex64>)> {
    let evd = m.entries.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let n = m.dim();
    // faer returns ascending order
    let raw: Vec<f64> = (0..n).rev().map(|k| evd.S()[k].re).collect();
    let u = evd.U();
    let vectors = Mat::from_fn(n, n, |i, k| u[(i, n - 1 - k)]);
    Ok((Spectrum::from_raw(raw, tol), vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Domain, Point2, Shape};

    #[test]
    fn one_node_rule_gives_its_weight() {
        let d = Domain::new(Shape::disk(1.0)).unwrap();
        let rule = QuadratureRule::from_parts(vec![Point2::new(0.1, 0.2)], vec![0.7], d).unwrap();
        let m = assemble(&KernelSpec::Landau(2), &rule).unwrap();
        assert_eq!(m.dim(), 1);
        assert!((m.get(0, 0) - Complex64::new(0.7, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hermitian_and_trace_equals_weight_sum() {
        let d = Domain::new(Shape::disk_with_area(1.0)).unwrap();
        let rule = d.quadrature(8).unwrap();
        let m = assemble(&KernelSpec::Ginibre, &rule).unwrap();
        assert_eq!(m.hermitian_defect(), 0.0);
        assert!((m.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_clamps_and_flags() {
        let s = Spectrum::from_raw(vec![0.2, 1.0 + 1e-5, -1e-9, 0.7], 1e-7);
        assert_eq!(s.lambdas(), &[1.0, 0.7, 0.2, 0.0]);
        assert!((s.clamp_excess() - 1e-5).abs() < 1e-15);
        assert!(s.is_flagged());
        assert!(matches!(s.validated(), Err(Error::SpectrumFlagged { .. })));
        let ok = Spectrum::from_raw(vec![0.5, -1e-12], 1e-7);
        assert!(!ok.is_flagged());
    }

    #[test]
    fn csv_layout() {
        let s = Spectrum::from_raw(vec![0.25, 0.5], 1e-7);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "index,lambda,raw_lambda");
        assert_eq!(lines[1], "0,5.0000000000000000e-1,5.0000000000000000e-1");
        assert_eq!(lines.len(), 3);
    }
}
