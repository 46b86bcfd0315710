//! The finite ensemble: the projection DPP built from the leading `N_Ω`
//! eigenfunctions of the concentration operator, `N_Ω = ⌈|Ω|⌉`.
//!
//! Eigenfunctions are extended off the quadrature nodes by the Nyström
//! formula and normalized in `L²(ℝ²)`:
//! `e_n(z) = λ_n^{-1/2} Σ_j √w_j φ_n[j] K(z, z_j)`.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use faer::Mat;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functionals::{entropy, expected_count, variance_spectral};
use crate::geometry::{Domain, Point2, QuadratureRule, Shape};
use crate::kernels::KernelSpec;
use crate::spectral::{assemble, eigenpairs, Spectrum, DEFAULT_SPECTRAL_TOL};

/// Smallest retained eigenvalue for a stable extension.
pub const MIN_EXTENSION_EIGENVALUE: f64 = 1e-6;
/// Default enlargement of the bounding box for proposals and tail checks.
pub const DEFAULT_BOX_FACTOR: f64 = 3.0;
/// Default tolerated intensity mass outside the enclosing box, relative to `N_Ω`.
pub const DEFAULT_TAIL_TOL: f64 = 1e-4;

/// Smallest margin between Ω's bounding box and the tail box; the Gaussian
/// decay of ρ₁ leaves about `e^{-9π}` beyond it.
pub const MIN_TAIL_MARGIN: f64 = 3.0;
/// Gauss–Legendre nodes per unit length on the tail box.
pub const TAIL_NODES_PER_UNIT: f64 = 8.0;

const MAX_ATTEMPTS_PER_POINT: usize = 100_000;
// ρ₁ ≤ K(z, z) = 1, with room for rounding
const ENVELOPE: f64 = 1.0 + 1e-9;

/// `N_Ω = ⌈|Ω|⌉`. Areas within 1e-12 (relative) above an integer round down
/// to it, so `πR² = 10` gives 10 despite rounding in `R`.
pub fn truncation_rank(d: &Domain) -> usize {
    let area = d.area();
    let nearest = area.round();
    if (area - nearest).abs() <= 1e-12 * area.max(1.0) {
        nearest.max(1.0) as usize
    } else {
        area.ceil() as usize
    }
}

#[derive(Debug, Clone)]
pub struct FiniteEnsemble {
    kernel: KernelSpec,
    domain: Domain,
    rule: QuadratureRule,
    spectrum: Spectrum,
    rank: usize,
    leading: Vec<f64>,
    // discrete eigenvectors φ_n, one column per retained eigenpair
    vectors: Mat<Complex64>,
    // coef[n][j] = √w_j φ_n[j] / √λ_n
    coef: Vec<Vec<Complex64>>,
}

/// Builds the finite ensemble of `spec` on `d` discretized by `rule`.
pub fn build_finite(spec: &KernelSpec, d: &Domain, rule: &QuadratureRule) -> Result<FiniteEnsemble> {
    let rank = truncation_rank(d);
    if rule.len() < 3 * rank {
        return Err(Error::QuadratureOrder {
            order: rule.order(),
            hint: format!("rule has {} nodes but 3·N_Ω = {} eigenpairs are required", rule.len(), 3 * rank),
        });
    }
    let matrix = assemble(spec, rule)?;
    let (spectrum, all_vectors) = eigenpairs(&matrix, DEFAULT_SPECTRAL_TOL)?;
    let spectrum = spectrum.validated()?;
    let leading: Vec<f64> = spectrum.raw_lambdas()[..rank].to_vec();
    let smallest = leading[rank - 1];
    if smallest < MIN_EXTENSION_EIGENVALUE {
        return Err(Error::UnstableExtension { lambda: smallest, rank });
    }
    let vectors = Mat::from_fn(rule.len(), rank, |i, k| all_vectors[(i, k)]);
    let sqrt_w: Vec<f64> = rule.weights().iter().map(|w| w.sqrt()).collect();
    let coef = (0..rank)
        .map(|k| {
            let scale = leading[k].sqrt().recip();
            (0..rule.len()).map(|j| vectors[(j, k)] * (sqrt_w[j] * scale)).collect()
        })
        .collect();
    Ok(FiniteEnsemble {
        kernel: spec.clone(),
        domain: d.clone(),
        rule: rule.clone(),
        spectrum,
        rank,
        leading,
        vectors,
        coef,
    })
}

impl FiniteEnsemble {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    /// Full spectrum of the discretized concentration operator.
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// `λ_1 ≥ … ≥ λ_{N_Ω}`.
    pub fn leading_eigenvalues(&self) -> &[f64] {
        &self.leading
    }

    /// `E[X^{N_Ω}(Ω)] = Σ_{n ≤ N_Ω} λ_n`.
    pub fn expected_inside(&self) -> f64 {
        self.leading.iter().sum()
    }

    /// Count variance of the finite ensemble in Ω, `Σ_{n ≤ N_Ω} λ_n (1 - λ_n)`.
    pub fn variance_inside(&self) -> f64 {
        self.leading.iter().map(|l| l * (1.0 - l)).sum()
    }

    /// `max |Φ* Φ - I|` over the retained discrete eigenvectors.
    pub fn gram_defect(&self) -> f64 {
        let n = self.vectors.nrows();
        let mut worst = 0.0f64;
        for a in 0..self.rank {
            for b in 0..self.rank {
                let mut s = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    s += self.vectors[(i, a)].conj() * self.vectors[(i, b)];
                }
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    /// `(e_1(z), …, e_{N_Ω}(z))`.
    pub fn eigenfunctions(&self, z: Point2) -> Result<Vec<Complex64>> {
        let nodes = self.rule.nodes();
        let k: Vec<Complex64> = nodes.iter().map(|&zj| self.kernel.eval(z, zj)).collect::<Result<_>>()?;
        Ok(self.coef.iter().map(|row| row.iter().zip(&k).map(|(c, k)| c * k).sum()).collect())
    }

    /// Truncated kernel `Σ_n e_n(z) conj(e_n(w))`.
    pub fn truncated_kernel(&self, z: Point2, w: Point2) -> Result<Complex64> {
        let a = self.eigenfunctions(z)?;
        let b = self.eigenfunctions(w)?;
        Ok(a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum())
    }

    /// Proposal / tail box: the bounding box enlarged by `factor`.
    pub fn enclosing_box(&self, factor: f64) -> Result<Domain> {
        self.domain.enclosing_box(factor)
    }
}

/// Box for intensity integrals: the bounding box enlarged by `factor`, and
/// by at least [`MIN_TAIL_MARGIN`] on each side.
pub fn tail_box(fe: &FiniteEnsemble, factor: f64) -> Result<Domain> {
    let scaled = fe.domain.enclosing_box(factor)?;
    let (lo, hi) = fe.domain.bounding_box();
    let (slo, shi) = scaled.bounding_box();
    let lo = Point2::new(slo.x.min(lo.x - MIN_TAIL_MARGIN), slo.y.min(lo.y - MIN_TAIL_MARGIN));
    let hi = Point2::new(shi.x.max(hi.x + MIN_TAIL_MARGIN), shi.y.max(hi.y + MIN_TAIL_MARGIN));
    Domain::new(Shape::Rectangle { corner: lo, width: hi.x - lo.x, height: hi.y - lo.y })
}

/// Tensor Gauss–Legendre rule on [`tail_box`].
pub fn tail_box_rule(fe: &FiniteEnsemble, factor: f64) -> Result<QuadratureRule> {
    let b = tail_box(fe, factor)?;
    let order = ((TAIL_NODES_PER_UNIT * b.extent()).ceil() as usize).max(crate::geometry::MIN_ORDER);
    b.quadrature(order)
}

/// One-point intensity `ρ₁(z) = Σ_{n ≤ N_Ω} |e_n(z)|²`.
pub fn intensity_finite(fe: &FiniteEnsemble, z: Point2) -> Result<f64> {
    Ok(fe.eigenfunctions(z)?.iter().map(|v| v.norm_sqr()).sum())
}

/// `∫ |ρ₁ - 1_Ω|` and its parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Deviation {
    pub deviation: f64,
    /// `∫_Ω |ρ₁ - 1|`
    pub inside: f64,
    /// `∫_{box \ Ω} ρ₁`
    pub outside: f64,
    /// `∫_box ρ₁`
    pub box_mass: f64,
    /// `N_Ω - ∫_box ρ₁`, the estimated mass beyond the box.
    pub tail: f64,
}

/// L¹ distance between the finite-ensemble intensity and `1_Ω`.
///
/// The indicator jumps on ∂Ω, so the integral is split: `∫_Ω |ρ₁ - 1|` on
/// the ensemble's own rule, plus `∫_box ρ₁ - ∫_Ω ρ₁` where both pieces have
/// smooth integrands. `quad_box` must cover a box containing Ω.
pub fn l1_deviation(fe: &FiniteEnsemble, quad_box: &QuadratureRule, tail_tol: f64) -> Result<L1Deviation> {
    let (lo, hi) = fe.domain.bounding_box();
    let target = quad_box.target();
    if !(target.contains(lo) && target.contains(hi)) {
        return Err(Error::InvalidArgument("quadrature box does not contain the domain".into()));
    }
    let on_domain = |rule: &QuadratureRule| -> Result<Vec<f64>> {
        rule.nodes().par_iter().map(|&z| intensity_finite(fe, z)).collect()
    };
    let rho_in = on_domain(&fe.rule)?;
    let rho_box = on_domain(quad_box)?;
    let w_in = fe.rule.weights();
    let inside: f64 = rho_in.iter().zip(w_in).map(|(r, w)| w * (r - 1.0).abs()).sum();
    let mass_in: f64 = rho_in.iter().zip(w_in).map(|(r, w)| w * r).sum();
    let box_mass: f64 = rho_box.iter().zip(quad_box.weights()).map(|(r, w)| w * r).sum();
    let tail = fe.rank as f64 - box_mass;
    let limit = tail_tol * fe.rank as f64;
    if tail > limit {
        return Err(Error::IntensityTail { tail, limit });
    }
    let outside = box_mass - mass_in;
    Ok(L1Deviation { deviation: inside + outside, inside, outside, box_mass, tail })
}

/// `(N_Ω - Σ_{n ≤ N_Ω} λ_n) + (trace - Σ_{n ≤ N_Ω} λ_n)`, the closed form the
/// L¹ deviation must equal.
pub fn l1_middle_identity(fe: &FiniteEnsemble) -> f64 {
    let inside = fe.expected_inside();
    (fe.rank as f64 - inside) + (expected_count(&fe.spectrum) - inside)
}

/// The gap `N_Ω - Σ_{n ≤ N_Ω} λ_n` with the quantities around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    pub gap: f64,
    /// Number variance of the full ensemble on Ω.
    pub variance: f64,
    pub entropy: f64,
    /// `V ≤ 2·gap` (with 1e-12 slack).
    pub chain_holds: bool,
    /// `S / gap` (NaN when the gap vanishes).
    pub entropy_over_gap: f64,
}

pub fn truncation_gap(fe: &FiniteEnsemble) -> GapReport {
    gap_report(fe.rank, &fe.leading, &fe.spectrum)
}

/// Gap report from a rank and a spectrum (leading values taken from it).
pub fn gap_from_spectrum(rank: usize, spectrum: &Spectrum) -> GapReport {
    let n = rank.min(spectrum.len());
    gap_report(rank, &spectrum.lambdas()[..n], spectrum)
}

fn gap_report(rank: usize, leading: &[f64], spectrum: &Spectrum) -> GapReport {
    let gap = (rank as f64 - leading.iter().sum::<f64>()).max(0.0);
    let variance = variance_spectral(spectrum);
    let s = entropy(spectrum);
    GapReport {
        gap,
        variance,
        entropy: s,
        chain_holds: variance <= 2.0 * gap + 1e-12,
        entropy_over_gap: if gap > 0.0 { s / gap } else { f64::NAN },
    }
}

/// A realization of the finite ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    pub points: Vec<Point2>,
    pub seed: u64,
    pub stream: u64,
}

/// One exact sample, from the generator seeded by `seed` on stream 0.
pub fn sample(fe: &FiniteEnsemble, seed: u64) -> Result<PointConfiguration> {
    sample_stream(fe, seed, 0, DEFAULT_BOX_FACTOR)
}

/// Sequential projection-DPP sampler: each point is drawn from the
/// conditional density `‖P_⊥ v(z)‖² / (N - k)`, `v(z) = (e_n(z))_n`, by
/// uniform proposals on the enlarged bounding box and rejection against
/// the envelope `ρ₁ ≤ 1`.
pub fn sample_stream(fe: &FiniteEnsemble, seed: u64, stream: u64, box_factor: f64) -> Result<PointConfiguration> {
    let bbox = fe.enclosing_box(box_factor)?;
    let (lo, hi) = bbox.bounding_box();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(fe.rank);
    let mut points = Vec::with_capacity(fe.rank);
    while points.len() < fe.rank {
        let mut attempts = 0;
        loop {
            attempts += 1;
            if attempts > MAX_ATTEMPTS_PER_POINT {
                return Err(Error::SamplerStall { attempts: MAX_ATTEMPTS_PER_POINT });
            }
            let z = Point2::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y));
            let mut v = fe.eigenfunctions(z)?;
            for q in &basis {
                let c: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
            let residual: f64 = v.iter().map(|x| x.norm_sqr()).sum();
            if rng.random::<f64>() * ENVELOPE < residual {
                let scale = residual.sqrt().recip();
                basis.push(v.into_iter().map(|x| x * scale).collect());
                points.push(z);
                break;
            }
        }
    }
    Ok(PointConfiguration { points, seed, stream })
}

/// `count` independent samples on streams `0..count`, in parallel.
pub fn sample_many(fe: &FiniteEnsemble, seed: u64, count: usize, box_factor: f64) -> Result<Vec<PointConfiguration>> {
    (0..count as u64).into_par_iter().map(|s| sample_stream(fe, seed, s, box_factor)).collect()
}

/// Sample statistics of the number of points inside a domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountStats {
    pub n_samples: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Standard error of the mean.
    pub stderr_mean: f64,
    /// Asymptotic standard error of the sample variance, `√((m₄ - s⁴)/n)`.
    pub stderr_variance: f64,
}

pub fn empirical_count_stats(samples: &[PointConfiguration], d: &Domain) -> Result<CountStats> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("count statistics need at least two samples".into()));
    }
    let counts: Vec<f64> = samples.iter().map(|s| s.points.iter().filter(|p| d.contains(**p)).count() as f64).collect();
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<f64>() / n;
    let m2 = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>();
    let m4 = counts.iter().map(|c| (c - mean).powi(4)).sum::<f64>() / n;
    let variance = m2 / (n - 1.0);
    Ok(CountStats {
        n_samples: counts.len(),
        mean,
        variance,
        stderr_mean: (variance / n).sqrt(),
        stderr_variance: ((m4 - variance * variance).max(0.0) / n).sqrt(),
    })
}

/// Finite Ginibre kernel
/// `e^{iπ(x'ξ' - xξ)} e^{-π(|z|² + |w|²)/2} Σ_{n<N} (π z conj(w))^n / n!`,
/// evaluated in closed form.
pub fn finite_ginibre_kernel(n: usize, z: Point2, w: Point2) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidArgument("finite Ginibre kernel needs N >= 1".into()));
    }
    let x = z.to_complex() * w.to_complex().conj() * PI;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..n {
        term *= x / k as f64;
        sum += term;
    }
    let phase = Complex64::from_polar(1.0, PI * (w.x * w.y - z.x * z.y));
    Ok(phase * (-0.5 * PI * (z.norm_sqr() + w.norm_sqr())).exp() * sum)
}

/// Points CSV: `sample,x,y`.
pub fn write_points_csv<W: Write>(samples: &[PointConfiguration], mut out: W) -> std::io::Result<()> {
    writeln!(out, "sample,x,y")?;
    for (k, s) in samples.iter().enumerate() {
        for p in &s.points {
            writeln!(out, "{k},{:.16e},{:.16e}", p.x, p.y)?;
        }
    }
    Ok(())
}

/// Stats CSV: `n_samples,mean_count,var_count,stderr_mean`.
pub fn write_stats_csv<W: Write>(stats: &CountStats, mut out: W) -> std::io::Result<()> {
    writeln!(out, "n_samples,mean_count,var_count,stderr_mean")?;
    writeln!(out, "{},{:.16e},{:.16e},{:.16e}", stats.n_samples, stats.mean, stats.variance, stats.stderr_mean)
}

pub fn save_points_csv(samples: &[PointConfiguration], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    write_points_csv(samples, &mut out).and_then(|_| out.flush()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(area: f64) -> Domain {
        Domain::new(Shape::disk_with_area(area)).unwrap()
    }

    #[test]
    fn truncation_rank_examples() {
        assert_eq!(truncation_rank(&Domain::new(Shape::disk(1.0)).unwrap()), 4);
        assert_eq!(truncation_rank(&Domain::from_descriptor("rect:1x1").unwrap()), 1);
        assert_eq!(truncation_rank(&disk(10.0)), 10);
        assert_eq!(truncation_rank(&disk(4.0)), 4);
        assert_eq!(truncation_rank(&disk(4.3)), 5);
    }

    #[test]
    fn finite_ginibre_examples() {
        let z = Point2::new(0.4, -0.3);
        let w = Point2::new(-0.2, 0.5);
        let full = crate::kernels::ginibre_kernel(z, w);
        assert!((finite_ginibre_kernel(60, z, w).unwrap() - full).norm() < 1e-10);
        assert!((finite_ginibre_kernel(3, Point2::ORIGIN, Point2::ORIGIN).unwrap() - 1.0).norm() < 1e-15);
        let single = finite_ginibre_kernel(1, z, w).unwrap().norm();
        assert!((single - (-0.5 * PI * (z.norm_sqr() + w.norm_sqr())).exp()).abs() < 1e-15);
        assert!(finite_ginibre_kernel(0, z, w).is_err());
    }

    #[test]
    fn count_stats_examples() {
        let d = Domain::new(Shape::disk(1.0)).unwrap();
        let inside = |k: usize| PointConfiguration {
            points: (0..k).map(|i| Point2::new(0.1 * i as f64, 0.0)).collect(),
            seed: 0,
            stream: 0,
        };
        let outside = Point2::new(5.0, 5.0);
        let all_in = vec![inside(4), inside(4), inside(4)];
        let s = empirical_count_stats(&all_in, &d).unwrap();
        assert_eq!((s.mean, s.variance), (4.0, 0.0));
        let mut a = inside(1);
        a.points.extend([outside, outside, outside]);
        let mut b = inside(3);
        b.points.push(outside);
        let s = empirical_count_stats(&[a, b], &d).unwrap();
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.variance, 2.0);
        assert!(empirical_count_stats(&[inside(1)], &d).is_err());
    }

    #[test]
    fn gap_of_projection_spectrum_is_zero() {
        let s = Spectrum::from_values(vec![1.0, 1.0, 1.0, 0.0]).unwrap();
        let g = gap_from_spectrum(3, &s);
        assert_eq!(g.gap, 0.0);
        assert!(g.chain_holds);
    }

    #[test]
    fn small_ensemble_basics() {
        let d = disk(1.0);
        let rule = d.quadrature(12).unwrap();
        let fe = build_finite(&KernelSpec::Ginibre, &d, &rule).unwrap();
        assert_eq!(fe.rank(), 1);
        assert!(fe.gram_defect() < 1e-8);
        assert!((fe.leading_eigenvalues()[0] - (1.0 - (-1.0f64).exp())).abs() < 1e-8);
        let g = truncation_gap(&fe);
        assert!((g.gap - (-1.0f64).exp()).abs() < 1e-8);
        let s = sample(&fe, 7).unwrap();
        assert_eq!(s.points.len(), 1);
        assert_eq!(sample(&fe, 7).unwrap(), s);
    }

    #[test]
    fn too_few_nodes_for_rank() {
        let d = disk(40.0);
        let rule = QuadratureRule::from_parts(
            (0..10).map(|i| Point2::new(0.1 * i as f64, 0.0)).collect(),
            vec![4.0; 10],
            d.clone(),
        )
        .unwrap();
        assert!(matches!(build_finite(&KernelSpec::Ginibre, &d, &rule), Err(Error::QuadratureOrder { .. })));
    }

    #[test]
    fn csv_headers() {
        let cfg = vec![PointConfiguration { points: vec![Point2::new(0.5, -1.0)], seed: 1, stream: 0 }];
        let mut buf = Vec::new();
        write_points_csv(&cfg, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("sample,x,y\n0,"));
        let stats = CountStats { n_samples: 2, mean: 1.0, variance: 0.5, stderr_mean: 0.5, stderr_variance: 0.1 };
        let mut buf = Vec::new();
        write_stats_csv(&stats, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("n_samples,mean_count,var_count,stderr_mean\n2,"));
    }
}
