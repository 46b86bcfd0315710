use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gauss;
use crate::geometry::Point2;
use crate::kernels::special::{laguerre, laguerre_roots, HERMITE_MAX};
use crate::kernels::window::stft;
use crate::kernels::KernelSpec;

/// Integrand magnitude below which the plane integrals are truncated.
const TAIL: f64 = 1e-12;
const PANEL: f64 = 0.25;
const PANEL_POINTS: usize = 16;

/// The window constant `C_g = [∫|V_g g|]² · ∫(1 + |z|)^{2s} |V_g g|²` and its
/// two factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowConstant {
    pub value: f64,
    /// `∫ |V_g g(z)| dz`
    pub l1_norm: f64,
    /// `∫ (1 + |z|)^{2s} |V_g g(z)|² dz`
    pub weighted_l2: f64,
    /// Truncation radius of both plane integrals.
    pub radius: f64,
}

impl WindowConstant {
    /// The squared first factor `[∫|V_g g|]²`.
    pub fn l1_factor(&self) -> f64 {
        self.l1_norm * self.l1_norm
    }
}

/// Evaluates `C_g` for a Weyl-Heisenberg kernel by polar quadrature out to
/// the radius where the integrands fall below `1e-12`. A window whose
/// ambiguity function does not decay within its grid violates the
/// hypothesis and is reported as [`Error::HypothesisViolated`].
pub fn window_constant(spec: &KernelSpec, s: f64) -> Result<WindowConstant> {
    if !(s.is_finite() && s >= 0.5) {
        return Err(Error::InvalidArgument(format!("window constant needs s >= 1/2, got {s}")));
    }
    match spec {
        KernelSpec::WhHermite(n) => {
            if *n > HERMITE_MAX {
                return Err(Error::HermiteIndex(*n));
            }
            let n = *n;
            let modulus = move |r: f64| laguerre(n, PI * r * r).abs() * (-0.5 * PI * r * r).exp();
            let roots: Vec<f64> = laguerre_roots(n).into_iter().map(|x| (x / PI).sqrt()).collect();
            let mut r = roots.last().copied().unwrap_or(0.0) + PANEL;
            while weight(r, s) * modulus(r) > TAIL {
                r += PANEL;
            }
            let mut breaks = vec![0.0];
            breaks.extend(roots);
            breaks.push(r);
            let f = |p: Point2| Ok(modulus(p.norm_sqr().sqrt()));
            // radial integrand: one angle is exact
            assemble(&f, &breaks, 1, s, r)
        }
        KernelSpec::WhSampled(g) => {
            let ambiguity = |p: Point2| -> Result<f64> {
                stft(g, g, p.x, p.y)
                    .map(|v| v.norm())
                    .map_err(|e| Error::HypothesisViolated(format!("ambiguity function at {p:?}: {e}")))
            };
            let span = g.t_end() - g.t0();
            let ring_max = |r: f64| -> Result<f64> {
                let mut m = 0.0f64;
                for k in 0..32 {
                    let (sn, cs) = (2.0 * PI * k as f64 / 32.0).sin_cos();
                    m = m.max(ambiguity(Point2::new(r * cs, r * sn))?);
                }
                Ok(m)
            };
            let mut r = PANEL;
            let mut quiet = 0;
            while quiet < 2 {
                if r > span {
                    return Err(Error::HypothesisViolated(format!(
                        "|V_g g| does not decay below {TAIL:e} within the window grid span {span}"
                    )));
                }
                if weight(r, s) * ring_max(r)? < TAIL {
                    quiet += 1;
                } else {
                    quiet = 0;
                }
                r += PANEL;
            }
            assemble(&ambiguity, &[0.0, r], 64, s, r)
        }
        other => Err(Error::InvalidArgument(format!("window constant needs a Weyl-Heisenberg kernel, got {other}"))),
    }
}

fn weight(r: f64, s: f64) -> f64 {
    (1.0 + r).powf(2.0 * s) * r.max(1.0)
}

fn assemble(
    modulus: &dyn Fn(Point2) -> Result<f64>,
    breaks: &[f64],
    n_theta: usize,
    s: f64,
    radius: f64,
) -> Result<WindowConstant> {
    let (rs, wr) = gauss::composite(breaks, PANEL, PANEL_POINTS);
    let dtheta = 2.0 * PI / n_theta as f64;
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    for (r, w) in rs.iter().zip(&wr) {
        let radial_weight = (1.0 + r).powf(2.0 * s);
        for k in 0..n_theta {
            let (sn, cs) = (k as f64 * dtheta).sin_cos();
            let m = modulus(Point2::new(r * cs, r * sn))?;
            let dw = w * r * dtheta;
            l1 += dw * m;
            l2 += dw * radial_weight * m * m;
        }
    }
    Ok(WindowConstant { value: l1 * l1 * l2, l1_norm: l1, weighted_l2: l2, radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::WindowSamples;
    use num_complex::Complex64;
    use std::sync::Arc;

    #[test]
    fn gaussian_constant_closed_form() {
        // [∫ e^{-π r²/2} dA]² = 2² and ∫ (1 + r) e^{-π r²} dA = 1 + 1/2
        let c = window_constant(&KernelSpec::WhHermite(0), 0.5).unwrap();
        assert!((c.l1_factor() - 4.0).abs() < 1e-10);
        assert!((c.weighted_l2 - 1.5).abs() < 1e-10);
        assert!((c.value - 6.0).abs() < 1e-9);
    }

    #[test]
    fn monotone_in_s() {
        for n in [0, 1, 3] {
            let spec = KernelSpec::WhHermite(n);
            let mut last = 0.0;
            for s in [0.5, 0.75, 1.0, 1.5, 2.0] {
                let c = window_constant(&spec, s).unwrap().value;
                assert!(c.is_finite());
                assert!(c >= last, "n={n} s={s}");
                last = c;
            }
        }
    }

    #[test]
    fn higher_hermite_l2_factor_at_s_half() {
        // ∫ |V_{h_1} h_1|² = 1 (Moyal); the weight (1 + r) makes it larger.
        let c = window_constant(&KernelSpec::WhHermite(1), 0.5).unwrap();
        assert!(c.weighted_l2 > 1.0);
        assert!(c.l1_norm > 2.0);
    }

    #[test]
    fn sampled_gaussian_agrees_with_hermite() {
        let g = Arc::new(WindowSamples::hermite(0, 6.0, 5e-3).unwrap());
        let c = window_constant(&KernelSpec::WhSampled(g), 0.5).unwrap();
        assert!((c.value - 6.0).abs() < 1e-3, "{}", c.value);
    }

    #[test]
    fn non_decaying_window_violates_hypothesis() {
        let boxcar = WindowSamples::from_fn(-1.0, 0.01, 201, |_| Complex64::new(1.0, 0.0)).unwrap();
        let err = window_constant(&KernelSpec::WhSampled(Arc::new(boxcar)), 0.5).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated(_)));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(window_constant(&KernelSpec::WhHermite(0), 0.4).is_err());
        assert!(window_constant(&KernelSpec::Ginibre, 1.0).is_err());
    }
}
