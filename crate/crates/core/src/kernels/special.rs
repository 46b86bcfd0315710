use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// Largest Hermite index accepted by [`hermite_function`].
pub const HERMITE_MAX: usize = 30;

/// Laguerre polynomial `L_n(x)` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}`.
pub fn laguerre(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Hermite function `h_n(t)`, normalized so `∫ h_n² = 1` and
/// `h_0(t) = 2^{1/4} e^{-π t²}`.
///
/// Evaluated as `(2π)^{1/4} ψ_n(√(2π) t)` with `ψ_n` the orthonormal Hermite
/// functions, via their stable recurrence.
pub fn hermite_function(n: usize, t: f64) -> Result<f64> {
    if n > HERMITE_MAX {
        return Err(Error::HermiteIndex(n));
    }
    let u = (2.0 * PI).sqrt() * t;
    let mut prev = PI.powf(-0.25) * (-0.5 * u * u).exp();
    let mut cur = SQRT_2 * u * prev;
    if n == 0 {
        return Ok((2.0 * PI).powf(0.25) * prev);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    Ok((2.0 * PI).powf(0.25) * cur)
}

/// Roots of `L_n` in ascending order, by bisection between sign changes on a
/// fine scan of `(0, 4n + 2]`, which contains all of them.
pub fn laguerre_roots(n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let hi = 4.0 * n as f64 + 2.0;
    let steps = 4000 * n;
    let h = hi / steps as f64;
    let mut roots = Vec::with_capacity(n);
    let mut a = 0.0;
    let mut fa = laguerre(n, a);
    for k in 1..=steps {
        let b = k as f64 * h;
        let fb = laguerre(n, b);
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = laguerre(n, mid);
                if fm == 0.0 || hi - lo < 1e-15 * hi {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if flo * fm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    roots
}
