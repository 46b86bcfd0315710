//! Class I / Class II model selection on variance curves.

use std::fmt;

use super::sweep::ScalingReport;

/// Minimum number of records for a classification.
pub const MIN_RECORDS: usize = 4;
/// A model wins when its relative residual is at least this factor smaller.
pub const SELECTION_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hyperuniformity {
    /// `V ≈ a·L`
    ClassOne,
    /// `V ≈ a·L·ln L`
    ClassTwo,
    Inconclusive,
}

impl fmt::Display for Hyperuniformity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hyperuniformity::ClassOne => "class_one",
            Hyperuniformity::ClassTwo => "class_two",
            Hyperuniformity::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub class: Hyperuniformity,
    /// Relative residual of the fit `V = a·L`.
    pub residual_linear: f64,
    /// Relative residual of the fit `V = a·L·ln L`.
    pub residual_log: f64,
    pub coef_linear: f64,
    pub coef_log: f64,
    pub points_used: usize,
}

/// Index of the first point of the top half of an `n`-point grid.
pub fn top_half_start(n: usize) -> usize {
    n / 2
}

/// Least-squares fit `y = a·x` through the origin: `(a, ‖y - a x‖ / ‖y‖)`.
pub fn fit_through_origin(x: &[f64], y: &[f64]) -> (f64, f64) {
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let a = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let res: f64 = x.iter().zip(y).map(|(u, v)| (v - a * u).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    (a, if norm > 0.0 { res / norm } else { f64::INFINITY })
}

/// Classifies a variance curve `V(L)` from the top half of the grid.
pub fn classify_curve(ls: &[f64], vs: &[f64]) -> Classification {
    let n = ls.len().min(vs.len());
    if n < MIN_RECORDS {
        return Classification {
            class: Hyperuniformity::Inconclusive,
            residual_linear: f64::NAN,
            residual_log: f64::NAN,
            coef_linear: f64::NAN,
            coef_log: f64::NAN,
            points_used: 0,
        };
    }
    let start = top_half_start(n);
    let (l, v) = (&ls[start..n], &vs[start..n]);
    let (coef_linear, residual_linear) = fit_through_origin(l, v);
    let llog: Vec<f64> = l.iter().map(|x| x * x.ln()).collect();
    let (coef_log, residual_log) = fit_through_origin(&llog, v);
    let class = if residual_linear * SELECTION_FACTOR <= residual_log {
        Hyperuniformity::ClassOne
    } else if residual_log * SELECTION_FACTOR <= residual_linear {
        Hyperuniformity::ClassTwo
    } else {
        Hyperuniformity::Inconclusive
    };
    Classification { class, residual_linear, residual_log, coef_linear, coef_log, points_used: n - start }
}

pub fn classify_hyperuniformity(report: &ScalingReport) -> Classification {
    let ls: Vec<f64> = report.records.iter().map(|r| r.l).collect();
    let vs: Vec<f64> = report.records.iter().map(|r| r.variance).collect();
    classify_curve(&ls, &vs)
}
