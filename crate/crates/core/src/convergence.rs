//! Exponential-rate fits for convergence studies.
//!
//! Errors are modelled as `ln E_N ≈ intercept - c · x(N)` with
//! `x = √N` for SE and `x = N / log(2dN/α)` for DE. The predicted decay
//! constants are `c = √(π d α)` and `c = π d` respectively.

use std::f64::consts::PI;

use crate::transform::{Method, RegularityParams};

/// Errors below this are treated as rounding floor and excluded from fits.
pub const ERROR_FLOOR: f64 = 1e-13;

/// Abscissa against which `ln E_N` is regressed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateAxis {
    /// `√N`
    SqrtN,
    /// `N / log(2dN/α)`
    NOverLog { d: f64, alpha: f64 },
}

impl RateAxis {
    /// The axis matching a method's predicted law.
    pub fn natural(params: &RegularityParams) -> Self {
        match params.method {
            Method::Se => RateAxis::SqrtN,
            Method::De => RateAxis::NOverLog {
                d: params.d,
                alpha: params.alpha,
            },
        }
    }

    pub fn coordinate(&self, n: usize) -> f64 {
        let nf = n as f64;
        match *self {
            RateAxis::SqrtN => nf.sqrt(),
            RateAxis::NOverLog { d, alpha } => nf / (2.0 * d * nf / alpha).ln(),
        }
    }
}

/// Predicted decay constant: `√(π d α)` for SE, `π d` for DE.
pub fn predicted_rate(params: &RegularityParams) -> f64 {
    match params.method {
        Method::Se => (PI * params.d * params.alpha).sqrt(),
        Method::De => PI * params.d,
    }
}

/// Least-squares fit of `ln E = intercept - rate · x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    /// Decay constant `c` (positive when errors decrease).
    pub rate: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Number of points that entered the fit.
    pub points: usize,
}

/// Fits `(N, E_N)` pairs on `axis`, dropping non-finite errors and errors
/// below `floor`. Needs at least two surviving points.
pub fn fit_rate(samples: &[(usize, f64)], axis: RateAxis, floor: f64) -> Option<RateFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .filter(|(_, e)| e.is_finite() && *e >= floor)
        .map(|&(n, e)| (axis.coordinate(n), e.ln()))
        .unzip();
    if xs.len() < 2 {
        return None;
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Some(RateFit {
        rate: -slope,
        intercept: my - slope * mx,
        r_squared,
        points: xs.len(),
    })
}
