//! Sine integral and the Sinc indefinite-integration basis.
//!
//! `Si(x) = ∫_0^x sin(τ)/τ dτ` is evaluated by its Maclaurin series for
//! `|x| <= 4` and through the exponential integral `E1(ix)` otherwise, using
//! `Si(x) = π/2 + Im E1(ix)` with `E1` from its Lentz continued fraction.
//! The continued fraction is the auxiliary-function form
//! `π/2 - f(x) cos x - g(x) sin x` with `f + ig` expanded to convergence.
//! Both branches are accurate to a few ulps of `π/2`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 4.0;
const CF_EPS: f64 = 1e-17;
const CF_MAX_ITER: usize = 1000;

/// Sine integral `Si(x)`.
///
/// Infinite arguments map to `±π/2`; NaN is rejected.
pub fn si(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain {
            what: "si",
            value: x,
        });
    }
    Ok(si_unchecked(x))
}

/// `Si(x)` without the NaN check; NaN propagates.
pub(crate) fn si_unchecked(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT {
        si_series(ax)
    } else if ax.is_infinite() {
        FRAC_PI_2
    } else {
        si_continued_fraction(ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn si_series(x: f64) -> f64 {
    // Σ (-1)^k x^(2k+1) / ((2k+1) (2k+1)!)
    let x2 = x * x;
    let mut power = x; // x^(2k+1) / (2k+1)!
    let mut sum = x;
    let mut k = 0usize;
    loop {
        let m = (2 * k + 2) as f64;
        power *= -x2 / (m * (m + 1.0));
        k += 1;
        let term = power / (2 * k + 1) as f64;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            return sum;
        }
    }
}

fn si_continued_fraction(x: f64) -> f64 {
    // Modified Lentz on E1(z) e^z = 1/(z+1- 1/(z+3- 4/(z+5- ...))), z = ix.
    let tiny = f64::MIN_POSITIVE;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..=CF_MAX_ITER {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < CF_EPS {
            break;
        }
    }
    let e1 = h * Complex64::new(x.cos(), -x.sin());
    FRAC_PI_2 + e1.im
}

/// Sinc indefinite-integration basis
/// `J(j, h)(ξ) = ∫_{-∞}^{ξ} sinc(x/h - j) dx = h (1/2 + Si(π(ξ/h - j))/π)`.
///
/// Bounded by `|J| <= 1.1 h` (it dips to about `-0.09 h`); tends to 0 as `ξ → -∞` and to `h` as
/// `ξ → +∞`, and infinite `ξ` is accepted for those limits.
pub fn basis_j(j: i64, h: f64, xi: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain {
            what: "basis_j mesh size",
            value: h,
        });
    }
    if xi.is_nan() {
        return Err(Error::Domain {
            what: "basis_j",
            value: xi,
        });
    }
    Ok(basis_j_unchecked(j, h, xi))
}

pub(crate) fn basis_j_unchecked(j: i64, h: f64, xi: f64) -> f64 {
    h * (0.5 + si_unchecked(PI * (xi / h - j as f64)) / PI)
}
