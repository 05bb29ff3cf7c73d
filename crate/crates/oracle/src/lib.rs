//! Reference computations for the test suites.
//!
//! Everything here is deliberately naive and shares no code with the
//! `sinc-nystrom` library: brute-force adaptive quadrature, bisection and
//! finite differences. Tests use these to produce expected values that are
//! independent of the implementation paths they check.

#![allow(clippy::excessive_precision)]

/// Kronrod 15-point abscissae on [-1, 1] (non-negative half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss 7-point weights, matching XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One Gauss-Kronrod 7/15 panel: (kronrod estimate, |kronrod - gauss|).
pub fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let c = 0.5 * (lo + hi);
    let r = 0.5 * (hi - lo);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for k in 0..7 {
        let dx = r * XGK[k];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[k] * s;
        if k % 2 == 1 {
            gauss += WG[k / 2] * s;
        }
    }
    (kron * r, ((kron - gauss) * r).abs())
}

/// Adaptive Gauss-Kronrod quadrature of `f` over `[lo, hi]`.
///
/// Bisects recursively until each panel's Gauss/Kronrod disagreement is
/// below its share of `tol` or the depth limit is reached. `hi < lo` yields
/// the negated integral.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    if lo == hi {
        return 0.0;
    }
    if hi < lo {
        return -integrate(f, hi, lo, tol);
    }
    let (whole, err) = gk15(&f, lo, hi);
    adapt(&f, lo, hi, whole, err, tol, 0)
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    whole: f64,
    err: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    // The Gauss/Kronrod difference badly overestimates the Kronrod error on
    // smooth panels, so accept a panel once it is well below tolerance.
    if err <= tol || depth >= 60 || err.is_nan() {
        return whole;
    }
    let mid = 0.5 * (lo + hi);
    let (left, el) = gk15(f, lo, mid);
    let (right, er) = gk15(f, mid, hi);
    adapt(f, lo, mid, left, el, 0.5 * tol, depth + 1)
        + adapt(f, mid, hi, right, er, 0.5 * tol, depth + 1)
}

/// Sine integral by direct quadrature of sin(t)/t, split into unit panels so
/// the oscillation never spans a single adaptive root interval.
pub fn si_quadrature(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let sinc = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
    let sign = x.signum();
    let ax = x.abs();
    let panels = ax.ceil() as usize;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = k as f64;
        let hi = ((k + 1) as f64).min(ax);
        if hi > lo {
            total += integrate(sinc, lo, hi, 1e-16);
        }
    }
    sign * total
}

/// Root of a monotone increasing `f` on `[lo, hi]` by plain bisection.
pub fn bisect<F: Fn(f64) -> f64>(f: F, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Centered difference (f(x+s) - f(x-s)) / 2s.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, step: f64) -> f64 {
    (f(x + step) - f(x - step)) / (2.0 * step)
}

/// Fourth-order centered difference, used where a second-order stencil
/// leaves too much truncation error.
pub fn central_difference4<F: Fn(f64) -> f64>(f: F, x: f64, step: f64) -> f64 {
    (-f(x + 2.0 * step) + 8.0 * f(x + step) - 8.0 * f(x - step) + f(x - 2.0 * step)) / (12.0 * step)
}

/// Natural log of `scale / (1 + exp(z))` without overflow, for checking
/// endpoint distances of transformed grids.
pub fn ln_scaled_logistic(scale: f64, z: f64) -> f64 {
    let softplus = if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    };
    scale.ln() - softplus
}

/// Ordinary least squares of `y` on `x`: (slope, intercept, r_squared).
pub fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        sxy += (xi - mx) * (yi - my);
        sxx += (xi - mx) * (xi - mx);
        syy += (yi - my) * (yi - my);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    (slope, my - slope * mx, r2)
}
