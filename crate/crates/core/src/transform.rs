//! Variable transformations, Sinc grids and indefinite-integration weights.
//!
//! Both maps send the real line onto `(a, b)`:
//!
//! ```text
//! SE:  ψ(x) = (b-a)/2 · tanh(x/2)            + (b+a)/2
//! DE:  ψ(x) = (b-a)/2 · tanh(π/2 · sinh x)   + (b+a)/2
//! ```
//!
//! Writing `z(x) = x` (SE) or `z(x) = π sinh x` (DE), the distances to the
//! endpoints are logistic functions of `z`:
//! `ψ(x) - a = (b-a)/(1+e^{-z})` and `b - ψ(x) = (b-a)/(1+e^{z})`. Grids keep
//! both distances so that integrands singular at an endpoint never see the
//! cancellation in `t - a` or `b - t`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::specfun::basis_j_unchecked;

/// Finite interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || a >= b {
            return Err(Error::InvalidParameter(format!(
                "interval requires finite a < b, got [{a}, {b}]"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Endpoint-aware view of an arbitrary abscissa.
    pub fn point(&self, t: f64) -> Point {
        Point {
            t,
            dist_a: t - self.a,
            dist_b: self.b - t,
        }
    }

    pub fn contains_open(&self, t: f64) -> bool {
        self.a < t && t < self.b
    }
}

/// A location in `[a, b]` together with its distances to both endpoints.
///
/// Problem data receives points in this form; near an endpoint the
/// corresponding distance carries full relative precision even when `t`
/// itself has rounded onto the endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub t: f64,
    pub dist_a: f64,
    pub dist_b: f64,
}

/// Which variable transformation the Sinc machinery composes with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Single-exponential (tanh) transformation.
    Se,
    /// Double-exponential (tanh-sinh) transformation.
    De,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Se, Method::De];

    fn logistic_arg(self, x: f64) -> f64 {
        match self {
            Method::Se => x,
            Method::De => PI * x.sinh(),
        }
    }

    /// `ψ(x)` as an endpoint-aware point.
    pub fn map_point(self, interval: &Interval, x: f64) -> Point {
        let len = interval.length();
        let z = self.logistic_arg(x);
        // e^{-|z|} keeps the small distance in the subnormal range instead of
        // overflowing e^{|z|}.
        let e = (-z.abs()).exp();
        let near = len * e / (1.0 + e);
        let far = len / (1.0 + e);
        let (dist_a, dist_b) = if z < 0.0 { (near, far) } else { (far, near) };
        let t = if z < 0.0 {
            interval.a + dist_a
        } else {
            interval.b - dist_b
        };
        Point { t, dist_a, dist_b }
    }

    /// The transformation `ψ(x)`.
    pub fn psi(self, interval: &Interval, x: f64) -> f64 {
        self.map_point(interval, x).t
    }

    /// `ψ'(x)`, evaluated in exponential form so it underflows cleanly to 0
    /// instead of producing `inf/inf`.
    pub fn psi_deriv(self, interval: &Interval, x: f64) -> f64 {
        let z = self.logistic_arg(x);
        let e = (-z.abs()).exp();
        if e == 0.0 {
            return 0.0;
        }
        let dz = match self {
            Method::Se => 1.0,
            Method::De => PI * x.cosh(),
        };
        interval.length() * dz * e / ((1.0 + e) * (1.0 + e))
    }

    /// `ψ^{-1}(t)` for `a < t < b`.
    pub fn psi_inverse(self, interval: &Interval, t: f64) -> Result<f64> {
        if !interval.contains_open(t) {
            return Err(Error::Domain {
                what: "psi_inverse",
                value: t,
            });
        }
        Ok(self.psi_inverse_point(interval.point(t)))
    }

    /// `ψ^{-1}` from endpoint distances. Returns `-∞` at `a` and `+∞` at `b`.
    pub fn psi_inverse_point(self, p: Point) -> f64 {
        let z = p.dist_a.ln() - p.dist_b.ln();
        match self {
            Method::Se => z,
            Method::De => (z / PI).asinh(),
        }
    }

    /// Supremum of admissible strip half-widths `d` for this map.
    pub fn max_strip_width(self) -> f64 {
        match self {
            Method::Se => PI,
            Method::De => PI / 2.0,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Se => "SE",
            Method::De => "DE",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "se" => Ok(Method::Se),
            "de" => Ok(Method::De),
            other => Err(Error::InvalidParameter(format!("unknown method '{other}'"))),
        }
    }
}

/// Analyticity parameters that fix the mesh size.
///
/// `alpha` is the endpoint decay exponent and `d` the strip half-width
/// actually used. `margin` records the ε that was subtracted from the
/// supremum to obtain `d`; it does not enter any computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityParams {
    pub method: Method,
    pub alpha: f64,
    pub d: f64,
    pub margin: f64,
}

impl RegularityParams {
    pub fn new(method: Method, alpha: f64, d: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        let d_max = method.max_strip_width();
        if !(d > 0.0 && d < d_max) {
            return Err(Error::InvalidParameter(format!(
                "{method} requires 0 < d < {d_max}, got {d}"
            )));
        }
        Ok(Self {
            method,
            alpha,
            d,
            margin: 0.0,
        })
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }
}

/// Mesh size: `sqrt(πd/(αN))` for SE, `log(2dN/α)/N` for DE.
pub fn mesh_size(params: &RegularityParams, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let nf = n as f64;
    match params.method {
        Method::Se => Ok((PI * params.d / (params.alpha * nf)).sqrt()),
        Method::De => {
            let arg = 2.0 * params.d * nf / params.alpha;
            if arg <= 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "DE mesh size needs 2dN/alpha > 1, got {arg}"
                )));
            }
            Ok(arg.ln() / nf)
        }
    }
}

/// The `2N+1` Sinc points `t_j = ψ(jh)`, `j = -N..=N`, with cached
/// derivatives and endpoint distances. Immutable once built.
///
/// Storage index `k` corresponds to `j = k - N`.
///
/// Endpoint distances are floored at `f64::MIN_POSITIVE`. The floor only
/// engages where the true distance is below ~1e-308; there `ψ'(jh)` has
/// already underflowed to (or near) zero, so the node's contribution to any
/// weighted sum vanishes while data callables still receive a finite,
/// positive distance.
#[derive(Debug, Clone)]
pub struct SincGrid {
    interval: Interval,
    params: RegularityParams,
    n: usize,
    h: f64,
    points: Vec<f64>,
    derivs: Vec<f64>,
    dist_a: Vec<f64>,
    dist_b: Vec<f64>,
}

impl SincGrid {
    pub fn new(interval: Interval, params: RegularityParams, n: usize) -> Result<Self> {
        let h = mesh_size(&params, n)?;
        let method = params.method;
        let len = 2 * n + 1;
        let mut points = Vec::with_capacity(len);
        let mut derivs = Vec::with_capacity(len);
        let mut dist_a = Vec::with_capacity(len);
        let mut dist_b = Vec::with_capacity(len);
        for k in 0..len {
            let x = (k as f64 - n as f64) * h;
            let p = method.map_point(&interval, x);
            points.push(p.t);
            derivs.push(method.psi_deriv(&interval, x));
            dist_a.push(p.dist_a.max(f64::MIN_POSITIVE));
            dist_b.push(p.dist_b.max(f64::MIN_POSITIVE));
        }
        Ok(Self {
            interval,
            params,
            n,
            h,
            points,
            derivs,
            dist_a,
            dist_b,
        })
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn params(&self) -> &RegularityParams {
        &self.params
    }

    pub fn method(&self) -> Method {
        self.params.method
    }

    /// Truncation index `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Mesh size `h`.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of nodes, `2N+1`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// `ψ'(jh)` for every node.
    pub fn derivs(&self) -> &[f64] {
        &self.derivs
    }

    pub fn dist_a(&self) -> &[f64] {
        &self.dist_a
    }

    pub fn dist_b(&self) -> &[f64] {
        &self.dist_b
    }

    /// Sinc index `j` of storage slot `k`.
    pub fn index_of(&self, k: usize) -> i64 {
        k as i64 - self.n as i64
    }

    /// Node `k` in endpoint-aware form.
    pub fn node(&self, k: usize) -> Point {
        Point {
            t: self.points[k],
            dist_a: self.dist_a[k],
            dist_b: self.dist_b[k],
        }
    }

    fn slot(&self, j: i64) -> Result<usize> {
        let n = self.n as i64;
        if j < -n || j > n {
            return Err(Error::InvalidParameter(format!(
                "Sinc index {j} outside -{n}..={n}"
            )));
        }
        Ok((j + n) as usize)
    }

    /// `w_j(t) = ψ'(jh) J(j, h)(ψ^{-1}(t))` for interior `t`.
    pub fn weight(&self, j: i64, t: f64) -> Result<f64> {
        let k = self.slot(j)?;
        if !self.interval.contains_open(t) {
            return Err(Error::Domain {
                what: "weight",
                value: t,
            });
        }
        let xi = self.method().psi_inverse_point(self.interval.point(t));
        Ok(self.derivs[k] * basis_j_unchecked(j, self.h, xi))
    }

    /// All weights `w_j(p)` at once, writing into `out` (length `2N+1`).
    ///
    /// Accepts the closed interval: `dist_a == 0` yields zeros and
    /// `dist_b == 0` yields `h ψ'(jh)`, the `Si(±∞) = ±π/2` limits.
    pub fn weights_into(&self, p: Point, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.len());
        let xi = self.method().psi_inverse_point(p);
        for (k, w) in out.iter_mut().enumerate() {
            *w = self.derivs[k] * basis_j_unchecked(self.index_of(k), self.h, xi);
        }
    }

    pub fn weights_at(&self, p: Point) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.weights_into(p, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use sinc_oracle::{bisect, central_difference, ln_scaled_logistic};

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(RegularityParams::new(Method::Se, 0.0, 1.0).is_err());
        assert!(RegularityParams::new(Method::Se, 1.5, 1.0).is_err());
        assert!(RegularityParams::new(Method::Se, 1.0, PI).is_err());
        assert!(RegularityParams::new(Method::De, 1.0, PI / 2.0).is_err());
        assert!(RegularityParams::new(Method::De, 1.0, 1.5).is_ok());
    }

    #[test]
    fn mesh_size_substitutions() {
        let p = RegularityParams::new(Method::Se, 1.0, PI - 1e-15).unwrap();
        assert!((mesh_size(&p, 4).unwrap() - PI / 2.0).abs() < 1e-14);

        let p = RegularityParams::new(Method::De, 1.0, 1.0).unwrap();
        assert_eq!(mesh_size(&p, 8).unwrap(), 16f64.ln() / 8.0);

        let d = PI - 0.05;
        let p = RegularityParams::new(Method::Se, 0.5, d).unwrap();
        assert!((mesh_size(&p, 16).unwrap() - (PI * d / 8.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mesh_size_rejects_degenerate_de() {
        let p = RegularityParams::new(Method::De, 1.0, 0.4).unwrap();
        assert!(mesh_size(&p, 1).is_err());
        assert!(mesh_size(&p, 0).is_err());
    }

    #[test]
    fn psi_reference_values() {
        assert_eq!(Method::Se.psi(&unit(), 0.0), 0.5);
        let sym = Interval::new(-1.0, 1.0).unwrap();
        assert_eq!(Method::De.psi(&sym, 0.0), 0.0);
        let x = 2.0 * 0.5f64.atanh();
        assert!((Method::Se.psi(&unit(), x) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn psi_deriv_reference_values() {
        assert_eq!(Method::Se.psi_deriv(&unit(), 0.0), 0.25);
        assert!((Method::De.psi_deriv(&unit(), 0.0) - PI / 4.0).abs() < 1e-16);
        assert_eq!(Method::De.psi_deriv(&unit(), 800.0), 0.0);
        assert_eq!(Method::De.psi_deriv(&unit(), -800.0), 0.0);
    }

    #[test]
    fn psi_deriv_matches_finite_difference() {
        for method in Method::ALL {
            let mut x = -5.0;
            while x <= 5.0 {
                let fd = central_difference(|s| method.psi(&unit(), s), x, 1e-5);
                let exact = method.psi_deriv(&unit(), x);
                // Rounding in the quotient is ~1e-11 absolute; only compare
                // where that is negligible relative to ψ'.
                if exact > 1e-3 {
                    assert!(((fd - exact) / exact).abs() < 1e-7, "{method} x={x}");
                }
                x += 0.125;
            }
        }
    }

    #[test]
    fn psi_inverse_reference_values() {
        assert_eq!(Method::Se.psi_inverse(&unit(), 0.5).unwrap(), 0.0);
        assert!((Method::Se.psi_inverse(&unit(), 0.75).unwrap() - 3f64.ln()).abs() < 1e-15);
        let x = Method::De.psi_inverse(&unit(), 0.9).unwrap();
        let oracle = bisect(|s| Method::De.psi(&unit(), s), 0.9, -5.0, 5.0);
        assert!((x - oracle).abs() < 1e-12);
        assert!((Method::De.psi(&unit(), x) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn psi_inverse_rejects_endpoints() {
        for t in [0.0, 1.0, -0.1, 1.2] {
            assert!(Method::Se.psi_inverse(&unit(), t).is_err());
        }
    }

    #[test]
    fn grid_n1_se() {
        let p = RegularityParams::new(Method::Se, 1.0, PI - 1e-15).unwrap();
        let g = SincGrid::new(unit(), p, 1).unwrap();
        assert!((g.h() - PI).abs() < 1e-14);
        assert_eq!(g.len(), 3);
        assert_eq!(g.points()[1], 0.5);
        assert!((g.points()[0] - Method::Se.psi(&unit(), -g.h())).abs() < 1e-16);
        assert!((g.points()[2] - Method::Se.psi(&unit(), g.h())).abs() < 1e-16);
    }

    #[test]
    fn de_grid_endpoint_distances_stay_positive_and_accurate() {
        let p = RegularityParams::new(Method::De, 1.0, 1.57).unwrap();
        let g = SincGrid::new(unit(), p, 64).unwrap();
        let min = g.dist_a().iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min > 0.0);
        // ln(dist_a at j = -N) against ln(1 / (1 + e^{π sinh(Nh)})).
        let z = PI * (64.0 * g.h()).sinh();
        let expected = ln_scaled_logistic(1.0, z);
        assert!((g.dist_a()[0].ln() - expected).abs() < 1e-10 * expected.abs());
    }

    #[test]
    fn weight_at_own_node() {
        let p = RegularityParams::new(Method::Se, 1.0, 3.0).unwrap();
        let g = SincGrid::new(unit(), p, 8).unwrap();
        for j in -3..=3i64 {
            let k = (j + 8) as usize;
            let w = g.weight(j, g.points()[k]).unwrap();
            let expected = g.derivs()[k] * g.h() / 2.0;
            assert!((w - expected).abs() < 1e-14 * expected);
        }
    }

    #[test]
    fn weights_sum_to_interval_measure() {
        let p = RegularityParams::new(Method::Se, 1.0, PI - 0.05).unwrap();
        let g = SincGrid::new(unit(), p, 32).unwrap();
        for t in [0.1, 0.37, 0.7, 0.95] {
            let s: f64 = g.weights_at(unit().point(t)).iter().sum();
            assert!((s - t).abs() < 1e-3, "t={t}: {s}");
        }
    }

    #[test]
    fn weights_endpoint_limits() {
        let p = RegularityParams::new(Method::De, 1.0, 1.5).unwrap();
        let g = SincGrid::new(unit(), p, 6).unwrap();
        let at_b = g.weights_at(unit().point(1.0));
        let at_a = g.weights_at(unit().point(0.0));
        for k in 0..g.len() {
            assert!((at_b[k] - g.h() * g.derivs()[k]).abs() <= 1e-15 * g.derivs()[k]);
            assert_eq!(at_a[k], 0.0);
        }
        let p = RegularityParams::new(Method::Se, 1.0, 3.0).unwrap();
        let g = SincGrid::new(unit(), p, 6).unwrap();
        let near_b = g.weights_at(Point {
            t: 1.0,
            dist_a: 1.0,
            dist_b: 1e-200,
        });
        for k in 0..g.len() {
            assert!((near_b[k] / (g.h() * g.derivs()[k]) - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn weight_rejects_bad_arguments() {
        let p = RegularityParams::new(Method::Se, 1.0, 3.0).unwrap();
        let g = SincGrid::new(unit(), p, 4).unwrap();
        assert!(g.weight(5, 0.5).is_err());
        assert!(g.weight(0, 1.0).is_err());
    }

    fn any_params() -> impl Strategy<Value = (RegularityParams, usize, f64, f64)> {
        (
            prop_oneof![Just(Method::Se), Just(Method::De)],
            0.1f64..=1.0,
            0.05f64..0.99,
            1usize..150,
            -10.0f64..10.0,
            0.01f64..20.0,
        )
            .prop_map(|(m, alpha, frac, n, a, len)| {
                let p = RegularityParams::new(m, alpha, frac * m.max_strip_width()).unwrap();
                (p, n, a, len)
            })
    }

    proptest! {
        #[test]
        fn grid_invariants((params, n, a, len) in any_params()) {
            let iv = Interval::new(a, a + len).unwrap();
            let grid = match SincGrid::new(iv, params, n) {
                Ok(g) => g,
                Err(_) => return Ok(()), // degenerate DE mesh
            };
            for k in 0..grid.len() {
                let (da, db) = (grid.dist_a()[k], grid.dist_b()[k]);
                prop_assert!(da > 0.0 && db > 0.0);
                let t = grid.points()[k];
                prop_assert!(t >= iv.a() && t <= iv.b());
                prop_assert!(grid.derivs()[k] >= 0.0);
                if da > 1e-300 && db > 1e-300 {
                    prop_assert!(((da + db) - len).abs() <= 1e-12 * len);
                }
                if grid.derivs()[k] > 1e-290 {
                    prop_assert!(grid.derivs()[k] > 0.0);
                }
            }
            for k in 1..grid.len() {
                prop_assert!(grid.points()[k] >= grid.points()[k - 1]);
                // strictly ordered in the endpoint-safe representation
                if grid.dist_a()[k - 1] > f64::MIN_POSITIVE && grid.dist_b()[k] > f64::MIN_POSITIVE {
                    prop_assert!(
                        grid.dist_a()[k] > grid.dist_a()[k - 1] || grid.dist_b()[k] < grid.dist_b()[k - 1]
                    );
                }
            }
            let h = grid.h();
            let nf = n as f64;
            match params.method {
                Method::Se => prop_assert!((h * h * params.alpha * nf / (PI * params.d) - 1.0).abs() < 1e-13),
                Method::De => prop_assert!(((h * nf).exp() / (2.0 * params.d * nf / params.alpha) - 1.0).abs() < 1e-12),
            }
        }

        #[test]
        fn se_grid_symmetry(n in 1usize..60, alpha in 0.1f64..=1.0) {
            let p = RegularityParams::new(Method::Se, alpha, 3.0).unwrap();
            let g = SincGrid::new(unit(), p, n).unwrap();
            let last = g.len() - 1;
            for k in 0..g.len() {
                prop_assert!((g.dist_a()[k] - g.dist_b()[last - k]).abs() <= 1e-15 * g.dist_a()[k]);
            }
        }

        #[test]
        fn inverse_round_trip(method in prop_oneof![Just(Method::Se), Just(Method::De)],
                              a in -5.0f64..5.0, len in 0.1f64..10.0, frac in 0.001f64..0.999) {
            let iv = Interval::new(a, a + len).unwrap();
            let t = a + frac * len;
            prop_assume!(iv.contains_open(t));
            let x = method.psi_inverse(&iv, t).unwrap();
            prop_assert!((method.psi(&iv, x) - t).abs() <= 1e-12 * len);
        }

        #[test]
        fn weight_bound(j in -40i64..=40, frac in 0.0001f64..0.9999,
                        method in prop_oneof![Just(Method::Se), Just(Method::De)]) {
            let p = RegularityParams::new(method, 1.0, 0.9 * method.max_strip_width()).unwrap();
            let g = SincGrid::new(unit(), p, 40).unwrap();
            let w = g.weight(j, frac).unwrap();
            let k = (j + 40) as usize;
            prop_assert!(w.abs() <= 1.1 * g.h() * g.derivs()[k]);
        }
    }
}
