//! Reference problems with known solutions.
//!
//! Four fixed cases exercise entire data, a nearby pole, an `r^{-1/2}`
//! endpoint singularity and infinitely many singular points clustering at
//! both endpoints. Each case carries its regularity recipe `(α, d(ε))` per
//! transformation. Polynomial manufactured solutions complement them.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::solver::{Problem, ScalarFn};
use crate::transform::{Interval, Method, Point, RegularityParams};

/// Default margin subtracted from the strip-width supremum.
pub const DEFAULT_EPS: f64 = 0.05;

/// Which decay law the DE run of a case is expected to follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeRate {
    /// `exp(-π d N / log(2dN/α))`.
    DoubleExponential,
    /// Only an `exp(-c √N)` rate, like SE.
    SeLike,
}

/// `(α, ε ↦ d)` for one transformation.
#[derive(Debug, Clone, Copy)]
pub struct Recipe {
    pub alpha: f64,
    pub strip: fn(f64) -> f64,
}

impl Recipe {
    /// Supremum of admissible `d` (the recipe at `ε = 0`).
    pub fn d_sup(&self) -> f64 {
        (self.strip)(0.0)
    }
}

#[derive(Clone)]
pub struct BenchmarkCase {
    pub name: String,
    pub problem: Problem,
    pub exact: ScalarFn,
    pub se: Recipe,
    pub de: Recipe,
    pub de_rate: DeRate,
}

impl std::fmt::Debug for BenchmarkCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BenchmarkCase")
            .field("name", &self.name)
            .field("problem", &self.problem)
            .field("se", &self.se)
            .field("de", &self.de)
            .field("de_rate", &self.de_rate)
            .finish()
    }
}

impl BenchmarkCase {
    pub fn recipe(&self, method: Method) -> &Recipe {
        match method {
            Method::Se => &self.se,
            Method::De => &self.de,
        }
    }

    /// Regularity parameters with `d = strip(ε)`.
    pub fn params(&self, method: Method, eps: f64) -> Result<RegularityParams> {
        let r = self.recipe(method);
        Ok(RegularityParams::new(method, r.alpha, (r.strip)(eps))?.with_margin(eps))
    }

    pub fn exact(&self, p: Point) -> f64 {
        (self.exact)(p)
    }
}

fn se_full(eps: f64) -> f64 {
    PI - eps
}

fn de_full(eps: f64) -> f64 {
    PI / 2.0 - eps
}

/// Strip width limited by the pole of `log(1+t)` at `t = -1` under the DE map.
fn de_log_pole(eps: f64) -> f64 {
    let ln2 = 2f64.ln();
    let z = ((1.0 + (1.0 + (2.0 * PI / ln2).powi(2)).sqrt()) / 2.0).sqrt();
    let x = ln2 / PI * (1.0 + z);
    let y = 1.0 + 1.0 / z;
    (y / x).atan() - eps
}

fn se_half(eps: f64) -> f64 {
    PI / 2.0 - eps
}

fn de_oscillatory(eps: f64) -> f64 {
    ((PI / 2.0 - eps) / PI).asin()
}

/// `u' = 1 + 2t - u + ∫_0^t t(1+2t) e^{r(t-r)} u dr`, `u(0) = 1`, `u = e^{t²}`.
pub fn brunner() -> BenchmarkCase {
    let iv = Interval::new(0.0, 1.0).expect("valid interval");
    let problem = Problem::new(iv, 1.0)
        .with_source(|p| 1.0 + 2.0 * p.t)
        .with_mu(|_| -1.0)
        .with_kernel(|t, r| t.t * (1.0 + 2.0 * t.t) * (r.t * (t.t - r.t)).exp());
    BenchmarkCase {
        name: "brunner".into(),
        problem,
        exact: Arc::new(|p| (p.t * p.t).exp()),
        se: Recipe {
            alpha: 1.0,
            strip: se_full,
        },
        de: Recipe {
            alpha: 1.0,
            strip: de_full,
        },
        de_rate: DeRate::DoubleExponential,
    }
}

/// `u' = 1/(1+t) - (2 + t log(1+t)) log(1+t)/2 + u + ∫_0^t t/(r+1) u dr`,
/// `u(0) = 0`, `u = log(1+t)`.
pub fn zarebnia_log() -> BenchmarkCase {
    let iv = Interval::new(0.0, 1.0).expect("valid interval");
    let problem = Problem::new(iv, 0.0)
        .with_source(|p| {
            let l = p.t.ln_1p();
            1.0 / (1.0 + p.t) - (2.0 + p.t * l) * l / 2.0
        })
        .with_mu(|_| 1.0)
        .with_kernel(|t, r| t.t / (r.t + 1.0));
    BenchmarkCase {
        name: "zarebnia-log".into(),
        problem,
        exact: Arc::new(|p| p.t.ln_1p()),
        se: Recipe {
            alpha: 1.0,
            strip: se_full,
        },
        de: Recipe {
            alpha: 1.0,
            strip: de_log_pole,
        },
        de_rate: DeRate::DoubleExponential,
    }
}

/// `u' = 1/(2√t) - t u + ∫_0^t √(t/r) u dr`, `u(0) = 0`, `u = √t`.
///
/// Every `√t` is taken from the distance to `a = 0`.
pub fn sqrt_singular() -> BenchmarkCase {
    let iv = Interval::new(0.0, 1.0).expect("valid interval");
    let problem = Problem::new(iv, 0.0)
        .with_source(|p| 0.5 / p.dist_a.sqrt())
        .with_mu(|p| -p.t)
        .with_kernel(|t, r| t.dist_a.sqrt() / r.dist_a.sqrt());
    BenchmarkCase {
        name: "sqrt".into(),
        problem,
        exact: Arc::new(|p| p.dist_a.sqrt()),
        se: Recipe {
            alpha: 0.5,
            strip: se_full,
        },
        de: Recipe {
            alpha: 0.5,
            strip: de_full,
        },
        de_rate: DeRate::DoubleExponential,
    }
}

/// `arctanh(t)` on `[-1, 1]` from the endpoint distances `1+t`, `1-t`.
fn atanh_point(p: Point) -> f64 {
    0.5 * (p.dist_a.ln() - p.dist_b.ln())
}

/// `p(t) = sin(4 arctanh t)`.
pub fn oscillatory_p(x: Point) -> f64 {
    (4.0 * atanh_point(x)).sin()
}

/// `q(t) = cos(4 arctanh t) + cosh π`.
pub fn oscillatory_q(x: Point) -> f64 {
    (4.0 * atanh_point(x)).cos() + PI.cosh()
}

/// `√(1-t²)` as `√(1+t) √(1-t)`.
fn sqrt_one_minus_sq(p: Point) -> f64 {
    p.dist_a.sqrt() * p.dist_b.sqrt()
}

/// The oscillatory problem on `[-1, 1]` with `u = √((1-t²) q(t))`, `u(-1) = 0`:
///
/// ```text
/// u' = -t √(q/(1-t²)) - 2p/√((1-t²) q) + √((3+t²)(1-t²)) u
///      + ∫_{-1}^t 2 √((3+t²)/(1-r²)) (r + p(r)/q(r)) u(r) dr
/// ```
pub fn oscillatory() -> BenchmarkCase {
    let iv = Interval::new(-1.0, 1.0).expect("valid interval");
    let problem = Problem::new(iv, 0.0)
        .with_source(|x| {
            let s = sqrt_one_minus_sq(x);
            let q = oscillatory_q(x);
            let p = oscillatory_p(x);
            -x.t * q.sqrt() / s - 2.0 * p / (s * q.sqrt())
        })
        .with_mu(|x| (3.0 + x.t * x.t).sqrt() * sqrt_one_minus_sq(x))
        .with_kernel(|t, r| {
            2.0 * (3.0 + t.t * t.t).sqrt() / sqrt_one_minus_sq(r)
                * (r.t + oscillatory_p(r) / oscillatory_q(r))
        });
    BenchmarkCase {
        name: "oscillatory".into(),
        problem,
        exact: Arc::new(|x| {
            let s = sqrt_one_minus_sq(x);
            if s == 0.0 {
                0.0
            } else {
                s * oscillatory_q(x).sqrt()
            }
        }),
        se: Recipe {
            alpha: 0.5,
            strip: se_half,
        },
        de: Recipe {
            alpha: 0.5,
            strip: de_oscillatory,
        },
        de_rate: DeRate::SeLike,
    }
}

/// The four reference problems in fixed order.
pub fn registry() -> Vec<BenchmarkCase> {
    vec![brunner(), zarebnia_log(), sqrt_singular(), oscillatory()]
}

/// Looks up a registry case by name, or `manufactured:<seed>`.
pub fn lookup(name: &str) -> Option<BenchmarkCase> {
    if let Some(seed) = name.strip_prefix("manufactured:") {
        return seed.parse().ok().map(|s| manufactured(s).into_case());
    }
    registry().into_iter().find(|c| c.name == name)
}

/// Dense univariate polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn constant(c: f64) -> Self {
        Self(vec![c])
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return Self(vec![0.0]);
        }
        Self(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut out = vec![0.0];
        out.extend(self.0.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
        Self(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = vec![0.0; self.0.len().max(other.0.len())];
        for (k, c) in self.0.iter().enumerate() {
            out[k] += c;
        }
        for (k, c) in other.0.iter().enumerate() {
            out[k] += c;
        }
        Self(out)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|c| c * s).collect())
    }

    /// `t^p · self`.
    pub fn shift(&self, p: usize) -> Self {
        let mut out = vec![0.0; p];
        out.extend_from_slice(&self.0);
        Self(out)
    }
}

/// A problem whose data is built around a chosen polynomial solution.
///
/// `kernel[p][q]` is the coefficient of `t^p r^q` in `k(t, r)`; `source` is
/// `u*' - μ u* - ∫_a^t k(t, r) u*(r) dr` in closed form.
#[derive(Debug, Clone)]
pub struct Manufactured {
    pub name: String,
    pub interval: Interval,
    pub solution: Polynomial,
    pub mu: Polynomial,
    pub kernel: Vec<Vec<f64>>,
    pub source: Polynomial,
}

impl Manufactured {
    pub fn new(
        interval: Interval,
        solution: Polynomial,
        mu: Polynomial,
        kernel: Vec<Vec<f64>>,
    ) -> Self {
        let a = interval.a();
        let mut source = solution.derivative().add(&mu.mul(&solution).scale(-1.0));
        for (p, row) in kernel.iter().enumerate() {
            let inner = Polynomial(row.clone()).mul(&solution).antiderivative();
            let lower = inner.eval(a);
            let definite = inner.add(&Polynomial::constant(-lower));
            source = source.add(&definite.shift(p).scale(-1.0));
        }
        Self {
            name: "manufactured".into(),
            interval,
            solution,
            mu,
            kernel,
            source,
        }
    }

    pub fn problem(&self) -> Problem {
        let src = self.source.clone();
        let mu = self.mu.clone();
        let ker = self.kernel.clone();
        Problem::new(self.interval, self.solution.eval(self.interval.a()))
            .with_source(move |p| src.eval(p.t))
            .with_mu(move |p| mu.eval(p.t))
            .with_kernel(move |t, r| {
                ker.iter().rev().fold(0.0, |acc, row| {
                    acc * t.t + Polynomial(row.clone()).eval(r.t)
                })
            })
    }

    /// Wraps as a case with entire-data recipes (α = 1, full strips).
    pub fn into_case(self) -> BenchmarkCase {
        let problem = self.problem();
        let sol = self.solution.clone();
        BenchmarkCase {
            name: self.name,
            problem,
            exact: Arc::new(move |p| sol.eval(p.t)),
            se: Recipe {
                alpha: 1.0,
                strip: se_full,
            },
            de: Recipe {
                alpha: 1.0,
                strip: de_full,
            },
            de_rate: DeRate::DoubleExponential,
        }
    }
}

/// Seeded polynomial family. Seed 0 is the zero-data problem with `u ≡ 1`.
pub fn manufactured(seed: u64) -> Manufactured {
    let unit = Interval::new(0.0, 1.0).expect("valid interval");
    let mut m = if seed == 0 {
        Manufactured::new(
            unit,
            Polynomial::constant(1.0),
            Polynomial::constant(0.0),
            vec![vec![0.0]],
        )
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let intervals = [(0.0, 1.0), (-1.0, 1.0), (0.5, 2.0)];
        let (a, b) = intervals[rng.gen_range(0..intervals.len())];
        let mut poly =
            |deg: usize| Polynomial((0..=deg).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let solution = poly(1 + (seed as usize % 4));
        let mu = poly(seed as usize % 3);
        let kdeg = (seed as usize / 3) % 3;
        let kernel = (0..=kdeg).map(|_| poly(kdeg).0).collect();
        Manufactured::new(
            Interval::new(a, b).expect("valid interval"),
            solution,
            mu,
            kernel,
        )
    };
    m.name = format!("manufactured:{seed}");
    m
}

/// Validates a registry name; used by front ends for usage errors.
pub fn require(name: &str) -> Result<BenchmarkCase> {
    lookup(name).ok_or_else(|| Error::InvalidParameter(format!("unknown case '{name}'")))
}
