//! Sinc-Nyström discretization of linear Volterra integro-differential
//! equations.
//!
//! Integrating the equation once gives
//! `u(t) = u_a + ∫_a^t { g(s) + μ(s) u(s) + V[u](s) } ds` with
//! `V[u](s) = ∫_a^s k(s, r) u(r) dr`. Both integrals are replaced by Sinc
//! indefinite integration on the same grid, and collocation at the Sinc
//! points yields
//!
//! ```text
//! (I - W) u = rhs,
//! W   = h I⁻¹ M D + h² I⁻¹ D (I⁻¹ ∘ K) D,
//! rhs = u_a + h I⁻¹ D g,
//! ```
//!
//! where `I⁻¹_ij = 1/2 + Si(π(i-j))/π`, `K_ij = k(t_i, t_j)`, and `M`, `D` are
//! the diagonals `μ(t_j)` and `ψ'(jh)`. The identity
//! `w_j(t_i) = h ψ'(jh) I⁻¹_ij` is used throughout assembly, so no inverse
//! transformation is evaluated at the nodes.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector, LuFactors};
use crate::specfun::si_unchecked;
use crate::transform::{Interval, Point, SincGrid};

/// Scalar problem data `t ↦ f(t)`, evaluated with endpoint distances.
pub type ScalarFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
/// Kernel `(t, r) ↦ k(t, r)`.
pub type KernelFn = Arc<dyn Fn(Point, Point) -> f64 + Send + Sync>;

/// A linear VIDE instance. Data defaults to zero.
#[derive(Clone)]
pub struct Problem {
    interval: Interval,
    initial_value: f64,
    source: ScalarFn,
    mu: ScalarFn,
    kernel: KernelFn,
}

impl Problem {
    pub fn new(interval: Interval, initial_value: f64) -> Self {
        Self {
            interval,
            initial_value,
            source: Arc::new(|_| 0.0),
            mu: Arc::new(|_| 0.0),
            kernel: Arc::new(|_, _| 0.0),
        }
    }

    /// Sets the forcing term `g`.
    pub fn with_source<F>(mut self, g: F) -> Self
    where
        F: Fn(Point) -> f64 + Send + Sync + 'static,
    {
        self.source = Arc::new(g);
        self
    }

    pub fn with_mu<F>(mut self, mu: F) -> Self
    where
        F: Fn(Point) -> f64 + Send + Sync + 'static,
    {
        self.mu = Arc::new(mu);
        self
    }

    pub fn with_kernel<F>(mut self, k: F) -> Self
    where
        F: Fn(Point, Point) -> f64 + Send + Sync + 'static,
    {
        self.kernel = Arc::new(k);
        self
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn initial_value(&self) -> f64 {
        self.initial_value
    }

    pub fn source(&self, p: Point) -> f64 {
        (self.source)(p)
    }

    pub fn mu(&self, p: Point) -> f64 {
        (self.mu)(p)
    }

    pub fn kernel(&self, t: Point, r: Point) -> f64 {
        (self.kernel)(t, r)
    }
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("interval", &self.interval)
            .field("initial_value", &self.initial_value)
            .finish_non_exhaustive()
    }
}

/// `δ⁽⁻¹⁾_ij = 1/2 + Si(π(i-j))/π`.
pub fn delta_minus1(i: i64, j: i64) -> f64 {
    0.5 + si_unchecked(PI * (i - j) as f64) / PI
}

/// The `n × n` matrix `I⁻¹` for `n = 2N+1`, built from the `4N+1` distinct
/// values of `δ⁽⁻¹⁾`.
pub fn integration_matrix(n: usize) -> DenseMatrix {
    let table: Vec<f64> = (0..2 * n.max(1) - 1)
        .map(|m| delta_minus1(m as i64 - (n as i64 - 1), 0))
        .collect();
    DenseMatrix::from_fn(n, n, |i, j| table[i + n - 1 - j])
}

/// Everything assembled for one solve.
#[derive(Debug, Clone)]
pub struct SolverWorkspace {
    pub grid: SincGrid,
    /// `I⁻¹`.
    pub i_minus1: DenseMatrix,
    /// `K_ij = k(t_i, t_j)`.
    pub kernel: DenseMatrix,
    /// `I⁻¹ ∘ K`.
    pub masked_kernel: DenseMatrix,
    /// `μ(t_j)`.
    pub mu_diag: DenseVector,
    /// `ψ'(jh)`.
    pub d_diag: DenseVector,
    /// `g(t_j)`.
    pub g_nodes: DenseVector,
    pub w: DenseMatrix,
    pub rhs: DenseVector,
}

impl SolverWorkspace {
    /// System matrix `I - W`.
    pub fn system_matrix(&self) -> DenseMatrix {
        let n = self.grid.len();
        DenseMatrix::identity(n)
            .sub(&self.w)
            .expect("W is square of grid size")
    }

    /// `‖(I - W) u - rhs‖_∞`.
    pub fn residual_inf(&self, u: &DenseVector) -> Result<f64> {
        Ok(self.system_matrix().mul_vec(u)?.sub(&self.rhs)?.norm_inf())
    }
}

fn sample_nodes(grid: &SincGrid, f: &ScalarFn) -> Result<Vec<f64>> {
    (0..grid.len())
        .map(|k| {
            let v = f(grid.node(k));
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFiniteSample {
                    index: grid.index_of(k),
                    value: v,
                })
            }
        })
        .collect()
}

/// Builds `I⁻¹`, `K`, `M`, `D`, `W` and the right-hand side.
pub fn assemble(problem: &Problem, grid: &SincGrid) -> Result<SolverWorkspace> {
    if problem.interval() != grid.interval() {
        return Err(Error::InvalidParameter(
            "grid and problem are defined on different intervals".into(),
        ));
    }
    let n = grid.len();
    let h = grid.h();
    let d = grid.derivs().to_vec();
    let g = sample_nodes(grid, &problem.source)?;
    let mu = sample_nodes(grid, &problem.mu)?;

    let mut kvals = Vec::with_capacity(n * n);
    for i in 0..n {
        let ti = grid.node(i);
        for j in 0..n {
            let v = problem.kernel(ti, grid.node(j));
            if !v.is_finite() {
                return Err(Error::NonFiniteKernel {
                    i: grid.index_of(i),
                    j: grid.index_of(j),
                    value: v,
                });
            }
            kvals.push(v);
        }
    }
    let kernel = DenseMatrix::from_row_slice(n, n, &kvals)?;
    let i_minus1 = integration_matrix(n);
    let masked_kernel = i_minus1.hadamard(&kernel)?;

    // C = M D + h D (I⁻¹ ∘ K) D, then W = h I⁻¹ C.
    let mut c = masked_kernel.clone();
    c.scale_rows(&d);
    c.scale_cols(&d);
    c.scale(h);
    for j in 0..n {
        c.set(j, j, c.get(j, j) + mu[j] * d[j]);
    }
    let mut w = i_minus1.matmul(&c)?;
    w.scale(h);

    let dg = DenseVector::from_vec(d.iter().zip(&g).map(|(d, g)| h * d * g).collect());
    let u_a = problem.initial_value();
    let rhs = DenseVector::from_vec(
        i_minus1
            .mul_vec(&dg)?
            .as_slice()
            .iter()
            .map(|v| u_a + v)
            .collect(),
    );

    Ok(SolverWorkspace {
        grid: grid.clone(),
        i_minus1,
        kernel,
        masked_kernel,
        mu_diag: DenseVector::from_vec(mu),
        d_diag: DenseVector::from_vec(d),
        g_nodes: DenseVector::from_vec(g),
        w,
        rhs,
    })
}

/// Continuous Sinc-Nyström approximation.
///
/// `u_N(t) = u_a + Σ_j c_j w_j(t)` with `c_j = g(t_j) + μ(t_j) u_j + ũ_j`
/// and `ũ = h (I⁻¹ ∘ K) D u`, so each evaluation costs O(n).
#[derive(Debug, Clone)]
pub struct SincSolution {
    problem: Problem,
    grid: SincGrid,
    node_values: DenseVector,
    aux: DenseVector,
    g_nodes: DenseVector,
    coeffs: DenseVector,
    residual_inf: f64,
    rhs_norm_inf: f64,
}

/// Assembles and solves `(I - W) u = rhs`.
pub fn solve(problem: &Problem, grid: &SincGrid) -> Result<SincSolution> {
    let ws = assemble(problem, grid)?;
    let system = ws.system_matrix();
    let failed = Error::SolverFailed { n: grid.n() };
    let lu = LuFactors::new(&system).map_err(|_| failed.clone())?;
    let u = lu.solve(&ws.rhs).map_err(|_| failed.clone())?;
    if u.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(failed);
    }
    let residual_inf = system.mul_vec(&u)?.sub(&ws.rhs)?.norm_inf();

    let h = grid.h();
    let du = DenseVector::from_vec(
        ws.d_diag
            .as_slice()
            .iter()
            .zip(u.as_slice())
            .map(|(d, u)| h * d * u)
            .collect(),
    );
    let aux = ws.masked_kernel.mul_vec(&du)?;
    let coeffs = DenseVector::from_vec(
        (0..grid.len())
            .map(|j| ws.g_nodes.get(j) + ws.mu_diag.get(j) * u.get(j) + aux.get(j))
            .collect(),
    );
    Ok(SincSolution {
        problem: problem.clone(),
        grid: grid.clone(),
        node_values: u,
        aux,
        g_nodes: ws.g_nodes.clone(),
        coeffs,
        residual_inf,
        rhs_norm_inf: ws.rhs.norm_inf(),
    })
}

impl SincSolution {
    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn grid(&self) -> &SincGrid {
        &self.grid
    }

    /// `u_N(t_j)`.
    pub fn node_values(&self) -> &[f64] {
        self.node_values.as_slice()
    }

    /// `ũ = h (I⁻¹ ∘ K) D u`.
    pub fn aux(&self) -> &[f64] {
        self.aux.as_slice()
    }

    pub fn g_nodes(&self) -> &[f64] {
        self.g_nodes.as_slice()
    }

    pub fn coeffs(&self) -> &[f64] {
        self.coeffs.as_slice()
    }

    /// `‖(I - W) u - rhs‖_∞` of the computed node values.
    pub fn residual_inf(&self) -> f64 {
        self.residual_inf
    }

    pub fn rhs_norm_inf(&self) -> f64 {
        self.rhs_norm_inf
    }

    /// `u_N(t)` for `a <= t <= b`.
    pub fn eval(&self, t: f64) -> f64 {
        self.eval_point(self.grid.interval().point(t))
    }

    pub fn eval_point(&self, p: Point) -> f64 {
        let u_a = self.problem.initial_value();
        if p.dist_a <= 0.0 {
            return u_a;
        }
        let w = self.grid.weights_at(p);
        u_a + w
            .iter()
            .zip(self.coeffs.as_slice())
            .map(|(w, c)| w * c)
            .sum::<f64>()
    }

    /// Maximum of `|u_N - exact|` over the `m` interior points
    /// `a + i (b-a)/(m+1)`, `i = 1..=m`.
    pub fn max_error<F: Fn(Point) -> f64>(&self, exact: F, m: usize) -> f64 {
        let iv = self.grid.interval();
        let step = iv.length() / (m + 1) as f64;
        (1..=m)
            .map(|i| {
                let p = iv.point(iv.a() + i as f64 * step);
                (self.eval_point(p) - exact(p)).abs()
            })
            .fold(0.0, f64::max)
    }
}
