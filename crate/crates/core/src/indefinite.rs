//! Sinc indefinite integration `∫_a^t f(s) ds ≈ Σ_j f(t_j) w_j(t)`.

use crate::error::{Error, Result};
use crate::transform::{Point, SincGrid};

/// Samples of an integrand at the Sinc points of a grid.
#[derive(Debug, Clone)]
pub struct IndefiniteApprox {
    grid: SincGrid,
    samples: Vec<f64>,
}

impl IndefiniteApprox {
    /// Samples `f` at every node. `f` sees each node with its endpoint
    /// distances, so singular integrands can avoid cancellation.
    pub fn new<F>(grid: SincGrid, f: F) -> Result<Self>
    where
        F: Fn(Point) -> f64,
    {
        let mut samples = Vec::with_capacity(grid.len());
        for k in 0..grid.len() {
            let v = f(grid.node(k));
            if !v.is_finite() {
                return Err(Error::NonFiniteSample {
                    index: grid.index_of(k),
                    value: v,
                });
            }
            samples.push(v);
        }
        Ok(Self { grid, samples })
    }

    pub fn grid(&self) -> &SincGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Approximate `∫_a^t f`. Endpoints follow the `Si(±∞)` limits: 0 at `a`,
    /// `h Σ f(t_j) ψ'(jh)` at `b`.
    pub fn eval(&self, t: f64) -> f64 {
        self.eval_point(self.grid.interval().point(t))
    }

    pub fn eval_point(&self, p: Point) -> f64 {
        if p.dist_a <= 0.0 {
            return 0.0;
        }
        let w = self.grid.weights_at(p);
        w.iter().zip(&self.samples).map(|(w, f)| w * f).sum()
    }
}
