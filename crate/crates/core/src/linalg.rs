//! Dense real matrices and vectors sized for `n = 2N+1` up to a few thousand.
//!
//! Storage, products and the partially pivoted LU factorization are backed by
//! `nalgebra`; this module fixes the surface the solver needs and adds the
//! singularity policy.

use nalgebra::{DMatrix, DVector, LU};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix(DMatrix<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector(DVector<f64>);

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(rows: usize, cols: usize, f: F) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds from row-major data.
    pub fn from_row_slice(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, data)))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.0[(i, j)] = v;
    }

    pub fn as_nalgebra(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_same_shape(other)?;
        Ok(Self(self.0.component_mul(&other.0)))
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols() != other.rows() {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self(&self.0 * &other.0))
    }

    pub fn mul_vec(&self, v: &DenseVector) -> Result<DenseVector> {
        if self.cols() != v.len() {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok(DenseVector(&self.0 * &v.0))
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_same_shape(other)?;
        Ok(Self(&self.0 - &other.0))
    }

    pub fn scale(&mut self, factor: f64) {
        self.0 *= factor;
    }

    /// `diag(d) · self`, in place.
    pub fn scale_rows(&mut self, d: &[f64]) {
        assert_eq!(d.len(), self.rows());
        for (i, mut row) in self.0.row_iter_mut().enumerate() {
            row *= d[i];
        }
    }

    /// `self · diag(d)`, in place.
    pub fn scale_cols(&mut self, d: &[f64]) {
        assert_eq!(d.len(), self.cols());
        for (j, mut col) in self.0.column_iter_mut().enumerate() {
            col *= d[j];
        }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.0
            .row_iter()
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    fn check_same_shape(&self, other: &DenseMatrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }
}

impl DenseVector {
    pub fn zeros(len: usize) -> Self {
        Self(DVector::zeros(len))
    }

    pub fn from_vec(data: Vec<f64>) -> Self {
        Self(DVector::from_vec(data))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &DenseVector) -> Result<DenseVector> {
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch {
                left: (self.len(), 1),
                right: (other.len(), 1),
            });
        }
        Ok(Self(&self.0 - &other.0))
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl LuFactors {
    /// Factorizes a square matrix. A pivot below `1e-300 · ‖A‖_∞` is
    /// reported as singular.
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(Error::ShapeMismatch {
                left: a.shape(),
                right: (a.cols(), a.rows()),
            });
        }
        let threshold = 1e-300 * a.norm_inf();
        let lu = a.0.clone().lu();
        let u = lu.u();
        for step in 0..a.rows() {
            let pivot = u[(step, step)];
            if !(pivot.abs() >= threshold) || pivot == 0.0 {
                return Err(Error::SingularMatrix { step, pivot });
            }
        }
        Ok(Self { lu })
    }

    pub fn solve(&self, b: &DenseVector) -> Result<DenseVector> {
        if b.len() != self.lu.l().nrows() {
            return Err(Error::ShapeMismatch {
                left: self.lu.l().shape(),
                right: (b.len(), 1),
            });
        }
        self.lu
            .solve(&b.0)
            .map(DenseVector)
            .ok_or(Error::SingularMatrix {
                step: 0,
                pivot: 0.0,
            })
    }

    pub fn l(&self) -> DenseMatrix {
        DenseMatrix(self.lu.l())
    }

    pub fn u(&self) -> DenseMatrix {
        DenseMatrix(self.lu.u())
    }

    /// Applies the row permutation `P` to a copy of `m`.
    pub fn permute_rows(&self, m: &DenseMatrix) -> DenseMatrix {
        let mut out = m.0.clone();
        self.lu.p().permute_rows(&mut out);
        DenseMatrix(out)
    }
}

/// Solves `A x = b` by partially pivoted LU.
pub fn lu_solve(a: &DenseMatrix, b: &DenseVector) -> Result<DenseVector> {
    LuFactors::new(a)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
        DenseMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0))
    }

    #[test]
    fn hadamard_examples() {
        let a = DenseMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = DenseMatrix::from_row_slice(2, 2, &[5.0, 6.0, 7.0, 8.0]).unwrap();
        let c = a.hadamard(&b).unwrap();
        assert_eq!(
            c,
            DenseMatrix::from_row_slice(2, 2, &[5.0, 12.0, 21.0, 32.0]).unwrap()
        );
        assert_eq!(
            a.hadamard(&DenseMatrix::from_fn(2, 2, |_, _| 1.0)).unwrap(),
            a
        );
        assert_eq!(
            a.hadamard(&DenseMatrix::zeros(2, 2)).unwrap(),
            DenseMatrix::zeros(2, 2)
        );
        assert!(matches!(
            a.hadamard(&DenseMatrix::zeros(2, 3)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn row_major_layout() {
        let a = DenseMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(a.get(0, 2), 3.0);
        assert_eq!(a.get(1, 0), 4.0);
        assert!(DenseMatrix::from_row_slice(2, 2, &[1.0]).is_err());
    }

    #[test]
    fn diagonal_scalings() {
        let mut a = DenseMatrix::from_fn(2, 2, |_, _| 1.0);
        a.scale_rows(&[2.0, 3.0]);
        a.scale_cols(&[5.0, 7.0]);
        assert_eq!(
            a,
            DenseMatrix::from_row_slice(2, 2, &[10.0, 14.0, 15.0, 21.0]).unwrap()
        );
        assert_eq!(a.norm_inf(), 36.0);
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let b = DenseVector::from_vec(vec![3.0, -1.0, 2.5]);
        assert_eq!(lu_solve(&DenseMatrix::identity(3), &b).unwrap(), b);
        let d = DenseMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 4.0]).unwrap();
        let x = lu_solve(&d, &DenseVector::from_vec(vec![2.0, 8.0])).unwrap();
        assert_eq!(x.as_slice(), &[1.0, 2.0]);
    }

    #[test]
    fn singular_is_an_error() {
        let a = DenseMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        let err = lu_solve(&a, &DenseVector::from_vec(vec![1.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::SingularMatrix { .. }));
        assert!(lu_solve(&DenseMatrix::zeros(3, 3), &DenseVector::zeros(3)).is_err());
    }

    #[test]
    fn shape_errors() {
        assert!(lu_solve(&DenseMatrix::zeros(2, 3), &DenseVector::zeros(2)).is_err());
        assert!(lu_solve(&DenseMatrix::identity(2), &DenseVector::zeros(3)).is_err());
    }

    #[test]
    fn recovers_known_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let n = 50;
        let mut a = random_matrix(&mut rng, n);
        for i in 0..n {
            a.set(i, i, a.get(i, i) + n as f64); // diagonally dominant
        }
        let x_star = DenseVector::from_vec((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let b = a.mul_vec(&x_star).unwrap();
        let x = lu_solve(&a, &b).unwrap();
        let err = x.sub(&x_star).unwrap().norm_inf();
        assert!(err <= 1e-9 * x_star.norm_inf());
        let resid = a.mul_vec(&x).unwrap().sub(&b).unwrap().norm_inf();
        assert!(resid <= 1e-10 * (a.norm_inf() * x.norm_inf() + b.norm_inf()));
    }

    #[test]
    fn plu_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 17, 120, 401] {
            let a = random_matrix(&mut rng, n);
            let f = LuFactors::new(&a).unwrap();
            let lu = f.l().matmul(&f.u()).unwrap();
            let pa = f.permute_rows(&a);
            let err = pa.sub(&lu).unwrap().norm_inf();
            assert!(err <= 1e-12 * a.norm_inf(), "n={n}: {err:e}");
        }
    }
}
