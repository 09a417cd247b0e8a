//! Generating functionals of thinned and thickened finite determinantal
//! processes.

use crate::exactdimer::DenseMatrix;

/// A kernel on a finite set of labelled points.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteKernel {
    pub points: Vec<i64>,
    pub matrix: DenseMatrix<f64>,
}

impl DiscreteKernel {
    /// # Panics
    /// If `matrix` is not `points.len()` square.
    pub fn new(points: Vec<i64>, matrix: DenseMatrix<f64>) -> Self {
        assert!(
            matrix.rows() == points.len() && matrix.cols() == points.len(),
            "kernel matrix must be square over the point set"
        );
        DiscreteKernel { points, matrix }
    }

    pub fn from_fn(points: Vec<i64>, f: impl Fn(i64, i64) -> f64) -> Self {
        let m = points.len();
        let matrix = DenseMatrix::from_fn(m, m, |i, j| f(points[i], points[j]));
        DiscreteKernel { points, matrix }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `det(I - diag(m) K)`.
    fn det_weighted(&self, m: &[f64]) -> f64 {
        assert_eq!(m.len(), self.len(), "one weight per point");
        let n = self.len();
        DenseMatrix::from_fn(n, n, |i, j| (if i == j { 1.0 } else { 0.0 }) - m[i] * self.matrix[(i, j)]).determinant()
    }
}

/// `E prod (1 - phi(x))` over the points kept by independent
/// `alpha`-thinning: `det(I - alpha phi K)`. Points where `phi = 0` drop out.
pub fn thinned_gen_functional(kernel: &DiscreteKernel, phi: &[f64], alpha: f64) -> f64 {
    let m: Vec<f64> = phi.iter().map(|p| alpha * p).collect();
    kernel.det_weighted(&m)
}

/// `E prod (1 - phi(x))^(m(x))` when every point is repeated a
/// geometric number of times, `P(m = j) = (1 - beta) beta^(j-1)`:
/// `det(I - phi / (1 - beta + beta phi) K)`.
pub fn thickened_gen_functional(kernel: &DiscreteKernel, phi: &[f64], beta: f64) -> f64 {
    let m: Vec<f64> = phi.iter().map(|p| p / (1.0 - beta + beta * p)).collect();
    kernel.det_weighted(&m)
}
