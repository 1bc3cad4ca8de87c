//! Small dense helpers shared by the frame and operator modules.
//!
//! Everything here works on `nalgebra` dynamic matrices. Spectra are always
//! returned in ascending order; equal eigenvalues keep the order in which the
//! solver produced them, so repeated runs give identical square roots and
//! inverses.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Eigen-decomposition of a symmetric matrix with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct SymSpectrum {
    pub values: DVector<f64>,
    /// Columns are the eigenvectors matching `values`.
    pub vectors: DMatrix<f64>,
}

impl SymSpectrum {
    pub fn new(matrix: &DMatrix<f64>) -> Self {
        let sym = symmetrize(matrix);
        let eig = SymmetricEigen::new(sym);
        let n = eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        // stable sort: ties keep solver order
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
        let mut vectors = DMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        Self { values, vectors }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Rebuilds `V diag(g(λ)) Vᵀ`.
    pub fn map<F: Fn(f64) -> f64>(&self, g: F) -> DMatrix<f64> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let s = g(self.values[j]);
            scaled.column_mut(j).scale_mut(s);
        }
        symmetrize(&(scaled * self.vectors.transpose()))
    }
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Singular values in ascending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(f64::total_cmp);
    s
}

/// Spectral (operator 2-) norm.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

pub fn is_symmetric(m: &DMatrix<f64>, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.transpose()) <= tol
}

pub(crate) fn all_finite(m: &DMatrix<f64>) -> bool {
    m.iter().all(|x| x.is_finite())
}
