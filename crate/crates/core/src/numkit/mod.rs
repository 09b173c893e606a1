//! Dense linear algebra, spectral quantities and deterministic sampling.

pub mod csv;
pub mod matrix;
pub mod rng;
pub mod spectral;
pub mod vector;

pub use matrix::DenseMatrix;
pub use rng::{gaussian_stream, GaussianStream};
pub use spectral::{
    least_squares_min_norm, spectral_norm_sq, sym_eig, sym_eig_summary, Cholesky, PowerEstimate,
    SpectralSummary, SymmetricEigen,
};
pub use vector::DenseVector;

/// `A x` with dimension checking.
pub fn matvec(a: &DenseMatrix, x: &DenseVector) -> crate::Result<DenseVector> {
    a.matvec(x)
}

/// Seeded `rows × cols` matrix of i.i.d. standard normals.
pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut s = GaussianStream::new(seed);
    DenseMatrix::new(rows, cols, s.gaussians(rows * cols)).expect("finite gaussian draws")
}
