//! Small dense linear-algebra helpers shared across the crate.
//!
//! Everything here operates on dynamically sized `nalgebra` matrices; the
//! systems involved are tiny (at most 16x16 complex or 255x255 real), so
//! clarity wins over blocking or allocation tricks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense complex matrix used for operators on the 2^N-dimensional Hilbert
/// space.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Dense real vector used for generalized Bloch components.
pub type RealVector = DVector<f64>;

/// Dense real matrix used for evolution generators on Bloch space.
pub type RealMatrix = DMatrix<f64>;

/// Kronecker product of two complex matrices, row-major block convention:
/// `kron(a, b)[(i * rb + k, j * cb + l)] = a[(i, j)] * b[(k, l)]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Largest absolute entry of a complex matrix; used as the residual norm in
/// algebraic identity checks.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute entry of a real matrix.
pub fn max_abs_real(m: &RealMatrix) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Frobenius inner product `tr(a^T b)` of two real matrices.
pub fn frobenius_dot(a: &RealMatrix, b: &RealMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Hermitian eigendecomposition. Returns the real eigenvalues and the
/// unitary matrix whose columns are the corresponding eigenvectors.
///
/// The input must be Hermitian to working precision; only its Hermitian
/// part is meaningful to the underlying symmetric solver.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (DVector<f64>, ComplexMatrix) {
    let eig = m.clone().symmetric_eigen();
    (eig.eigenvalues, eig.eigenvectors)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    let (vals, _) = hermitian_eigen(m);
    vals.iter().copied().fold(f64::INFINITY, f64::min)
}
