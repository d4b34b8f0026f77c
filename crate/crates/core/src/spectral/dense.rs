use nalgebra::DMatrix;

use super::operator::Scalar;

/// Lowest eigenvalue of a dense Hermitian matrix and the residual
/// `‖Hv − λv‖` of its computed eigenvector.
pub fn lowest<T: Scalar>(m: &DMatrix<T>) -> (f64, f64) {
    let eig = m.clone().symmetric_eigen();
    let (idx, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty matrix");
    let v = eig.eigenvectors.column(idx);
    let r = m * v - v * T::from_real(lambda);
    (lambda, r.norm())
}

/// All eigenvalues, ascending.
pub fn eigenvalues<T: Scalar>(m: &DMatrix<T>) -> Vec<f64> {
    let mut values: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}
