//! Small dense helpers on top of `nalgebra`: a rank-revealing
//! pseudo-inverse and symmetric eigen summaries.

use nalgebra::{DMatrix, DVector};

/// Singular-value cutoff `eps * max(rows, cols) * sigma_max`.
pub fn svd_cutoff(sigma_max: f64, rows: usize, cols: usize) -> f64 {
    f64::EPSILON * rows.max(cols) as f64 * sigma_max
}

/// Moore-Penrose pseudo-inverse of a symmetric matrix together with the
/// numerical rank. The singular values are the absolute eigenvalues.
pub fn pseudo_inverse(a: &DMatrix<f64>) -> (DMatrix<f64>, usize) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "pseudo_inverse needs a square matrix");
    let sym = (a + a.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let sigma_max = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let cutoff = svd_cutoff(sigma_max, n, n);
    let mut pinv = DMatrix::zeros(n, n);
    let mut rank = 0;
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l.abs() > cutoff && l != 0.0 {
            rank += 1;
            let vk = eig.eigenvectors.column(k);
            pinv += (vk * vk.transpose()) / l;
        }
    }
    (pinv, rank)
}

/// Solve `a x = b` in the minimum-norm least-squares sense.
pub fn pinv_solve(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, usize) {
    let (pinv, rank) = pseudo_inverse(a);
    (pinv * b, rank)
}

/// Eigenvalues of a symmetric matrix, sorted in decreasing order.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> alloc::vec::Vec<f64> {
    let sym = (a + a.transpose()) * 0.5;
    let mut ev: alloc::vec::Vec<f64> = sym.symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// Symmetric square root `A^{1/2}` of a positive-semidefinite matrix.
/// Negative eigenvalues from rounding are clamped to zero.
pub fn psd_sqrt(a: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = (a + a.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let roots = eig.eigenvalues.map(|l| libm::sqrt(l.max(0.0)));
    &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose()
}

pub fn frobenius(a: &DMatrix<f64>) -> f64 {
    libm::sqrt(a.iter().map(|x| x * x).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pinv_of_rank_one() {
        let a = DMatrix::from_row_slice(2, 2, &[5.0, 5.0, 5.0, 5.0]);
        let (p, rank) = pseudo_inverse(&a);
        assert_eq!(rank, 1);
        assert_relative_eq!(p, DMatrix::from_element(2, 2, 0.05), epsilon = 1e-14);
    }

    #[test]
    fn pinv_of_invertible_is_inverse() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let (p, rank) = pseudo_inverse(&a);
        assert_eq!(rank, 2);
        assert_relative_eq!(&a * p, DMatrix::identity(2, 2), epsilon = 1e-14);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let a = DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 2.0]);
        let r = psd_sqrt(&a);
        assert_relative_eq!(&r * &r, a, epsilon = 1e-12);
    }
}
