//! Small summary statistics used by the experiments.

use lcsearch_core::linalg::frobenius;
use lcsearch_core::{DMatrix, DVector};

/// Median of a sample (mean of the two middle values for even lengths).
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Unbiased cross-covariance of paired vector samples.
pub fn cross_covariance(a: &[DVector<f64>], b: &[DVector<f64>]) -> DMatrix<f64> {
    assert_eq!(a.len(), b.len());
    let k = a.len();
    assert!(k >= 2, "covariance needs at least two draws");
    let mean_a = a.iter().fold(DVector::zeros(a[0].len()), |acc, v| acc + v) / k as f64;
    let mean_b = b.iter().fold(DVector::zeros(b[0].len()), |acc, v| acc + v) / k as f64;
    let mut c = DMatrix::zeros(mean_a.len(), mean_b.len());
    for (u, v) in a.iter().zip(b) {
        c += (u - &mean_a) * (v - &mean_b).transpose();
    }
    c / (k - 1) as f64
}

pub fn covariance(a: &[DVector<f64>]) -> DMatrix<f64> {
    cross_covariance(a, a)
}

/// `||estimate - target||_F / ||target||_F`.
pub fn relative_frobenius(estimate: &DMatrix<f64>, target: &DMatrix<f64>) -> f64 {
    frobenius(&(estimate - target)) / frobenius(target)
}

/// Least-squares slope of `y` on `x`.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let mx = mean(x);
    let my = mean(y);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}
