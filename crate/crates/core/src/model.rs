//! Regression data model and (weighted) least-squares estimators.
//!
//! Both estimators go through the normal equations `G theta = r` with a
//! pseudo-inverse of the Gram matrix, so a singular design still yields the
//! minimum-norm least-squares solution.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::weights::WeightVector;

/// Observations `Y_i = x_i' theta + eps_i`, `i = 1..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionProblem {
    x: DMatrix<f64>,
    y: DVector<f64>,
    intercept_col: Option<usize>,
}

impl RegressionProblem {
    pub fn new(x: DMatrix<f64>, y: DVector<f64>, intercept_col: Option<usize>) -> Result<Self> {
        if x.nrows() == 0 {
            return Err(Error::InvalidProblem("no observations"));
        }
        if x.ncols() == 0 {
            return Err(Error::InvalidProblem("no covariates"));
        }
        if x.nrows() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.nrows(), got: y.len() });
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidProblem("non-finite entry"));
        }
        if let Some(j) = intercept_col {
            if j >= x.ncols() {
                return Err(Error::InvalidProblem("intercept column out of range"));
            }
            if x.column(j).iter().any(|&v| v != 1.0) {
                return Err(Error::InvalidProblem("intercept column is not all ones"));
            }
        }
        Ok(Self { x, y, intercept_col })
    }

    /// Append an all-ones column and record it as the intercept.
    pub fn with_intercept(x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        let q = x.ncols();
        let x = x.insert_column(q, 1.0);
        Self::new(x, y, Some(q))
    }

    /// Like [`RegressionProblem::new`], marking the first all-ones column
    /// (if any) as the intercept.
    pub fn detect_intercept(x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        let col = (0..x.ncols()).find(|&j| x.column(j).iter().all(|&v| v == 1.0));
        Self::new(x, y, col)
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn q(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn intercept_col(&self) -> Option<usize> {
        self.intercept_col
    }

    /// Same design, new response.
    pub fn with_response(&self, y: DVector<f64>) -> Result<Self> {
        Self::new(self.x.clone(), y, self.intercept_col)
    }
}

/// A least-squares fit.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub theta: DVector<f64>,
    /// `n^{-1} sum_i w_i x_i x_i'` (unit weights for OLS).
    pub gram: DMatrix<f64>,
    pub rank: usize,
    pub used_pseudoinverse: bool,
}

/// `n^{-1} sum_i x_i x_i'`.
pub fn gram_matrix(problem: &RegressionProblem) -> DMatrix<f64> {
    let n = problem.n() as f64;
    problem.x.tr_mul(&problem.x) / n
}

fn weighted_fit(problem: &RegressionProblem, weight: impl Fn(usize) -> f64) -> Estimate {
    let (n, q) = (problem.n(), problem.q());
    let mut gram = DMatrix::<f64>::zeros(q, q);
    let mut rhs = DVector::<f64>::zeros(q);
    let mut row = Vec::with_capacity(q);
    for i in 0..n {
        let w = weight(i);
        if w == 0.0 {
            continue;
        }
        row.clear();
        row.extend(problem.x.row(i).iter().copied());
        let wy = w * problem.y[i];
        for a in 0..q {
            let wxa = w * row[a];
            rhs[a] += wy * row[a];
            for b in 0..=a {
                gram[(a, b)] += wxa * row[b];
            }
        }
    }
    for a in 0..q {
        for b in 0..a {
            gram[(b, a)] = gram[(a, b)];
        }
    }
    gram /= n as f64;
    rhs /= n as f64;
    let (theta, rank) = linalg::pinv_solve(&gram, &rhs);
    Estimate { theta, gram, rank, used_pseudoinverse: rank < q }
}

/// Ordinary least squares; minimum-norm solution when the Gram matrix is
/// singular.
pub fn ols_fit(problem: &RegressionProblem) -> Estimate {
    weighted_fit(problem, |_| 1.0)
}

/// Weighted least squares, `argmin sum_i w_i (Y_i - x_i' eta)^2`.
///
/// With unit weights this is bit-identical to [`ols_fit`].
pub fn wls_fit(problem: &RegressionProblem, w: &WeightVector) -> Result<Estimate> {
    wls_fit_raw(problem, w.as_slice())
}

/// [`wls_fit`] on a plain weight slice.
pub fn wls_fit_raw(problem: &RegressionProblem, w: &[f64]) -> Result<Estimate> {
    if w.len() != problem.n() {
        return Err(Error::DimensionMismatch { expected: problem.n(), got: w.len() });
    }
    if let Some(i) = w.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidWeight(i));
    }
    if w.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateWeights);
    }
    Ok(weighted_fit(problem, |i| w[i]))
}

/// `r_i = Y_i - x_i' theta`.
pub fn residuals(problem: &RegressionProblem, theta: &DVector<f64>) -> Result<DVector<f64>> {
    if theta.len() != problem.q() {
        return Err(Error::DimensionMismatch { expected: problem.q(), got: theta.len() });
    }
    Ok(&problem.y - &problem.x * theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{WeightScheme, WeightVector};
    use alloc::vec;
    use approx::assert_relative_eq;

    fn problem(rows: &[&[f64]], y: &[f64]) -> RegressionProblem {
        let q = rows[0].len();
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        RegressionProblem::new(
            DMatrix::from_row_slice(rows.len(), q, &flat),
            DVector::from_row_slice(y),
            None,
        )
        .unwrap()
    }

    fn intercept_only(y: &[f64]) -> RegressionProblem {
        RegressionProblem::new(DMatrix::from_element(y.len(), 1, 1.0), DVector::from_row_slice(y), Some(0))
            .unwrap()
    }

    fn raw_weights(w: &[f64]) -> WeightVector {
        WeightVector::from_raw(w.to_vec(), WeightScheme::Multinomial, 1.0)
    }

    #[test]
    fn rejects_bad_shapes() {
        let err = RegressionProblem::new(DMatrix::zeros(3, 1), DVector::zeros(2), None).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, got: 2 });
        assert!(RegressionProblem::new(DMatrix::zeros(0, 1), DVector::zeros(0), None).is_err());
        assert!(RegressionProblem::new(DMatrix::zeros(2, 1), DVector::zeros(2), Some(0)).is_err());
    }

    #[test]
    fn gram_examples() {
        let g = gram_matrix(&problem(&[&[1.0, 0.0], &[0.0, 1.0]], &[0.0, 0.0]));
        assert_eq!(g, DMatrix::identity(2, 2) * 0.5);
        let g = gram_matrix(&intercept_only(&[1.0; 5]));
        assert_eq!(g[(0, 0)], 1.0);
        let g = gram_matrix(&problem(&[&[1.0, 1.0], &[1.0, -1.0]], &[0.0, 0.0]));
        assert_eq!(g, DMatrix::identity(2, 2));
    }

    #[test]
    fn ols_examples() {
        let e = ols_fit(&intercept_only(&[1.0, 2.0, 3.0]));
        assert_relative_eq!(e.theta[0], 2.0, epsilon = 1e-14);
        assert!(!e.used_pseudoinverse);

        let e = ols_fit(&problem(&[&[0.0, 1.0], &[1.0, 1.0]], &[0.0, 1.0]));
        assert_relative_eq!(e.theta, DVector::from_row_slice(&[1.0, 0.0]), epsilon = 1e-12);
        assert_eq!(e.rank, 2);
    }

    #[test]
    fn ols_duplicated_column_is_minimum_norm() {
        // SVD at the desk: X = [1 1; 2 2] = sqrt(10) u v' with v = (1,1)/sqrt(2),
        // u = (1,2)/sqrt(5); pinv(X) Y = v (u'Y) / sqrt(10) = (0.5, 0.5).
        let e = ols_fit(&problem(&[&[1.0, 1.0], &[2.0, 2.0]], &[1.0, 2.0]));
        assert!(e.used_pseudoinverse);
        assert_eq!(e.rank, 1);
        assert_relative_eq!(e.theta, DVector::from_row_slice(&[0.5, 0.5]), epsilon = 1e-12);
    }

    #[test]
    fn wls_examples() {
        let p = intercept_only(&[1.0, 2.0, 3.0]);
        let e = wls_fit(&p, &raw_weights(&[0.0, 3.0, 0.0])).unwrap();
        assert_relative_eq!(e.theta[0], 2.0, epsilon = 1e-14);
        // weighted mean (2*1 + 1*2) / 3
        let e = wls_fit(&p, &raw_weights(&[2.0, 1.0, 0.0])).unwrap();
        assert_relative_eq!(e.theta[0], 4.0 / 3.0, epsilon = 1e-14);
        assert_eq!(wls_fit(&p, &raw_weights(&[0.0; 3])).unwrap_err(), Error::DegenerateWeights);
        assert!(matches!(wls_fit(&p, &raw_weights(&[1.0; 2])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn wls_unit_weights_bit_identical_to_ols() {
        let p = problem(&[&[1.0, 0.3], &[1.0, -1.7], &[1.0, 2.2], &[1.0, 0.9]], &[0.1, -2.0, 3.3, 1.7]);
        let w = raw_weights(&vec![1.0; 4]);
        assert_eq!(wls_fit(&p, &w).unwrap(), ols_fit(&p));
    }

    #[test]
    fn residual_examples() {
        let p = intercept_only(&[1.0, 2.0, 3.0]);
        assert_eq!(residuals(&p, &DVector::zeros(1)).unwrap(), p.y().clone());
        assert_eq!(
            residuals(&p, &DVector::from_element(1, 2.0)).unwrap(),
            DVector::from_row_slice(&[-1.0, 0.0, 1.0])
        );
        let line = problem(&[&[0.0, 1.0], &[1.0, 1.0]], &[0.0, 1.0]);
        assert_eq!(residuals(&line, &DVector::from_row_slice(&[1.0, 0.0])).unwrap(), DVector::zeros(2));
        assert!(residuals(&p, &DVector::zeros(2)).is_err());
    }

    #[test]
    fn intercept_helpers() {
        let p = RegressionProblem::with_intercept(DMatrix::from_row_slice(3, 1, &[1.0, 2.0, 3.0]), DVector::zeros(3))
            .unwrap();
        assert_eq!(p.q(), 2);
        assert_eq!(p.intercept_col(), Some(1));
        let d = RegressionProblem::detect_intercept(p.x().clone(), DVector::zeros(3)).unwrap();
        assert_eq!(d.intercept_col(), Some(1));
    }
}
