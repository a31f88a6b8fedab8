//! Synthetic designs and error models for the experiments.

use std::f64::consts::PI;

use lcsearch_core::linalg::pseudo_inverse;
use lcsearch_core::{DMatrix, DVector, RegressionProblem};
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::config::ErrorModel;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `n` rows with `q - 1` coordinates uniform on `[-1, 1]` followed by the
/// intercept column.
pub fn uniform_design<R: Rng + ?Sized>(n: usize, q: usize, rng: &mut R) -> DMatrix<f64> {
    let mut x = DMatrix::from_element(n, q, 1.0);
    for i in 0..n {
        for j in 0..q - 1 {
            x[(i, j)] = rng.random_range(-1.0..=1.0);
        }
    }
    x
}

/// `E x x'` for [`uniform_design`]: `1/3` on the random coordinates, `1` on
/// the intercept.
pub fn uniform_design_gram(q: usize) -> DMatrix<f64> {
    let mut g = DMatrix::from_diagonal_element(q, q, 1.0 / 3.0);
    g[(q - 1, q - 1)] = 1.0;
    g
}

/// True parameter used by the generators: all ones.
pub fn theta_true(q: usize) -> DVector<f64> {
    DVector::from_element(q, 1.0)
}

impl ErrorModel {
    pub fn name(self) -> &'static str {
        match self {
            ErrorModel::Normal => "normal",
            ErrorModel::CenteredExponential => "centered_exponential",
            ErrorModel::CenteredGumbel => "centered_gumbel",
            ErrorModel::HeteroscedasticNormal => "heteroscedastic_normal",
        }
    }

    /// Error variance at design row `x`.
    pub fn variance(self, x: &[f64]) -> f64 {
        match self {
            ErrorModel::Normal | ErrorModel::CenteredExponential => 1.0,
            ErrorModel::CenteredGumbel => PI * PI / 6.0,
            ErrorModel::HeteroscedasticNormal => 1.0 + x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64,
        }
    }

    /// One mean-zero error at design row `x`.
    pub fn sample<R: Rng + ?Sized>(self, x: &[f64], rng: &mut R) -> f64 {
        match self {
            ErrorModel::Normal => StandardNormal.sample(rng),
            ErrorModel::CenteredExponential => {
                let e: f64 = Exp1.sample(rng);
                e - 1.0
            }
            ErrorModel::CenteredGumbel => {
                let u: f64 = 1.0 - rng.random::<f64>();
                -(-u.ln()).ln() - EULER_GAMMA
            }
            ErrorModel::HeteroscedasticNormal => {
                let z: f64 = StandardNormal.sample(rng);
                self.variance(x).sqrt() * z
            }
        }
    }

    /// Error density, for the models whose errors are identically
    /// distributed.
    pub fn density(self, y: f64) -> Option<f64> {
        match self {
            ErrorModel::Normal => Some((-0.5 * y * y).exp() / (2.0 * PI).sqrt()),
            ErrorModel::CenteredExponential => Some(if y < -1.0 { 0.0 } else { (-(y + 1.0)).exp() }),
            ErrorModel::CenteredGumbel => {
                let z = y + EULER_GAMMA;
                Some((-z - (-z).exp()).exp())
            }
            ErrorModel::HeteroscedasticNormal => None,
        }
    }

    /// Interval outside which the density is below `1e-12`.
    pub fn effective_support(self) -> Option<(f64, f64)> {
        match self {
            ErrorModel::Normal => Some((-7.5, 7.5)),
            ErrorModel::CenteredExponential => Some((-1.0, 27.0)),
            ErrorModel::CenteredGumbel => Some((-4.0, 28.0)),
            ErrorModel::HeteroscedasticNormal => None,
        }
    }
}

/// Response `X theta + eps` with errors drawn row by row.
pub fn simulate_response<R: Rng + ?Sized>(
    x: &DMatrix<f64>,
    theta: &DVector<f64>,
    model: ErrorModel,
    rng: &mut R,
) -> DVector<f64> {
    let mean = x * theta;
    let mut row = vec![0.0; x.ncols()];
    DVector::from_fn(x.nrows(), |i, _| {
        for (j, v) in row.iter_mut().enumerate() {
            *v = x[(i, j)];
        }
        mean[i] + model.sample(&row, rng)
    })
}

/// Regression problem with the given design (intercept last) and a fresh
/// response.
pub fn simulate_problem<R: Rng + ?Sized>(
    x: &DMatrix<f64>,
    theta: &DVector<f64>,
    model: ErrorModel,
    rng: &mut R,
) -> RegressionProblem {
    let y = simulate_response(x, theta, model, rng);
    RegressionProblem::new(x.clone(), y, Some(x.ncols() - 1)).expect("generated design has an intercept")
}

/// `Gamma^{-1} Gamma_eps Gamma^{-1}` for a fixed design, with
/// `Gamma = n^{-1} sum x x'` and `Gamma_eps = n^{-1} sum var(x) x x'`.
pub fn sandwich_sigma(x: &DMatrix<f64>, model: ErrorModel) -> DMatrix<f64> {
    let (n, q) = x.shape();
    let mut gamma = DMatrix::zeros(q, q);
    let mut gamma_eps = DMatrix::zeros(q, q);
    for row in x.row_iter() {
        let r = row.transpose();
        let outer = &r * r.transpose();
        let v = model.variance(r.as_slice());
        gamma_eps += &outer * v;
        gamma += outer;
    }
    gamma /= n as f64;
    gamma_eps /= n as f64;
    let (g_inv, _) = pseudo_inverse(&gamma);
    &g_inv * gamma_eps * &g_inv
}
