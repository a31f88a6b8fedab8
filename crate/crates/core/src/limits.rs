//! Limit-law constants and samplers for the nearest-candidate distance,
//! plug-in regularity diagnostics, and the permutation-sum moment bound.
//!
//! The two laws covered:
//!
//! * For i.i.d. points `Z_b` with continuous density `f`,
//!   `alpha_q f(z)^{1/q} B^{1/q} min_b ||Z_b - z||` tends to `Weibull(q)`,
//!   the law with cdf `1 - exp(-x^q)`.
//! * For i.i.d. `Z_0, Z_b ~ N_q(0, Sigma)`,
//!   `B^{1/q} min_b ||Z_0 + c Z_b||` tends to
//!   `beta_q det(Sigma)^{1/(2q)} c exp(S^2 / (2 c^2 q)) W` with independent
//!   `S^2 ~ chi^2_q` and `W ~ Weibull(q)`. A singular `Sigma` replaces `q`
//!   by its rank and `det` by the product of the nonzero eigenvalues.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{ChiSquared, Distribution};

use crate::error::{Error, Result};
use crate::linalg::{frobenius, symmetric_eigenvalues};
use crate::model::{gram_matrix, RegressionProblem};
use crate::special::ln_gamma;
use crate::weights::{w2_statistic, w3_statistic, WeightVector};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// `alpha_q = pi^{1/2} Gamma(q/2 + 1)^{-1/q}`.
pub fn alpha_q(q: usize) -> f64 {
    let q = q as f64;
    SQRT_PI * libm::exp(-ln_gamma(0.5 * q + 1.0) / q)
}

/// `beta_q = 2^{1/2} Gamma(q/2 + 1)^{1/q}`.
pub fn beta_q(q: usize) -> f64 {
    let q = q as f64;
    core::f64::consts::SQRT_2 * libm::exp(ln_gamma(0.5 * q + 1.0) / q)
}

/// `Weibull(q)` cdf `1 - exp(-x^q)`.
pub fn weibull_cdf(x: f64, q: usize) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::InvalidArgument("weibull_cdf needs x >= 0"));
    }
    Ok(-libm::expm1(-libm::pow(x, q as f64)))
}

/// Inverse-transform draw `(-ln U)^{1/q}`.
pub fn weibull_sample<R: Rng + ?Sized>(q: usize, rng: &mut R) -> f64 {
    let u: f64 = 1.0 - rng.random::<f64>();
    libm::pow(-libm::log(u), 1.0 / q as f64)
}

/// `alpha_q f_z^{1/q} B^{1/q} d` for a precomputed minimum distance `d`.
pub fn scale_min_distance(min_dist: f64, b: usize, f_z: f64, q: usize) -> Result<f64> {
    if !(f_z > 0.0) {
        return Err(Error::InvalidArgument("density at z must be positive"));
    }
    let qf = q as f64;
    Ok(alpha_q(q) * libm::pow(f_z * b as f64, 1.0 / qf) * min_dist)
}

/// `alpha_q f(z)^{1/q} B^{1/q} min_b ||Z_b - z||` with `points` holding one
/// draw `Z_b` per row.
pub fn scaled_min_statistic(points: &DMatrix<f64>, z: &DVector<f64>, f_z: f64, q: usize) -> Result<f64> {
    let b = points.nrows();
    if b == 0 {
        return Err(Error::InvalidArgument("need at least one point"));
    }
    if points.ncols() != q || z.len() != q {
        return Err(Error::DimensionMismatch { expected: q, got: points.ncols().max(z.len()) });
    }
    let mut best = f64::INFINITY;
    for row in points.row_iter() {
        let d2: f64 = row.iter().zip(z.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
        best = best.min(d2);
    }
    scale_min_distance(libm::sqrt(best), b, f_z, q)
}

/// Parameters of the normal limit experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitLawSpec {
    pub q: usize,
    pub c: f64,
    pub sigma: DMatrix<f64>,
    /// Number of eigenvalues above `1e-10 * lambda_max`.
    pub rank: usize,
    /// Product of those eigenvalues.
    pub pseudo_det: f64,
}

/// Relative eigenvalue cutoff used for the rank of `Sigma`.
pub const RANK_TOL: f64 = 1e-10;

impl LimitLawSpec {
    pub fn new(sigma: DMatrix<f64>, c: f64) -> Result<Self> {
        if !sigma.is_square() || sigma.nrows() == 0 {
            return Err(Error::InvalidArgument("sigma must be square and non-empty"));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument("c must be positive"));
        }
        let ev = symmetric_eigenvalues(&sigma);
        let top = ev[0];
        if !(top > 0.0) {
            return Err(Error::InvalidArgument("sigma has rank 0"));
        }
        let kept: Vec<f64> = ev.into_iter().filter(|&l| l > RANK_TOL * top).collect();
        let pseudo_det = libm::exp(kept.iter().map(|l| libm::log(*l)).sum());
        Ok(Self { q: sigma.nrows(), c, rank: kept.len(), pseudo_det, sigma })
    }

    /// Deterministic factor `beta_r pdet^{1/(2r)} c` with `r = rank`.
    pub fn scale(&self) -> f64 {
        let r = self.rank;
        beta_q(r) * libm::pow(self.pseudo_det, 1.0 / (2.0 * r as f64)) * self.c
    }
}

/// One draw of `beta_r pdet^{1/(2r)} c exp(S^2/(2 c^2 r)) W`, `r = rank`.
pub fn corollary_limit_sample<R: Rng + ?Sized>(spec: &LimitLawSpec, rng: &mut R) -> f64 {
    let r = spec.rank;
    let s2 = ChiSquared::new(r as f64).expect("rank >= 1").sample(rng);
    let w = weibull_sample(r, rng);
    spec.scale() * libm::exp(s2 / (2.0 * spec.c * spec.c * r as f64)) * w
}

/// High-dimension approximation `c exp(1/(2c^2))` of the stochastic factor.
pub fn approximate_factor(c: f64) -> f64 {
    c * libm::exp(0.5 / (c * c))
}

/// Plug-in statistics for the design/error regularity conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub n: usize,
    /// `||n^{-1} X'X - Gamma||_F`, when a target is supplied.
    pub d1_gap: Option<f64>,
    /// `sum_i L_i` with `L_i = n^{-1} (1 + e_i^2) ||x_i||^2`.
    pub l_sum: f64,
    /// `sum_i L_i min(L_i, 1)`.
    pub d3_stat: f64,
    /// `(delta, sum_i L_i 1{L_i > delta})`.
    pub lindeberg: Vec<(f64, f64)>,
    pub w2: Option<f64>,
    /// `(K, n^{-1} sum_i W_i^2 1{W_i >= K})`.
    pub w3: Vec<(f64, f64)>,
}

/// Plug-in condition statistics with errors replaced by `errors`.
pub fn d_condition_stats(
    problem: &RegressionProblem,
    errors: &[f64],
    deltas: &[f64],
    ks: &[f64],
    weights: Option<&WeightVector>,
    gamma_target: Option<&DMatrix<f64>>,
) -> Result<ConditionReport> {
    let n = problem.n();
    if errors.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: errors.len() });
    }
    let l: Vec<f64> = problem
        .x()
        .row_iter()
        .zip(errors)
        .map(|(row, e)| (1.0 + e * e) * row.norm_squared() / n as f64)
        .collect();
    let d1_gap = match gamma_target {
        Some(g) => {
            if g.shape() != (problem.q(), problem.q()) {
                return Err(Error::DimensionMismatch { expected: problem.q(), got: g.nrows() });
            }
            Some(frobenius(&(gram_matrix(problem) - g)))
        }
        None => None,
    };
    let lindeberg = deltas
        .iter()
        .map(|&d| (d, l.iter().filter(|&&v| v > d).fold(0.0, |s, v| s + v)))
        .collect();
    Ok(ConditionReport {
        n,
        d1_gap,
        l_sum: l.iter().sum(),
        d3_stat: l.iter().map(|&v| v * v.min(1.0)).sum(),
        lindeberg,
        w2: weights.map(w2_statistic),
        w3: match weights {
            Some(w) => ks.iter().map(|&k| (k, w3_statistic(w, k))).collect(),
            None => Vec::new(),
        },
    })
}

/// Moment summaries of one random vector `M_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    /// `E ||M_i||`.
    pub mean_norm: f64,
    /// `E ||M_i|| min(||M_i||, 1)`.
    pub mean_norm_min1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermutationBound {
    pub r_k: f64,
    pub s: f64,
    pub l: f64,
    pub v_bar: f64,
    pub bound: f64,
}

/// Bound on `E || sum_i V_i M_i - v_bar sum_i E M_i ||` for a uniformly
/// permuted `v` and independent `M_i`:
/// `2 R(K) S + 2 v_bar L + sqrt(n/(n-1) K v_bar L)`.
pub fn permutation_bound(v: &[f64], moments: &[MomentSummary], k: f64) -> Result<PermutationBound> {
    let n = v.len();
    if n < 2 {
        return Err(Error::TooFewObservations(n));
    }
    if moments.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: moments.len() });
    }
    if v.iter().any(|&x| !(x >= 0.0)) || !(k >= 0.0) {
        return Err(Error::InvalidArgument("v and K must be nonnegative"));
    }
    let nf = n as f64;
    let v_bar = v.iter().sum::<f64>() / nf;
    let r_k = v.iter().filter(|&&x| x > k).fold(0.0, |s, x| s + x) / nf;
    let s = moments.iter().map(|m| m.mean_norm).sum::<f64>();
    let l = moments.iter().map(|m| m.mean_norm_min1).sum::<f64>();
    let bound = 2.0 * r_k * s + 2.0 * v_bar * l + libm::sqrt(nf / (nf - 1.0) * k * v_bar * l);
    Ok(PermutationBound { r_k, s, l, v_bar, bound })
}
