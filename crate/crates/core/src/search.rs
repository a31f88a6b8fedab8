//! Candidate set construction and the stochastic-search estimator.
//!
//! The candidate set holds the OLS fit at index 0 and `B` weighted
//! least-squares fits, each under an independent exchangeable weight draw.
//! The estimator is the candidate with the largest profile
//! log-likelihood, with the mean of the fitted error density moved into
//! the intercept.

use alloc::vec::Vec;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::logconcave::{fit_logconcave, recenter_to_mean_zero, LogConcaveFit};
use crate::model::{ols_fit, residuals, wls_fit, Estimate, RegressionProblem};
use crate::rng::substream;
use crate::special::chi_square_quantile;
use crate::weights::WeightScheme;

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    /// Index 0 is OLS, `1..=B` are weighted fits.
    pub candidates: Vec<Estimate>,
    pub b: usize,
    pub scheme: WeightScheme,
    /// Nominal tuning constant of the scheme as resolved for this `n`.
    pub c: f64,
    pub m: Option<usize>,
    pub seed: u64,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// The first `b + 1` candidates; identical to building with `b`.
    pub fn prefix(&self, b: usize) -> CandidateSet {
        let b = b.min(self.b);
        CandidateSet { candidates: self.candidates[..=b].to_vec(), b, ..self.clone() }
    }
}

/// Candidate `b >= 1` is a weighted fit under the weight draw from the
/// substream `(seed, b)`; the result is therefore deterministic and a
/// smaller `B` gives a prefix of a larger one.
pub fn build_candidates(
    problem: &RegressionProblem,
    scheme: WeightScheme,
    c: f64,
    b: usize,
    seed: u64,
) -> Result<CandidateSet> {
    build_candidates_keyed(problem, scheme, c, b, seed, &[])
}

/// Like [`build_candidates`] but drawing weights from `(seed, key.., b)`,
/// e.g. with `key = [rep]` inside a Monte Carlo loop.
pub fn build_candidates_keyed(
    problem: &RegressionProblem,
    scheme: WeightScheme,
    c: f64,
    b: usize,
    seed: u64,
    key: &[u64],
) -> Result<CandidateSet> {
    let resolved = scheme.resolve(problem.n(), c)?;
    let mut candidates = Vec::with_capacity(b + 1);
    candidates.push(ols_fit(problem));
    let mut path: Vec<u64> = key.to_vec();
    path.push(0);
    for index in 1..=b {
        *path.last_mut().expect("path is non-empty") = index as u64;
        let w = resolved.draw(&mut substream(seed, &path))?;
        candidates.push(wls_fit(problem, &w)?);
    }
    Ok(CandidateSet { candidates, b, scheme, c: resolved.c_nominal(), m: resolved.m, seed })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// Winning candidate with the fitted density's mean added to the
    /// intercept.
    pub theta_hat: DVector<f64>,
    pub best_index: usize,
    /// `L_n` at each candidate; `-inf` for skipped (degenerate) ones.
    pub profile_values: Vec<f64>,
    pub skipped: Vec<usize>,
    /// Mean-zero density fit at the winner.
    pub fit: LogConcaveFit,
}

/// First index of the maximum; `None` if no entry is finite.
pub fn argmax_first(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if v.is_finite() && best.map_or(true, |j| v > values[j]) {
            best = Some(i);
        }
    }
    best
}

/// Score every candidate with the profile log-likelihood and pick the best.
pub fn search_candidates(problem: &RegressionProblem, cands: &CandidateSet, tol: f64) -> Result<SearchResult> {
    let intercept = problem.intercept_col().ok_or(Error::MissingIntercept)?;
    let mut profile_values = Vec::with_capacity(cands.len());
    let mut fits: Vec<Option<LogConcaveFit>> = Vec::with_capacity(cands.len());
    let mut skipped = Vec::new();
    for (index, cand) in cands.candidates.iter().enumerate() {
        let r = residuals(problem, &cand.theta)?;
        match fit_logconcave(r.as_slice(), tol) {
            Ok(fit) => {
                profile_values.push(fit.loglik);
                fits.push(Some(fit));
            }
            Err(Error::MleDoesNotExist) => {
                log::warn!("candidate {index}: residuals are degenerate, skipped");
                profile_values.push(f64::NEG_INFINITY);
                fits.push(None);
                skipped.push(index);
            }
            Err(e) => return Err(e),
        }
    }
    let best_index = argmax_first(&profile_values).ok_or(Error::NoValidCandidate)?;
    let fit = fits[best_index].take().expect("best candidate has a fit");
    let (fit, estimate) = recenter_to_mean_zero(&fit, &cands.candidates[best_index], Some(intercept))?;
    Ok(SearchResult { theta_hat: estimate.theta, best_index, profile_values, skipped, fit })
}

/// Build the candidate set and return its profile-likelihood maximizer.
pub fn stochastic_search_fit(
    problem: &RegressionProblem,
    scheme: WeightScheme,
    c: f64,
    b: usize,
    seed: u64,
    tol: f64,
) -> Result<SearchResult> {
    if problem.intercept_col().is_none() {
        return Err(Error::MissingIntercept);
    }
    let cands = build_candidates(problem, scheme, c, b, seed)?;
    search_candidates(problem, &cands, tol)
}

/// Scaled distances `sqrt(n) ||theta_b - theta_true||` minimized over the
/// candidates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinDistance {
    pub min_all: f64,
    /// Over `b >= 1` only; `None` when `B = 0`.
    pub min_excl0: Option<f64>,
}

pub fn min_distance_to(cands: &CandidateSet, theta_true: &DVector<f64>, n: usize) -> Result<MinDistance> {
    let scale = libm::sqrt(n as f64);
    let mut dists = Vec::with_capacity(cands.len());
    for cand in &cands.candidates {
        if cand.theta.len() != theta_true.len() {
            return Err(Error::DimensionMismatch { expected: theta_true.len(), got: cand.theta.len() });
        }
        dists.push(scale * (&cand.theta - theta_true).norm());
    }
    let min_all = dists.iter().cloned().fold(f64::INFINITY, f64::min);
    let min_excl0 = (dists.len() > 1).then(|| dists[1..].iter().cloned().fold(f64::INFINITY, f64::min));
    Ok(MinDistance { min_all, min_excl0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CRule {
    /// `c = 1`.
    Unit,
    /// `c = median(chi^2_q) / q`.
    MedianRule,
}

/// Tuning constant for dimension `q`.
///
/// `MedianRule` returns `median(S^2/q)` with `S^2 ~ chi^2_q`. Minimizing
/// `c exp(t / (2c^2))` at `t = S^2/q` instead would suggest
/// `sqrt(median(S^2/q))`; that variant is not implemented.
pub fn choose_c(q: usize, rule: CRule) -> Result<f64> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be at least 1"));
    }
    Ok(match rule {
        CRule::Unit => 1.0,
        CRule::MedianRule => chi_square_quantile(0.5, q as f64) / q as f64,
    })
}
