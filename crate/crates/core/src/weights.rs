//! Exchangeable random weight vectors for the weighted bootstrap.
//!
//! Two schemes are provided: multinomial counts (the ordinary bootstrap,
//! `c = 1`) and subsampling without replacement, where `m` entries equal
//! `n / m` and the rest are zero (`c = sqrt(n/m - 1)`). Every vector sums
//! to `n`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightScheme {
    Multinomial,
    Subsample,
}

impl WeightScheme {
    pub fn name(self) -> &'static str {
        match self {
            WeightScheme::Multinomial => "multinomial",
            WeightScheme::Subsample => "subsample",
        }
    }

    /// Scheme parameters for a target constant `c` at sample size `n`.
    pub fn resolve(self, n: usize, c: f64) -> Result<ResolvedScheme> {
        if n < 2 {
            return Err(Error::TooFewObservations(n));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidArgument("c must be positive and finite"));
        }
        match self {
            WeightScheme::Multinomial => {
                if (c - 1.0).abs() > 1e-12 {
                    return Err(Error::SchemeConstant(c));
                }
                Ok(ResolvedScheme { scheme: self, n, m: None })
            }
            WeightScheme::Subsample => {
                Ok(ResolvedScheme { scheme: self, n, m: Some(subsample_size_for_c(n, c)) })
            }
        }
    }
}

/// A scheme with its sample size and (for subsampling) `m` fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolvedScheme {
    pub scheme: WeightScheme,
    pub n: usize,
    pub m: Option<usize>,
}

impl ResolvedScheme {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<WeightVector> {
        match self.m {
            None => multinomial_weights(self.n, rng),
            Some(m) => subsample_weights(self.n, m, rng),
        }
    }

    /// The constant `c` this scheme actually targets.
    pub fn c_nominal(&self) -> f64 {
        match self.m {
            None => 1.0,
            Some(m) => libm::sqrt(self.n as f64 / m as f64 - 1.0),
        }
    }
}

/// One draw `W^(b)` of an exchangeable weight vector.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    w: Vec<f64>,
    pub scheme: WeightScheme,
    pub c_nominal: f64,
    pub m: Option<usize>,
}

impl WeightVector {
    /// Wrap arbitrary weights; no scheme invariant is checked.
    pub fn from_raw(w: Vec<f64>, scheme: WeightScheme, c_nominal: f64) -> Self {
        Self { w, scheme, c_nominal, m: None }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.w.iter().sum()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.w
    }
}

/// Counts of `n` uniform draws over `n` cells, i.e. `Multi(n; 1/n, ..., 1/n)`.
pub fn multinomial_weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<WeightVector> {
    if n < 2 {
        return Err(Error::TooFewObservations(n));
    }
    let mut w = vec![0.0; n];
    for _ in 0..n {
        w[rng.random_range(0..n)] += 1.0;
    }
    Ok(WeightVector { w, scheme: WeightScheme::Multinomial, c_nominal: 1.0, m: None })
}

/// Uniform random permutation of `m` entries `n/m` and `n - m` zeros.
pub fn subsample_weights<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<WeightVector> {
    if n < 2 {
        return Err(Error::TooFewObservations(n));
    }
    if m == 0 || m >= n {
        return Err(Error::SubsampleSize { m, max: n - 1 });
    }
    let value = n as f64 / m as f64;
    let mut w = vec![0.0; n];
    for i in rand::seq::index::sample(rng, n, m) {
        w[i] = value;
    }
    Ok(WeightVector {
        w,
        scheme: WeightScheme::Subsample,
        c_nominal: libm::sqrt(value - 1.0),
        m: Some(m),
    })
}

/// `m = round(n / (c^2 + 1))`, clamped to `1..=n-1`.
pub fn subsample_size_for_c(n: usize, c: f64) -> usize {
    let m = libm::round(n as f64 / (c * c + 1.0));
    (m.max(1.0) as usize).min(n.saturating_sub(1).max(1))
}

/// `n^{-1} sum_i (W_i - 1)^2`.
pub fn w2_statistic(w: &WeightVector) -> f64 {
    let n = w.len() as f64;
    w.w.iter().map(|&x| (x - 1.0) * (x - 1.0)).sum::<f64>() / n
}

/// `n^{-1} sum_i W_i^2 1{W_i >= k}`.
pub fn w3_statistic(w: &WeightVector, k: f64) -> f64 {
    let n = w.len() as f64;
    w.w.iter().filter(|&&x| x >= k).fold(0.0, |s, &x| s + x * x) / n
}
