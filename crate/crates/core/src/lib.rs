//! Stochastic-search estimation for linear regression models whose errors
//! have a log-concave density.
//!
//! The estimator works in two stages. A finite candidate set is generated
//! from the ordinary least squares fit plus `B` randomly weighted least
//! squares fits (exchangeably weighted bootstrap). Every candidate is then
//! scored with the log-concave profile log-likelihood, and the best one is
//! returned together with the fitted error density.
//!
//! Alongside the estimator the crate carries the constants and limit laws
//! that describe how close the candidate set gets to the true parameter
//! (`limits`), and the special functions they need (`special`).
//!
//! The crate is `no_std` and only needs an allocator.

#![no_std]

extern crate alloc;

pub mod error;
pub mod limits;
pub mod linalg;
pub mod logconcave;
pub mod model;
pub mod rng;
pub mod search;
pub mod special;
pub mod weights;

pub use error::{Error, Result};
pub use logconcave::{fit_logconcave, profile_loglik, recenter_to_mean_zero, LogConcaveFit};
pub use model::{gram_matrix, ols_fit, residuals, wls_fit, Estimate, RegressionProblem};
pub use search::{build_candidates, build_candidates_keyed, choose_c, stochastic_search_fit, CandidateSet, SearchResult};
pub use weights::{WeightScheme, WeightVector};

pub use nalgebra::{DMatrix, DVector};

/// Default convergence tolerance of the log-concave solver.
pub const DEFAULT_TOL: f64 = 1e-7;
