//! Run configuration shared by every subcommand.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::ValueEnum;
use lcsearch_core::WeightScheme;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Fit,
    SimWeibull,
    SimCorollary,
    SimJoint,
    SimMindist,
    SimBootstrap,
    SimConsistency,
    CheckConditions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Multinomial,
    Subsample,
}

impl From<Scheme> for WeightScheme {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::Multinomial => WeightScheme::Multinomial,
            Scheme::Subsample => WeightScheme::Subsample,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorModel {
    #[value(name = "normal")]
    Normal,
    #[value(name = "centered_exponential")]
    CenteredExponential,
    #[value(name = "centered_gumbel")]
    CenteredGumbel,
    #[value(name = "heteroscedastic_normal")]
    HeteroscedasticNormal,
}

/// Command-line flags; every one is optional and falls back to an
/// experiment-specific default.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Args {
    /// Sample size.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Parameter dimension, intercept included.
    #[arg(long, global = true)]
    pub q: Option<usize>,
    /// Number of weighted candidates (or of points for the limit laws).
    #[arg(long = "B", global = true)]
    pub b: Option<usize>,
    /// Monte Carlo replicates.
    #[arg(long, global = true)]
    pub reps: Option<usize>,
    /// Tuning constant of the weight scheme.
    #[arg(long, global = true)]
    pub c: Option<f64>,
    #[arg(long, value_enum, global = true)]
    pub scheme: Option<Scheme>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, global = true)]
    pub error_model: Option<ErrorModel>,
    /// Log-concave solver tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// CSV dataset with a header row.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Name of the response column.
    #[arg(long, global = true)]
    pub response: Option<String>,
    /// Append an all-ones column to the covariates.
    #[arg(long, global = true)]
    pub add_intercept: bool,
    /// JSON report path; auxiliary tables go to `<output>.<table>.csv`.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Sample sizes compared by sim-consistency, sim-bootstrap and check-conditions.
    #[arg(long, value_delimiter = ',', global = true)]
    pub n_grid: Option<Vec<usize>>,
    /// Candidate counts for sim-mindist.
    #[arg(long = "B-grid", value_delimiter = ',', global = true)]
    pub b_grid: Option<Vec<usize>>,
    /// Tuning constants for the sim-corollary tuning analysis.
    #[arg(long, value_delimiter = ',', global = true)]
    pub c_grid: Option<Vec<f64>>,
    /// Weight draws per dataset in sim-bootstrap.
    #[arg(long, global = true)]
    pub inner: Option<usize>,
    /// Acceptance threshold overriding the experiment default.
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    /// Random configurations for the permutation-sum bound in check-conditions.
    #[arg(long, global = true)]
    pub bound_configs: Option<usize>,
    /// Permutations per configuration for that bound.
    #[arg(long, global = true)]
    pub permutations: Option<usize>,
    /// Write every weight draw of `fit` to `<output>.weights.csv`.
    #[arg(long, global = true)]
    pub dump_weights: bool,
    /// In sim-consistency, also require the search estimator to beat OLS.
    #[arg(long, global = true)]
    pub compare_ols: bool,
}

/// Fully resolved configuration, embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct SimConfig {
    pub experiment: Experiment,
    pub n: usize,
    pub q: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub reps: usize,
    pub c: f64,
    pub scheme: Scheme,
    pub seed: u64,
    pub error_model: ErrorModel,
    pub tol: f64,
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub response: Option<String>,
    pub add_intercept: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub n_grid: Vec<usize>,
    #[serde(rename = "B_grid", skip_serializing_if = "Vec::is_empty")]
    pub b_grid: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub c_grid: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_configs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutations: Option<usize>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub dump_weights: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub compare_ols: bool,
}

struct Defaults {
    n: usize,
    q: usize,
    b: usize,
    reps: usize,
    error_model: ErrorModel,
    threshold: Option<f64>,
}

fn defaults(e: Experiment) -> Defaults {
    use ErrorModel::*;
    let d = |n, q, b, reps, error_model, threshold| Defaults { n, q, b, reps, error_model, threshold };
    match e {
        Experiment::Fit => d(0, 0, 200, 1, Normal, None),
        Experiment::SimWeibull => d(0, 2, 20_000, 500, Normal, Some(0.05)),
        Experiment::SimCorollary => d(0, 2, 20_000, 2000, Normal, Some(0.06)),
        Experiment::SimJoint => d(2000, 2, 2, 2000, HeteroscedasticNormal, Some(0.10)),
        Experiment::SimMindist => d(1000, 2, 1000, 200, Normal, Some(0.25)),
        Experiment::SimBootstrap => d(2000, 2, 0, 200, HeteroscedasticNormal, Some(0.15)),
        Experiment::SimConsistency => d(800, 2, 100, 100, Normal, None),
        Experiment::CheckConditions => d(10_000, 3, 0, 1, Normal, None),
    }
}

impl SimConfig {
    pub fn resolve(experiment: Experiment, args: &Args) -> Result<Self> {
        let d = defaults(experiment);
        let tol = args.tol.unwrap_or(lcsearch_core::DEFAULT_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            bail!("--tol must be positive");
        }
        let c = args.c.unwrap_or(1.0);
        if !(c > 0.0 && c.is_finite()) {
            bail!("--c must be positive");
        }
        let n_grid = match (experiment, &args.n_grid) {
            (_, Some(g)) => g.clone(),
            (Experiment::SimConsistency, None) => args.n.map_or(vec![100, 800], |n| vec![n]),
            (Experiment::SimBootstrap, None) => vec![200, args.n.unwrap_or(d.n)],
            (Experiment::CheckConditions, None) if args.input.is_none() => args.n.map_or(vec![100, 10_000], |n| vec![n]),
            _ => Vec::new(),
        };
        let b_grid = match (experiment, &args.b_grid) {
            (Experiment::SimMindist, Some(g)) => g.clone(),
            (Experiment::SimMindist, None) => vec![10, 100, 1000],
            _ => Vec::new(),
        };
        let c_grid = match experiment {
            Experiment::SimCorollary => args.c_grid.clone().unwrap_or_default(),
            _ => Vec::new(),
        };
        let inner = match experiment {
            Experiment::SimBootstrap => Some(args.inner.unwrap_or(500)),
            _ => None,
        };
        let (bound_configs, permutations) = match experiment {
            Experiment::CheckConditions => (
                Some(args.bound_configs.unwrap_or(if args.input.is_none() { 20 } else { 0 })),
                Some(args.permutations.unwrap_or(5000)),
            ),
            _ => (None, None),
        };
        let q = args.q.unwrap_or(d.q);
        if experiment != Experiment::Fit && q == 0 {
            bail!("--q must be at least 1");
        }
        let b = match experiment {
            Experiment::SimMindist => b_grid.iter().copied().max().unwrap_or(0),
            _ => args.b.unwrap_or(d.b),
        };
        Ok(SimConfig {
            experiment,
            n: args.n.unwrap_or(d.n),
            q,
            b,
            reps: args.reps.unwrap_or(d.reps),
            c,
            scheme: args.scheme.unwrap_or(Scheme::Multinomial),
            seed: args.seed.unwrap_or(1),
            error_model: args.error_model.unwrap_or(d.error_model),
            tol,
            output: args.output.clone(),
            input: args.input.clone(),
            response: args.response.clone(),
            add_intercept: args.add_intercept,
            n_grid,
            b_grid,
            c_grid,
            inner,
            threshold: args.threshold.or(d.threshold),
            bound_configs,
            permutations,
            dump_weights: args.dump_weights,
            compare_ols: args.compare_ols,
        })
    }

    pub fn weight_scheme(&self) -> WeightScheme {
        self.scheme.into()
    }
}
