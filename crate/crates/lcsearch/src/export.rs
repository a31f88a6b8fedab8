//! Serializable mirrors of the core result types.

use lcsearch_core::limits::ConditionReport;
use lcsearch_core::{Estimate, LogConcaveFit};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct FitExport {
    pub knots: Vec<f64>,
    pub phi: Vec<f64>,
    pub loglik: f64,
    pub integral: f64,
    pub mean: f64,
    pub tol: f64,
}

impl From<&LogConcaveFit> for FitExport {
    fn from(f: &LogConcaveFit) -> Self {
        FitExport {
            knots: f.knots.clone(),
            phi: f.phi.clone(),
            loglik: f.loglik,
            integral: f.integral,
            mean: f.mean,
            tol: f.tol,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateExport {
    pub theta: Vec<f64>,
    pub rank: usize,
    pub used_pseudoinverse: bool,
}

impl From<&Estimate> for EstimateExport {
    fn from(e: &Estimate) -> Self {
        EstimateExport { theta: e.theta.iter().copied().collect(), rank: e.rank, used_pseudoinverse: e.used_pseudoinverse }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Keyed {
    pub key: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionExport {
    pub n: usize,
    pub d1_gap: Option<f64>,
    pub l_sum: f64,
    pub d3_stat: f64,
    pub lindeberg_stat: Vec<Keyed>,
    pub w2: Option<f64>,
    pub w3: Vec<Keyed>,
}

fn keyed(pairs: &[(f64, f64)]) -> Vec<Keyed> {
    pairs.iter().map(|&(key, value)| Keyed { key, value }).collect()
}

impl From<&ConditionReport> for ConditionExport {
    fn from(r: &ConditionReport) -> Self {
        ConditionExport {
            n: r.n,
            d1_gap: r.d1_gap,
            l_sum: r.l_sum,
            d3_stat: r.d3_stat,
            lindeberg_stat: keyed(&r.lindeberg),
            w2: r.w2,
            w3: keyed(&r.w3),
        }
    }
}
