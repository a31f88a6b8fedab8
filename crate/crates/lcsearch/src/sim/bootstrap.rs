//! `sim-bootstrap`: the conditional law of the weighted candidates given
//! one dataset, compared with the unconditional limit.

use anyhow::{bail, Result};
use lcsearch_core::model::{ols_fit, wls_fit};
use lcsearch_core::rng::substream;
use lcsearch_core::{DMatrix, DVector};
use serde_json::json;

use super::{par_reps, DESIGN_KEY};
use crate::config::SimConfig;
use crate::generate::{sandwich_sigma, simulate_problem, theta_true, uniform_design};
use crate::report::{Check, Outcome, Table};
use crate::stats::{covariance, matrix_rows, mean, median, relative_frobenius};

/// Bounded test functional `g(x) = exp(-||x||^2 / 2)`.
fn g(x: &DVector<f64>) -> f64 {
    (-0.5 * x.norm_squared()).exp()
}

struct RepSummary {
    rel_error: f64,
    g_mean: f64,
    g_var: f64,
}

struct SizeSummary {
    n: usize,
    median_rel_error: f64,
    var_g: f64,
    mean_g: f64,
    c: f64,
    target: DMatrix<f64>,
}

/// `Var(G_n)` for `G_n = E[g(.) | data]` without the inner Monte Carlo
/// noise: the spread of the per-dataset means minus the average
/// within-dataset variance over `inner`. Equivalent to averaging the
/// U-statistic `sum_{k != l} g_k g_l / (K (K - 1))` for `E G_n^2`.
fn variance_of_conditional_mean(reps: &[RepSummary], inner: usize) -> f64 {
    let means: Vec<f64> = reps.iter().map(|r| r.g_mean).collect();
    let m = mean(&means);
    let between = means.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (means.len() - 1) as f64;
    let within = reps.iter().map(|r| r.g_var).sum::<f64>() / reps.len() as f64;
    between - within / inner as f64
}

fn run_size(cfg: &SimConfig, n: usize, inner: usize) -> Result<SizeSummary> {
    let q = cfg.q;
    let scheme = cfg.weight_scheme().resolve(n, cfg.c)?;
    let c = scheme.c_nominal();
    let x = uniform_design(n, q, &mut substream(cfg.seed, &[DESIGN_KEY, n as u64]));
    let theta = theta_true(q);
    let target = sandwich_sigma(&x, cfg.error_model) * (c * c);
    let root_n = (n as f64).sqrt();

    let reps = par_reps(cfg.reps, |rep| {
        let problem = simulate_problem(&x, &theta, cfg.error_model, &mut substream(cfg.seed, &[n as u64, rep, 0]));
        let ols = ols_fit(&problem).theta;
        let diffs: Vec<DVector<f64>> = (1..=inner as u64)
            .map(|k| {
                let w = scheme.draw(&mut substream(cfg.seed, &[n as u64, rep, k])).expect("resolved scheme");
                (wls_fit(&problem, &w).expect("nondegenerate weights").theta - &ols) * root_n
            })
            .collect();
        let gs: Vec<f64> = diffs.iter().map(g).collect();
        let g_mean = mean(&gs);
        let g_var = gs.iter().map(|v| (v - g_mean) * (v - g_mean)).sum::<f64>() / (inner - 1) as f64;
        RepSummary { rel_error: relative_frobenius(&covariance(&diffs), &target), g_mean, g_var }
    });
    Ok(SizeSummary {
        n,
        median_rel_error: median(&reps.iter().map(|r| r.rel_error).collect::<Vec<_>>()),
        var_g: variance_of_conditional_mean(&reps, inner),
        mean_g: mean(&reps.iter().map(|r| r.g_mean).collect::<Vec<_>>()),
        c,
        target,
    })
}

pub fn run(cfg: &SimConfig) -> Result<Outcome> {
    let inner = cfg.inner.unwrap_or(500);
    if cfg.reps < 2 || inner < 2 {
        bail!("sim-bootstrap needs --reps >= 2 and --inner >= 2");
    }
    let mut sizes = cfg.n_grid.clone();
    if !sizes.contains(&cfg.n) {
        sizes.push(cfg.n);
    }
    sizes.sort_unstable();
    sizes.dedup();
    let summaries = sizes.iter().map(|&n| run_size(cfg, n, inner)).collect::<Result<Vec<_>>>()?;
    let main = summaries.iter().find(|s| s.n == cfg.n).expect("n is in the grid");
    let (small, large) = (&summaries[0], &summaries[summaries.len() - 1]);
    let threshold = cfg.threshold.unwrap_or(0.15);

    let mut table = Table::new("sizes", &["n", "median_rel_frobenius", "var_G", "mean_G"]);
    for s in &summaries {
        table.push_numbers(&[s.n as f64, s.median_rel_error, s.var_g, s.mean_g]);
    }
    let mut outcome = Outcome::new(json!({
        "n": cfg.n,
        "inner": inner,
        "c_nominal": main.c,
        "target_sigma_c2": matrix_rows(&main.target),
        "median_rel_frobenius": main.median_rel_error,
        "n_grid": sizes,
        "median_rel_frobenius_by_n": summaries.iter().map(|s| s.median_rel_error).collect::<Vec<_>>(),
        "var_G_by_n": summaries.iter().map(|s| s.var_g).collect::<Vec<_>>(),
        "mean_G_by_n": summaries.iter().map(|s| s.mean_g).collect::<Vec<_>>(),
    }));
    outcome.checks.push(Check::le("median_rel_frobenius", main.median_rel_error, threshold));
    if summaries.len() >= 2 {
        outcome.checks.push(Check::lt("var_G_largest_n_below_smallest_n", large.var_g, small.var_g));
    }
    outcome.asserted = cfg.reps >= 20 && inner >= 100 && summaries.len() >= 2;
    outcome.tables.push(table);
    Ok(outcome)
}
