//! `sim-consistency`: density and parameter error of the search estimator
//! across sample sizes.

use anyhow::{bail, Result};
use lcsearch_core::rng::substream;
use lcsearch_core::search::search_candidates;
use lcsearch_core::{build_candidates_keyed, LogConcaveFit};
use serde_json::json;

use super::{par_reps, DESIGN_KEY};
use crate::config::{ErrorModel, SimConfig};
use crate::generate::{simulate_problem, theta_true, uniform_design};
use crate::report::{Check, Outcome, Table};
use crate::stats::median;

/// `(1/2) int |f_hat - f|`, Simpson's rule between the breakpoints of
/// both densities.
pub fn total_variation(fit: &LogConcaveFit, model: ErrorModel) -> f64 {
    let (a, b) = model.effective_support().expect("identically distributed errors");
    let (lo, hi) = (fit.knots[0], fit.knots[fit.knots.len() - 1]);
    let mut cuts = vec![a.min(lo), a, b, lo, hi, b.max(hi)];
    cuts.extend_from_slice(&fit.knots);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let h = |y: f64| (fit.evaluate(y).density - model.density(y).expect("density")).abs();
    let per_piece = 16;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if x1 <= x0 {
            continue;
        }
        // Stay strictly inside each piece so one-sided limits are used at
        // jumps of either density.
        let eps = (x1 - x0) * 1e-12;
        let (x0, x1) = (x0 + eps, x1 - eps);
        let step = (x1 - x0) / (2 * per_piece) as f64;
        let mut s = h(x0) + h(x1);
        for k in 1..2 * per_piece {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * h(x0 + k as f64 * step);
        }
        total += s * step / 3.0;
    }
    0.5 * total
}

struct RepResult {
    tv: f64,
    theta_error: f64,
    ols_error: f64,
}

pub fn run(cfg: &SimConfig) -> Result<Outcome> {
    if cfg.error_model == ErrorModel::HeteroscedasticNormal {
        bail!("sim-consistency needs identically distributed errors; heteroscedastic_normal is not supported");
    }
    if cfg.reps == 0 {
        bail!("sim-consistency needs --reps >= 1");
    }
    let mut sizes = cfg.n_grid.clone();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.is_empty() || sizes[0] < 2 {
        bail!("sim-consistency needs an n-grid of sizes >= 2");
    }
    let q = cfg.q;
    let theta = theta_true(q);
    let scheme = cfg.weight_scheme();

    let mut med_tv = Vec::new();
    let mut med_err = Vec::new();
    let mut med_ols = Vec::new();
    for &n in &sizes {
        let x = uniform_design(n, q, &mut substream(cfg.seed, &[DESIGN_KEY, n as u64]));
        let results: Vec<Result<RepResult>> = par_reps(cfg.reps, |rep| {
            let key = [n as u64, rep];
            let problem = simulate_problem(&x, &theta, cfg.error_model, &mut substream(cfg.seed, &[n as u64, rep, 0]));
            let cands = build_candidates_keyed(&problem, scheme, cfg.c, cfg.b, cfg.seed, &key)?;
            let result = search_candidates(&problem, &cands, cfg.tol)?;
            Ok(RepResult {
                tv: total_variation(&result.fit, cfg.error_model),
                theta_error: (&result.theta_hat - &theta).norm(),
                ols_error: (&cands.candidates[0].theta - &theta).norm(),
            })
        });
        let results = results.into_iter().collect::<Result<Vec<_>>>()?;
        med_tv.push(median(&results.iter().map(|r| r.tv).collect::<Vec<_>>()));
        med_err.push(median(&results.iter().map(|r| r.theta_error).collect::<Vec<_>>()));
        med_ols.push(median(&results.iter().map(|r| r.ols_error).collect::<Vec<_>>()));
    }

    let mut table = Table::new("medians", &["n", "median_tv", "median_theta_error", "median_ols_error"]);
    for k in 0..sizes.len() {
        table.push_numbers(&[sizes[k] as f64, med_tv[k], med_err[k], med_ols[k]]);
    }
    let squared = |v: &[f64]| v.iter().map(|e| e * e).collect::<Vec<_>>();
    let last = sizes.len() - 1;
    let mut outcome = Outcome::new(json!({
        "n_grid": sizes,
        "median_tv": med_tv,
        "median_theta_error": med_err,
        "median_ols_error": med_ols,
        "median_sq_theta_error": squared(&med_err),
        "median_sq_ols_error": squared(&med_ols),
    }));
    if sizes.len() >= 2 {
        outcome.checks.push(Check::lt("median_tv_largest_n_below_smallest_n", med_tv[last], med_tv[0]));
        outcome.checks.push(Check::lt("median_theta_error_largest_n_below_smallest_n", med_err[last], med_err[0]));
    }
    if cfg.compare_ols {
        for (k, n) in sizes.iter().enumerate() {
            outcome.checks.push(Check::lt(format!("median_sq_theta_error_below_ols_n{n}"), med_err[k].powi(2), med_ols[k].powi(2)));
        }
    }
    outcome.asserted = cfg.reps >= 10 && (sizes.len() >= 2 || cfg.compare_ols);
    outcome.tables.push(table);
    Ok(outcome)
}
