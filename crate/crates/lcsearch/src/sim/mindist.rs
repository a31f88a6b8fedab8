//! `sim-mindist`: how close the best weighted candidate gets to the truth
//! as `B` grows.

use anyhow::{bail, Result};
use lcsearch_core::rng::substream;
use lcsearch_core::search::min_distance_to;
use lcsearch_core::build_candidates_keyed;
use serde_json::json;

use super::{par_reps, DESIGN_KEY};
use crate::config::SimConfig;
use crate::generate::{simulate_problem, theta_true, uniform_design};
use crate::report::{Check, Outcome, Table};
use crate::stats::{median, slope};

pub fn run(cfg: &SimConfig) -> Result<Outcome> {
    let (n, q, reps) = (cfg.n, cfg.q, cfg.reps);
    let mut grid = cfg.b_grid.clone();
    grid.sort_unstable();
    grid.dedup();
    if reps == 0 || grid.is_empty() || grid[0] == 0 {
        bail!("sim-mindist needs --reps >= 1 and a B-grid of positive counts");
    }
    let b_max = *grid.last().expect("non-empty grid");
    let x = uniform_design(n, q, &mut substream(cfg.seed, &[DESIGN_KEY]));
    let theta = theta_true(q);
    let scheme = cfg.weight_scheme();

    // Weights for candidate b of replicate rep come from (seed, rep, b);
    // b = 0 is free, so (seed, rep, 0) drives the errors.
    let per_rep: Vec<Result<Vec<(f64, f64)>>> = par_reps(reps, |rep| {
        let problem = simulate_problem(&x, &theta, cfg.error_model, &mut substream(cfg.seed, &[rep, 0]));
        let cands = build_candidates_keyed(&problem, scheme, cfg.c, b_max, cfg.seed, &[rep])?;
        grid.iter()
            .map(|&b| {
                let d = min_distance_to(&cands.prefix(b), &theta, n)?;
                Ok((d.min_excl0.expect("B >= 1"), d.min_all))
            })
            .collect()
    });
    let per_rep: Vec<Vec<(f64, f64)>> = per_rep.into_iter().collect::<Result<_>>()?;

    let mut med_excl0 = Vec::with_capacity(grid.len());
    let mut med_all = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        med_excl0.push(median(&per_rep.iter().map(|r| r[k].0).collect::<Vec<_>>()));
        med_all.push(median(&per_rep.iter().map(|r| r[k].1).collect::<Vec<_>>()));
    }
    let log_b: Vec<f64> = grid.iter().map(|&b| (b as f64).ln()).collect();
    let log_med: Vec<f64> = med_excl0.iter().map(|m| m.ln()).collect();
    let fitted = if grid.len() >= 2 { slope(&log_b, &log_med) } else { f64::NAN };
    let target = -1.0 / q as f64;
    let decreasing = med_excl0.windows(2).all(|w| w[1] < w[0]);

    let mut table = Table::new("medians", &["B", "median_min_excl0", "median_min_all", "log_B", "log_median_min_excl0"]);
    for k in 0..grid.len() {
        table.push_numbers(&[grid[k] as f64, med_excl0[k], med_all[k], log_b[k], log_med[k]]);
    }

    let mut outcome = Outcome::new(json!({
        "B_grid": grid,
        "median_min_excl0": med_excl0,
        "median_min_all": med_all,
        "loglog_slope": fitted,
        "target_slope": target,
    }));
    outcome.checks.push(Check::holds("medians_strictly_decreasing", decreasing));
    outcome.checks.push(Check::near("slope_minus_target", fitted, target, cfg.threshold.unwrap_or(0.25)));
    outcome.asserted = reps >= 50 && grid.len() >= 2 && n >= 100;
    outcome.tables.push(table);
    Ok(outcome)
}
