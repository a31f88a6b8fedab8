//! `sim-corollary`: nearest perturbed-normal distance against its limit
//! law, and the tuning-constant analysis.

use anyhow::{bail, Result};
use lcsearch_core::limits::{approximate_factor, corollary_limit_sample, LimitLawSpec};
use lcsearch_core::rng::substream;
use lcsearch_core::search::CRule;
use lcsearch_core::{choose_c, DMatrix};
use rand_distr::{Distribution, StandardNormal};
use serde_json::json;

use super::par_reps;
use crate::config::SimConfig;
use crate::ks::ks_two_sample;
use crate::report::{Check, Outcome, Table};
use crate::stats::median;

pub fn run(cfg: &SimConfig) -> Result<Outcome> {
    if cfg.reps == 0 {
        bail!("sim-corollary needs --reps >= 1");
    }
    if cfg.c_grid.is_empty() {
        two_sample(cfg)
    } else {
        tuning(cfg)
    }
}

/// `B^{1/q} min_b ||Z_0 + c Z_b||` with `Sigma = I`.
pub fn direct_statistic(q: usize, b: usize, c: f64, seed: u64, draw: u64) -> f64 {
    let mut rng = substream(seed, &[0, draw]);
    let z0: Vec<f64> = (0..q).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut best = f64::INFINITY;
    for _ in 0..b {
        let mut d2 = 0.0;
        for z in &z0 {
            let zb: f64 = StandardNormal.sample(&mut rng);
            let v = z + c * zb;
            d2 += v * v;
        }
        best = best.min(d2);
    }
    (b as f64).powf(1.0 / q as f64) * best.sqrt()
}

fn two_sample(cfg: &SimConfig) -> Result<Outcome> {
    let (q, b, c, reps) = (cfg.q, cfg.b, cfg.c, cfg.reps);
    if b == 0 {
        bail!("sim-corollary needs --B >= 1");
    }
    let spec = LimitLawSpec::new(DMatrix::identity(q, q), c)?;
    let direct = par_reps(reps, |i| direct_statistic(q, b, c, cfg.seed, i));
    let limit = par_reps(reps, |i| corollary_limit_sample(&spec, &mut substream(cfg.seed, &[1, i])));
    let ks = ks_two_sample(&direct, &limit);
    let threshold = cfg.threshold.unwrap_or(0.06);

    let mut d = direct.clone();
    let mut l = limit.clone();
    d.sort_by(f64::total_cmp);
    l.sort_by(f64::total_cmp);
    let mut table = Table::new("quantiles", &["p", "direct", "limit"]);
    for (i, (x, y)) in d.iter().zip(&l).enumerate() {
        table.push_numbers(&[(i as f64 + 0.5) / reps as f64, *x, *y]);
    }

    let mut outcome = Outcome::new(json!({
        "mode": "two_sample",
        "ks_distance": ks,
        "draws_per_side": reps,
        "rank": spec.rank,
        "limit_scale": spec.scale(),
        "median_direct": median(&direct),
        "median_limit": median(&limit),
    }));
    outcome.checks.push(Check::le("ks_distance", ks, threshold));
    outcome.asserted = b >= 1000 && reps >= 500;
    outcome.tables.push(table);
    Ok(outcome)
}

/// Median of the limit variable for every `c` on the grid, all from the
/// same `(S^2, W)` draws, plus the deterministic factor `c exp(1/(2c^2))`.
fn tuning(cfg: &SimConfig) -> Result<Outcome> {
    let q = cfg.q;
    let mut medians = Vec::with_capacity(cfg.c_grid.len());
    for &c in &cfg.c_grid {
        let spec = LimitLawSpec::new(DMatrix::identity(q, q), c)?;
        let draws = par_reps(cfg.reps, |i| corollary_limit_sample(&spec, &mut substream(cfg.seed, &[2, i])));
        medians.push(median(&draws));
    }
    let best = argmin(&medians);
    let c_best = cfg.c_grid[best];

    let step = 1e-3;
    let fine: Vec<f64> = (0..=2750).map(|k| 0.25 + step * k as f64).collect();
    let factors: Vec<f64> = fine.iter().map(|&c| approximate_factor(c)).collect();
    let c_fine = fine[argmin(&factors)];

    let mut table = Table::new("c_grid", &["c", "median_limit", "approximate_factor"]);
    for (&c, &m) in cfg.c_grid.iter().zip(&medians) {
        table.push_numbers(&[c, m, approximate_factor(c)]);
    }

    let mut outcome = Outcome::new(json!({
        "mode": "tuning",
        "c_grid": cfg.c_grid,
        "median_limit": medians,
        "argmin_c": c_best,
        "fine_grid_step": step,
        "fine_grid_argmin_c": c_fine,
        "c_median_rule": choose_c(q, CRule::MedianRule)?,
    }));
    outcome.checks.push(Check::holds("argmin_c_in_0.75_to_1.5", (0.75..=1.5).contains(&c_best)));
    outcome.checks.push(Check::near("fine_grid_argmin_minus_1", c_fine, 1.0, step));
    outcome.asserted = cfg.reps >= 500 && cfg.c_grid.len() >= 2;
    outcome.tables.push(table);
    Ok(outcome)
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[best] {
            best = i;
        }
    }
    best
}
