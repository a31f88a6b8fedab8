//! `sim-weibull`: scaled nearest-point distance against `Weibull(q)`.

use std::f64::consts::PI;

use anyhow::{bail, Result};
use lcsearch_core::limits::{alpha_q, scaled_min_statistic, weibull_cdf};
use lcsearch_core::rng::substream;
use lcsearch_core::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use serde_json::json;

use super::par_reps;
use crate::config::SimConfig;
use crate::ks::ks_one_sample;
use crate::report::{Check, Outcome, Table};
use crate::stats::{mean, median};

/// `B` standard-normal points in `R^q`, target `z = 0`.
pub fn run(cfg: &SimConfig) -> Result<Outcome> {
    let (q, b, reps) = (cfg.q, cfg.b, cfg.reps);
    if b == 0 || reps == 0 {
        bail!("sim-weibull needs --B >= 1 and --reps >= 1");
    }
    let f_z = (2.0 * PI).powf(-(q as f64) / 2.0);
    let z = DVector::zeros(q);
    let draws = par_reps(reps, |rep| {
        let mut rng = substream(cfg.seed, &[rep]);
        let points = DMatrix::from_fn(b, q, |_, _| StandardNormal.sample(&mut rng));
        scaled_min_statistic(&points, &z, f_z, q).expect("valid statistic")
    });
    let cdf = |x: f64| weibull_cdf(x, q).expect("x >= 0");
    let ks = ks_one_sample(&draws, cdf);
    let threshold = cfg.threshold.unwrap_or(0.05);

    let mut sorted = draws.clone();
    sorted.sort_by(f64::total_cmp);
    let mut table = Table::new("ecdf", &["statistic", "ecdf", "weibull_cdf"]);
    for (i, &x) in sorted.iter().enumerate() {
        table.push_numbers(&[x, (i + 1) as f64 / reps as f64, cdf(x)]);
    }

    let mut outcome = Outcome::new(json!({
        "ks_distance": ks,
        "alpha_q": alpha_q(q),
        "f_z": f_z,
        "draws": reps,
        "mean_statistic": mean(&draws),
        "median_statistic": median(&draws),
        "weibull_median": std::f64::consts::LN_2.powf(1.0 / q as f64),
    }));
    outcome.checks.push(Check::le("ks_distance", ks, threshold));
    outcome.asserted = b >= 1000 && reps >= 100;
    outcome.tables.push(table);
    Ok(outcome)
}
