//! `sim-joint`: joint normal limit of the OLS fit and the weighted
//! candidates on a fixed design.

use anyhow::{bail, Result};
use lcsearch_core::linalg::psd_sqrt;
use lcsearch_core::model::{ols_fit, wls_fit};
use lcsearch_core::rng::substream;
use lcsearch_core::{DMatrix, DVector};
use serde_json::json;

use super::{par_reps, DESIGN_KEY};
use crate::config::SimConfig;
use crate::generate::{sandwich_sigma, simulate_problem, theta_true, uniform_design};
use crate::report::{Check, Outcome, Table};
use crate::stats::{covariance, cross_covariance, matrix_rows, relative_frobenius};

/// 95% level of the plotted ellipses: `sqrt(chi^2_2 quantile) = sqrt(-2 ln 0.05)`.
fn ellipse_radius() -> f64 {
    (-2.0 * 0.05f64.ln()).sqrt()
}

struct Draw {
    ols: DVector<f64>,
    diff: DVector<f64>,
    first: DVector<f64>,
    second: DVector<f64>,
}

pub fn run(cfg: &SimConfig) -> Result<Outcome> {
    let (n, q, reps) = (cfg.n, cfg.q, cfg.reps);
    if reps < 2 {
        bail!("sim-joint needs --reps >= 2");
    }
    let scheme = cfg.weight_scheme().resolve(n, cfg.c)?;
    let c = scheme.c_nominal();
    let x = uniform_design(n, q, &mut substream(cfg.seed, &[DESIGN_KEY]));
    let theta = theta_true(q);
    let sigma = sandwich_sigma(&x, cfg.error_model);
    let root_n = (n as f64).sqrt();

    let draws: Vec<Draw> = par_reps(reps, |rep| {
        let problem = simulate_problem(&x, &theta, cfg.error_model, &mut substream(cfg.seed, &[rep, 0]));
        let ols = ols_fit(&problem).theta;
        let fit = |b: u64| {
            let w = scheme.draw(&mut substream(cfg.seed, &[rep, b])).expect("resolved scheme");
            wls_fit(&problem, &w).expect("nondegenerate weights").theta
        };
        let (t1, t2) = (fit(1), fit(2));
        Draw {
            diff: (&t1 - &ols) * root_n,
            first: (&t1 - &theta) * root_n,
            second: (&t2 - &theta) * root_n,
            ols: (ols - &theta) * root_n,
        }
    });
    let col = |f: fn(&Draw) -> &DVector<f64>| draws.iter().map(f).cloned().collect::<Vec<_>>();
    let (ols, diff, first, second) = (col(|d| &d.ols), col(|d| &d.diff), col(|d| &d.first), col(|d| &d.second));

    let cov_ols = covariance(&ols);
    let cov_diff = covariance(&diff);
    let cross = cross_covariance(&first, &second);
    let cov_first = covariance(&first);
    let c2_sigma = &sigma * (c * c);
    let err_ols = relative_frobenius(&cov_ols, &sigma);
    let err_diff = relative_frobenius(&cov_diff, &c2_sigma);
    let err_cross = relative_frobenius(&cross, &sigma);
    let threshold = cfg.threshold.unwrap_or(0.10);

    let mut outcome = Outcome::new(json!({
        "c": c,
        "sigma": matrix_rows(&sigma),
        "cov_ols": matrix_rows(&cov_ols),
        "cov_candidate_minus_ols": matrix_rows(&cov_diff),
        "cross_cov_candidates": matrix_rows(&cross),
        "cov_candidate": matrix_rows(&cov_first),
        "rel_frobenius_ols": err_ols,
        "rel_frobenius_candidate_minus_ols": err_diff,
        "rel_frobenius_cross": err_cross,
        "theta_true": theta.as_slice(),
        "ellipse_level": 0.95,
        "ellipse_radius": ellipse_radius(),
    }));
    outcome.checks.push(Check::le("rel_frobenius_ols", err_ols, threshold));
    outcome.checks.push(Check::le("rel_frobenius_candidate_minus_ols", err_diff, threshold));
    outcome.checks.push(Check::le("rel_frobenius_cross", err_cross, threshold));
    outcome.asserted = reps >= 500 && n >= 500;
    if q >= 2 {
        let sets = [
            ("ols_limit", sigma.clone()),
            ("candidate_limit", &sigma * (1.0 + c * c)),
            ("ols_empirical", cov_ols),
            ("candidate_empirical", cov_first),
        ];
        outcome.tables.push(ellipses(&sets, &theta, n));
    }
    Ok(outcome)
}

/// Ellipses `theta + n^{-1/2} C^{1/2} r (cos t, sin t)` in the first two
/// coordinates, one per covariance `C`.
fn ellipses(sets: &[(&str, DMatrix<f64>)], theta: &DVector<f64>, n: usize) -> Table {
    let mut table = Table::new("ellipses", &["set", "k", "theta_1", "theta_2"]);
    let r = ellipse_radius() / (n as f64).sqrt();
    let points = 181;
    for (name, cov) in sets {
        let root = psd_sqrt(&cov.view((0, 0), (2, 2)).into_owned());
        for k in 0..points {
            let t = 2.0 * std::f64::consts::PI * k as f64 / (points - 1) as f64;
            let u = DVector::from_row_slice(&[r * t.cos(), r * t.sin()]);
            let p = &root * u;
            table.push(vec![
                name.to_string(),
                k.to_string(),
                (theta[0] + p[0]).to_string(),
                (theta[1] + p[1]).to_string(),
            ]);
        }
    }
    table
}
