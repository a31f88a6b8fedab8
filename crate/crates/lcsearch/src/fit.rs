//! `fit`: stochastic search on a CSV dataset.

use anyhow::{bail, Result};
use lcsearch_core::rng::substream;
use lcsearch_core::search::{build_candidates, search_candidates};
use serde_json::json;

use crate::config::SimConfig;
use crate::data::load_problem;
use crate::export::{EstimateExport, FitExport};
use crate::report::{Outcome, Table};
use crate::stats::median;

pub fn run(cfg: &mut SimConfig) -> Result<Outcome> {
    let Some(input) = cfg.input.clone() else { bail!("fit needs --input") };
    let response = cfg.response.get_or_insert_with(|| "y".to_string()).clone();
    let problem = load_problem(&input, &response, cfg.add_intercept)?;
    if problem.intercept_col().is_none() {
        bail!("the search needs an intercept column; add a column of ones or pass --add-intercept");
    }
    cfg.n = problem.n();
    cfg.q = problem.q();

    let scheme = cfg.weight_scheme();
    let cands = build_candidates(&problem, scheme, cfg.c, cfg.b, cfg.seed)?;
    let result = search_candidates(&problem, &cands, cfg.tol)?;

    let valid: Vec<f64> = result.profile_values.iter().copied().filter(|v| v.is_finite()).collect();
    let ols = &cands.candidates[0];
    let results = json!({
        "theta_hat": result.theta_hat.as_slice(),
        "best_index": result.best_index,
        "ols": {
            "estimate": EstimateExport::from(ols),
            "profile_loglik": finite_or_null(result.profile_values[0]),
        },
        "profile_values": {
            "count": result.profile_values.len(),
            "valid": valid.len(),
            "skipped": result.skipped,
            "min": valid.iter().copied().fold(f64::INFINITY, f64::min),
            "median": median(&valid),
            "max": result.profile_values[result.best_index],
        },
        "scheme": { "name": scheme.name(), "c_nominal": cands.c, "m": cands.m },
        "fit": FitExport::from(&result.fit),
    });

    let q = problem.q();
    let mut header: Vec<String> = vec!["b".into()];
    header.extend((1..=q).map(|j| format!("theta_{j}")));
    header.push("profile_loglik".into());
    let mut candidates = Table { name: "candidates".into(), header, rows: Vec::new() };
    for (b, (cand, value)) in cands.candidates.iter().zip(&result.profile_values).enumerate() {
        let mut row = vec![b.to_string()];
        row.extend(cand.theta.iter().map(|v| v.to_string()));
        row.push(value.to_string());
        candidates.push(row);
    }
    let mut tables = vec![candidates];

    if cfg.dump_weights {
        let resolved = scheme.resolve(problem.n(), cfg.c)?;
        let header: Vec<String> = (1..=problem.n()).map(|i| format!("w{i}")).collect();
        let mut weights = Table { name: "weights".into(), header, rows: Vec::new() };
        for b in 1..=cfg.b {
            let w = resolved.draw(&mut substream(cfg.seed, &[b as u64]))?;
            weights.push_numbers(w.as_slice());
        }
        tables.push(weights);
    }

    let mut outcome = Outcome::new(results);
    outcome.tables = tables;
    Ok(outcome)
}

fn finite_or_null(v: f64) -> serde_json::Value {
    if v.is_finite() {
        json!(v)
    } else {
        serde_json::Value::Null
    }
}
