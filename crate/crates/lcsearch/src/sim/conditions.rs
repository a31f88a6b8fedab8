//! `check-conditions`: plug-in regularity statistics for a dataset or the
//! default generator, plus a Monte Carlo check of the permutation-sum
//! moment bound.

use anyhow::{bail, Result};
use lcsearch_core::limits::{d_condition_stats, permutation_bound, ConditionReport, PermutationBound, MomentSummary};
use lcsearch_core::model::{ols_fit, residuals};
use lcsearch_core::rng::substream;
use lcsearch_core::{RegressionProblem, WeightScheme};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use super::{par_reps, DESIGN_KEY};
use crate::config::SimConfig;
use crate::data::load_problem;
use crate::export::ConditionExport;
use crate::generate::{theta_true, uniform_design, uniform_design_gram};
use crate::report::{Check, Outcome, Table};

pub const DELTAS: [f64; 3] = [0.001, 0.01, 0.1];
pub const KS: [f64; 5] = [1.0, 2.0, 3.0, 5.0, 10.0];

fn report_for(
    problem: &RegressionProblem,
    errors: &[f64],
    scheme: WeightScheme,
    c: f64,
    seed: u64,
    key: u64,
    gamma: Option<&lcsearch_core::DMatrix<f64>>,
) -> Result<ConditionReport> {
    let w = scheme.resolve(problem.n(), c)?.draw(&mut substream(seed, &[key, 1]))?;
    Ok(d_condition_stats(problem, errors, &DELTAS, &KS, Some(&w), gamma)?)
}

pub fn run(cfg: &mut SimConfig) -> Result<Outcome> {
    let scheme = cfg.weight_scheme();
    let mut checks = Vec::new();
    let mut tables = Vec::new();
    let mut results = serde_json::Map::new();

    let reports: Vec<ConditionReport> = if let Some(input) = cfg.input.clone() {
        let response = cfg.response.get_or_insert_with(|| "y".to_string()).clone();
        let problem = load_problem(&input, &response, cfg.add_intercept)?;
        cfg.n = problem.n();
        cfg.q = problem.q();
        let r = residuals(&problem, &ols_fit(&problem).theta)?;
        results.insert("errors".into(), json!("ols_residuals"));
        vec![report_for(&problem, r.as_slice(), scheme, cfg.c, cfg.seed, 0, None)?]
    } else {
        let mut sizes = cfg.n_grid.clone();
        sizes.sort_unstable();
        sizes.dedup();
        if sizes.is_empty() || sizes[0] < 2 || cfg.q == 0 {
            bail!("check-conditions needs --n-grid sizes >= 2 and --q >= 1");
        }
        let q = cfg.q;
        let theta = theta_true(q);
        let gamma = uniform_design_gram(q);
        results.insert("errors".into(), json!("true_errors"));
        let mut out = Vec::new();
        for &n in &sizes {
            let mut rng = substream(cfg.seed, &[DESIGN_KEY, n as u64]);
            let x = uniform_design(n, q, &mut rng);
            let mut row = vec![0.0; q];
            let errors: Vec<f64> = (0..n)
                .map(|i| {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = x[(i, j)];
                    }
                    cfg.error_model.sample(&row, &mut rng)
                })
                .collect();
            let y = &x * &theta + lcsearch_core::DVector::from_row_slice(&errors);
            let problem = RegressionProblem::new(x, y, Some(q - 1))?;
            out.push(report_for(&problem, &errors, scheme, cfg.c, cfg.seed, n as u64, Some(&gamma))?);
        }
        if out.len() >= 2 {
            let (first, last) = (&out[0], &out[out.len() - 1]);
            checks.push(Check::lt("d3_stat_largest_n_below_smallest_n", last.d3_stat, first.d3_stat));
        }
        out
    };

    let mut table = Table::new("conditions", &["n", "d1_gap", "l_sum", "d3_stat", "w2"]);
    for r in &reports {
        table.push_numbers(&[r.n as f64, r.d1_gap.unwrap_or(f64::NAN), r.l_sum, r.d3_stat, r.w2.unwrap_or(f64::NAN)]);
    }
    tables.push(table);
    let exports: Vec<ConditionExport> = reports.iter().map(ConditionExport::from).collect();
    results.insert("reports".into(), json!(exports));

    let configs = cfg.bound_configs.unwrap_or(0);
    if configs > 0 {
        let perms = cfg.permutations.unwrap_or(5000);
        if perms < 2 {
            bail!("--permutations must be at least 2");
        }
        let trials = permutation_bound_monte_carlo(cfg.seed, configs, perms)?;
        let mut t = Table::new("permutation_bound", &["config", "n", "K", "mc_mean", "mc_se", "bound"]);
        for (i, tr) in trials.iter().enumerate() {
            t.push_numbers(&[i as f64, tr.n as f64, tr.k, tr.mc_mean, tr.mc_se, tr.bound.bound]);
            checks.push(Check::le(format!("permutation_bound_config_{i}"), tr.mc_mean, tr.bound.bound));
        }
        tables.push(t);
        results.insert("permutation_bound".into(), json!(trials));
    }

    let asserted = !checks.is_empty() && (configs == 0 || cfg.permutations.unwrap_or(0) >= 1000);
    let mut outcome = Outcome::new(serde_json::Value::Object(results));
    outcome.checks = checks;
    outcome.asserted = asserted;
    outcome.tables = tables;
    Ok(outcome)
}

/// Two-point random vector: `a` with probability `p`, else `b`.
#[derive(Debug, Clone, Serialize)]
struct TwoPoint {
    a: [f64; 2],
    b: [f64; 2],
    p: f64,
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

impl TwoPoint {
    fn moments(&self) -> MomentSummary {
        let (na, nb) = (norm(self.a), norm(self.b));
        MomentSummary {
            mean_norm: self.p * na + (1.0 - self.p) * nb,
            mean_norm_min1: self.p * na * na.min(1.0) + (1.0 - self.p) * nb * nb.min(1.0),
        }
    }

    fn mean(&self) -> [f64; 2] {
        [self.p * self.a[0] + (1.0 - self.p) * self.b[0], self.p * self.a[1] + (1.0 - self.p) * self.b[1]]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PermutationTrial {
    pub n: usize,
    pub k: f64,
    pub v: Vec<f64>,
    pub mc_mean: f64,
    pub mc_se: f64,
    #[serde(serialize_with = "ser_bound")]
    pub bound: PermutationBound,
}

fn ser_bound<S: serde::Serializer>(b: &PermutationBound, s: S) -> std::result::Result<S::Ok, S::Error> {
    json!({ "r_k": b.r_k, "s": b.s, "l": b.l, "v_bar": b.v_bar, "bound": b.bound }).serialize(s)
}

/// Random configurations `(v, M_1..M_n, K)` and a Monte Carlo estimate of
/// `E || sum_i V_i M_i - v_bar sum_i E M_i ||` with `V` a uniform
/// permutation of `v` independent of the `M_i`.
pub fn permutation_bound_monte_carlo(seed: u64, configs: usize, perms: usize) -> Result<Vec<PermutationTrial>> {
    let trials = par_reps(configs, |i| {
        let mut rng = substream(seed, &[DESIGN_KEY - 1, i]);
        let n = rng.random_range(5..=40);
        let scale = rng.random_range(0.5..3.0);
        let mut v: Vec<f64> = (0..n)
            .map(|_| if rng.random::<f64>() < 0.3 { 0.0 } else { scale * -(1.0 - rng.random::<f64>()).ln() })
            .collect();
        if v.iter().all(|&x| x == 0.0) {
            v[0] = scale;
        }
        let v_max = v.iter().copied().fold(0.0, f64::max);
        let k = rng.random_range(0.0..=v_max);
        let ms: Vec<TwoPoint> = (0..n)
            .map(|_| {
                let mut pt = || [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
                let (a, b) = (pt(), pt());
                TwoPoint { a, b, p: rng.random_range(0.05..0.95) }
            })
            .collect();
        let moments: Vec<MomentSummary> = ms.iter().map(TwoPoint::moments).collect();
        let bound = permutation_bound(&v, &moments, k)?;
        let centre = ms.iter().fold([0.0, 0.0], |acc, m| {
            let e = m.mean();
            [acc[0] + bound.v_bar * e[0], acc[1] + bound.v_bar * e[1]]
        });

        let mut perm = v.clone();
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..perms {
            perm.shuffle(&mut rng);
            let mut acc = [-centre[0], -centre[1]];
            for (vi, m) in perm.iter().zip(&ms) {
                let x = if rng.random::<f64>() < m.p { m.a } else { m.b };
                acc[0] += vi * x[0];
                acc[1] += vi * x[1];
            }
            let d = norm(acc);
            sum += d;
            sum_sq += d * d;
        }
        let mean = sum / perms as f64;
        let var = (sum_sq / perms as f64 - mean * mean).max(0.0) * perms as f64 / (perms - 1) as f64;
        Ok(PermutationTrial { n, k, v, mc_mean: mean, mc_se: (var / perms as f64).sqrt(), bound })
    });
    trials.into_iter().collect()
}
