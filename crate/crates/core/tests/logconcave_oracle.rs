//! Independent checks of the log-concave MLE: a derivative-free brute-force
//! maximizer on small samples, random concave competitors, and the
//! equivariance identities.

use lcsearch_core::logconcave::fit_logconcave;
use lcsearch_core::rng::substream;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// `int exp(psi)` for `psi` linear between `(t[j], v[j])`, summed by the
/// textbook formula `(e^b - e^a) / slope` (with the flat case by hand).
fn integral(t: &[f64], v: &[f64]) -> f64 {
    let mut total = 0.0;
    for j in 0..t.len() - 1 {
        let (a, b) = (v[j], v[j + 1]);
        let d = t[j + 1] - t[j];
        total += if (b - a).abs() < 1e-9 {
            d * (a.exp() + b.exp()) / 2.0
        } else {
            d * (b.exp() - a.exp()) / (b - a)
        };
    }
    total
}

/// Log-likelihood of the normalized version of `psi` given at the distinct
/// sorted points `t` with counts `w`.
fn normalized_loglik(t: &[f64], w: &[f64], psi: &[f64]) -> f64 {
    let log_norm = integral(t, psi).ln();
    w.iter().zip(psi).map(|(wi, p)| wi * (p - log_norm)).sum()
}

/// Concave `psi` on the points `t` from unconstrained parameters: level,
/// initial slope, and squared slope decrements.
fn concave_from_params(t: &[f64], p: &[f64]) -> Vec<f64> {
    let mut out = vec![p[0]];
    let mut slope = p[1];
    for j in 1..t.len() {
        if j >= 2 {
            slope -= p[j] * p[j];
        }
        out.push(out[j - 1] + slope * (t[j] - t[j - 1]));
    }
    out
}

fn nelder_mead(f: impl Fn(&[f64]) -> f64, start: Vec<f64>, iters: usize) -> (Vec<f64>, f64) {
    let dim = start.len();
    let mut simplex: Vec<Vec<f64>> = vec![start.clone()];
    for i in 0..dim {
        let mut p = start.clone();
        p[i] += 0.5;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
    for _ in 0..iters {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        let centroid: Vec<f64> =
            (0..dim).map(|k| simplex[..dim].iter().map(|p| p[k]).sum::<f64>() / dim as f64).collect();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[dim]).map(|(c, w)| c + t * (w - c)).collect()
        };
        let refl = along(-1.0);
        let fr = f(&refl);
        if fr < values[0] {
            let exp = along(-2.0);
            let fe = f(&exp);
            if fe < fr {
                simplex[dim] = exp;
                values[dim] = fe;
            } else {
                simplex[dim] = refl;
                values[dim] = fr;
            }
        } else if fr < values[dim - 1] {
            simplex[dim] = refl;
            values[dim] = fr;
        } else {
            let con = along(0.5);
            let fc = f(&con);
            if fc < values[dim] {
                simplex[dim] = con;
                values[dim] = fc;
            } else {
                for i in 1..=dim {
                    simplex[i] = simplex[0].iter().zip(&simplex[i]).map(|(a, b)| a + 0.5 * (b - a)).collect();
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let best = (0..=dim).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    (simplex[best].clone(), values[best])
}

/// Brute-force MLE value via restarted Nelder-Mead over all concave
/// piecewise-linear functions with knots at the data.
fn brute_force_loglik(sample: &[f64]) -> f64 {
    let mut t = sample.to_vec();
    t.sort_by(f64::total_cmp);
    let w = vec![1.0; t.len()];
    let objective = |p: &[f64]| -normalized_loglik(&t, &w, &concave_from_params(&t, p));
    let mut start = vec![0.0; t.len()];
    start[0] = -1.0;
    let mut best = f64::INFINITY;
    for _ in 0..30 {
        let (p, v) = nelder_mead(&objective, start, 4000);
        best = v;
        start = p;
    }
    -best
}

#[test]
fn matches_brute_force_on_small_samples() {
    let samples: [&[f64]; 5] = [
        &[0.0, 0.4, 1.0],
        &[-1.0, 0.1, 0.3, 2.0],
        &[0.0, 0.05, 0.1, 0.9, 1.0],
        &[3.0, -2.0, 0.5, 0.7, 0.8],
        &[0.0, 1.0, 1.1, 1.2, 5.0],
    ];
    for s in samples {
        let ours = fit_logconcave(s, 1e-7).unwrap().loglik;
        let brute = brute_force_loglik(s);
        assert!(ours >= brute - 1e-9, "{s:?}: ours {ours} < brute {brute}");
        assert!(ours - brute < 1e-5, "{s:?}: ours {ours} vs brute {brute}");
    }
}

fn normal_sample(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = substream(seed, &[]);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

#[test]
fn normal_sample_fit_properties() {
    let r = normal_sample(500, 42);
    let fit = fit_logconcave(&r, 1e-7).unwrap();
    assert!((fit.integral - 1.0).abs() < 1e-6, "integral {}", fit.integral);
    let slopes = fit.slopes();
    assert!(slopes.windows(2).all(|s| s[1] <= s[0] + 1e-9));

    let n = r.len() as f64;
    let mean = r.iter().sum::<f64>() / n;
    let var = r.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let normal_ll: f64 = r
        .iter()
        .map(|x| -0.5 * (2.0 * std::f64::consts::PI * var).ln() - (x - mean).powi(2) / (2.0 * var))
        .sum();
    assert!(fit.loglik >= normal_ll, "{} < {}", fit.loglik, normal_ll);

    // The log-concave MLE reproduces the sample mean.
    assert!((fit.mean - mean).abs() < 1e-6);
    // Recorded loglik equals the sum of the evaluated log-density.
    let direct: f64 = r.iter().map(|&x| fit.log_density(x)).sum();
    assert!((direct - fit.loglik).abs() < 1e-8);
    // The cdf at the right end equals the segment total.
    let last = *fit.knots.last().unwrap();
    let seg: f64 = fit.segment_integrals().iter().sum();
    assert!((fit.evaluate(last).cdf - seg).abs() < 1e-12);
    assert!((seg - fit.integral).abs() < 1e-12);
}

#[test]
fn skewed_sample_fit_properties() {
    let mut rng = substream(9, &[]);
    let r: Vec<f64> = (0..300).map(|_| -rng.random::<f64>().ln() - 1.0).collect();
    let fit = fit_logconcave(&r, 1e-7).unwrap();
    assert!((fit.integral - 1.0).abs() < 1e-6);
    assert!(fit.slopes().windows(2).all(|s| s[1] <= s[0] + 1e-9));
    // Exp(1) - 1 has log-density -(x + 1); the MLE beats it on its own data.
    let truth: f64 = r.iter().map(|x| -(x + 1.0)).sum();
    assert!(fit.loglik >= truth);
}

#[test]
fn translation_and_scale_equivariance() {
    let r = normal_sample(500, 7);
    let base = fit_logconcave(&r, 1e-7).unwrap();
    for &shift in &[-3.5, 0.25, 100.0] {
        let moved: Vec<f64> = r.iter().map(|x| x + shift).collect();
        let fit = fit_logconcave(&moved, 1e-7).unwrap();
        assert!((fit.loglik - base.loglik).abs() < 1e-6);
        assert_eq!(fit.knots.len(), base.knots.len());
        for (a, b) in fit.knots.iter().zip(&base.knots) {
            assert!((a - b - shift).abs() < 1e-6);
        }
        for (a, b) in fit.slopes().iter().zip(base.slopes()) {
            assert!((a - b).abs() < 1e-6 * b.abs().max(1.0));
        }
    }
    for &s in &[0.01, 2.0, 37.0] {
        let scaled: Vec<f64> = r.iter().map(|x| x * s).collect();
        let fit = fit_logconcave(&scaled, 1e-7).unwrap();
        let expected = base.loglik - r.len() as f64 * s.ln();
        assert!((fit.loglik - expected).abs() < 1e-6, "s={s}: {} vs {expected}", fit.loglik);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// No normalized concave competitor built on the data range beats the fit.
    #[test]
    fn fit_dominates_concave_competitors(
        seed in any::<u64>(),
        n in 5usize..80,
        lines in proptest::collection::vec((-4.0f64..4.0, -3.0f64..3.0), 1..5),
        eps in -0.5f64..0.5,
        bend_at in 0.0f64..1.0,
    ) {
        let mut rng = substream(seed, &[]);
        let mut r: Vec<f64> = (0..n).map(|_| { let z: f64 = StandardNormal.sample(&mut rng); z.exp().min(50.0) }).collect();
        r.sort_by(f64::total_cmp);
        r.dedup();
        prop_assume!(r.len() >= 2);
        let w = vec![1.0; r.len()];
        let fit = fit_logconcave(&r, 1e-7).unwrap();

        // minimum of random lines: concave
        let psi: Vec<f64> = r.iter().map(|&x| lines.iter().map(|(a, b)| a + b * x).fold(f64::INFINITY, f64::min)).collect();
        prop_assert!(normalized_loglik(&r, &w, &psi) <= fit.loglik + 1e-6);

        // the fit plus a concave bend, renormalized
        let t0 = r[0] + bend_at * (r[r.len() - 1] - r[0]);
        let perturbed: Vec<f64> = r.iter().map(|&x| fit.log_density(x) - eps.abs() * (x - t0).max(0.0) + eps * x).collect();
        prop_assert!(normalized_loglik(&r, &w, &perturbed) <= fit.loglik + 1e-6);
    }

    #[test]
    fn fit_invariants_hold(seed in any::<u64>(), n in 2usize..120, ties in 0usize..3) {
        let mut rng = substream(seed, &[]);
        let mut r: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        for k in 0..ties.min(n - 1) {
            r[k + 1] = r[0];
        }
        let distinct = { let mut s = r.clone(); s.sort_by(f64::total_cmp); s.dedup(); s.len() };
        prop_assume!(distinct >= 2);
        let fit = fit_logconcave(&r, 1e-7).unwrap();
        prop_assert!((fit.integral - 1.0).abs() <= 10.0 * fit.tol);
        prop_assert!(fit.slopes().windows(2).all(|s| s[1] <= s[0] + 1e-9));
        let lo = r.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(fit.knots[0], lo);
        prop_assert_eq!(*fit.knots.last().unwrap(), hi);
        prop_assert_eq!(fit.evaluate(lo - 1.0).density, 0.0);
        prop_assert_eq!(fit.evaluate(hi + 1.0).density, 0.0);
    }
}
