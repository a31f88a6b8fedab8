use lcsearch_core::linalg::{frobenius, pseudo_inverse};
use lcsearch_core::model::{ols_fit, residuals, wls_fit_raw, RegressionProblem};
use lcsearch_core::rng::substream;
use lcsearch_core::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

fn random_problem(seed: u64, n: usize, q: usize) -> RegressionProblem {
    let mut rng = substream(seed, &[]);
    let x = DMatrix::from_fn(n, q - 1, |_, _| rng.random_range(-2.0..2.0));
    let y = DVector::from_fn(n, |_, _| rng.random_range(-5.0..5.0));
    RegressionProblem::with_intercept(x, y).unwrap()
}

proptest! {
    #[test]
    fn wls_is_scale_invariant(seed in any::<u64>(), s in 0.01f64..100.0) {
        let p = random_problem(seed, 15, 3);
        let mut rng = substream(seed, &[1]);
        let w: Vec<f64> = (0..15).map(|_| rng.random_range(0.0..3.0)).collect();
        let ws: Vec<f64> = w.iter().map(|v| v * s).collect();
        let a = wls_fit_raw(&p, &w).unwrap();
        let b = wls_fit_raw(&p, &ws).unwrap();
        prop_assert!((a.theta - b.theta).norm() < 1e-8);
    }

    #[test]
    fn exact_fit_in_column_space(seed in any::<u64>()) {
        let p = random_problem(seed, 12, 4);
        let theta = DVector::from_row_slice(&[1.5, -2.0, 0.25, 3.0]);
        let y = p.x() * &theta;
        let exact = p.with_response(y).unwrap();
        let e = ols_fit(&exact);
        prop_assert!(!e.used_pseudoinverse);
        let r = residuals(&exact, &e.theta).unwrap();
        prop_assert!(r.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn pseudo_inverse_reproduces_rank_deficient_gram(seed in any::<u64>(), q in 2usize..6, rank in 1usize..5) {
        let rank = rank.min(q - 1);
        let mut rng = substream(seed, &[]);
        let factor = DMatrix::from_fn(q, rank, |_, _| rng.random_range(-1.0..1.0));
        let gram = &factor * factor.transpose();
        let (pinv, r) = pseudo_inverse(&gram);
        prop_assert_eq!(r, rank);
        let err = frobenius(&(&gram * &pinv * &gram - &gram));
        prop_assert!(err < 1e-10, "err {err}");
    }
}
