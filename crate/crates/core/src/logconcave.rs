//! Log-concave maximum-likelihood density estimation on residuals, and the
//! profile log-likelihood of a regression coefficient.
//!
//! For distinct sorted support points `x_1 < ... < x_m` with empirical
//! weights `w_j` the estimator maximizes
//!
//! ```text
//!     sum_j w_j phi(x_j) - int exp(phi(x)) dx
//! ```
//!
//! over concave `phi` that are linear between consecutive `x_j` and
//! `-inf` outside `[x_1, x_m]`. The constant direction forces
//! `int exp(phi) = 1` at the optimum, so no explicit normalization is
//! needed.
//!
//! The solver is an active-set method. It keeps a set of knots where `phi`
//! may bend, maximizes the (smooth, strictly concave) objective over
//! functions that are linear between those knots with Newton steps, steps
//! back and drops knots whose bend turns convex, and adds the knot with the
//! largest positive directional derivative until none is left.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::model::{residuals, Estimate, RegressionProblem};

/// Piecewise-linear concave log-density `phi` with `exp(phi)` integrating
/// to one on `[knots[0], knots[k-1]]` and zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct LogConcaveFit {
    pub knots: Vec<f64>,
    pub phi: Vec<f64>,
    /// `sum_i phi(r_i)` over the fitted sample, ties counted with
    /// multiplicity.
    pub loglik: f64,
    pub integral: f64,
    pub mean: f64,
    pub tol: f64,
}

/// Value of a fitted density at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub log_density: f64,
    pub density: f64,
    pub cdf: f64,
}

/// `[int_0^1 u^k exp(u d) du]_{k=0,1,2}`.
fn unit_moments(d: f64) -> [f64; 3] {
    if d.abs() <= 2.0 {
        let mut out = [0.0; 3];
        let mut term = 1.0;
        for i in 0..64 {
            for (k, o) in out.iter_mut().enumerate() {
                *o += term / (k + i + 1) as f64;
            }
            term *= d / (i + 1) as f64;
            if term.abs() < 1e-18 {
                break;
            }
        }
        out
    } else {
        let e = libm::exp(d);
        let d2 = d * d;
        [
            libm::expm1(d) / d,
            (e * (d - 1.0) + 1.0) / d2,
            (e * (d2 - 2.0 * d + 2.0) - 2.0) / (d2 * d),
        ]
    }
}

/// `[int_0^1 u^k exp((1-u) r + u s) du]_{k=0,1,2}`, factored about the
/// larger endpoint so that nothing overflows before the result does.
fn segment_moments(r: f64, s: f64) -> [f64; 3] {
    if s <= r {
        let m = unit_moments(s - r);
        let e = libm::exp(r);
        [e * m[0], e * m[1], e * m[2]]
    } else {
        let m = unit_moments(r - s);
        let e = libm::exp(s);
        [e * m[0], e * (m[0] - m[1]), e * (m[0] - 2.0 * m[1] + m[2])]
    }
}

/// `int_a^b exp(phi)` for `phi` linear from `r` at `a` to `s` at `b`.
fn segment_mass(a: f64, b: f64, r: f64, s: f64) -> f64 {
    (b - a) * segment_moments(r, s)[0]
}

/// `(int exp(phi), int y exp(phi))` over one linear segment.
fn segment_mass_and_moment(a: f64, b: f64, r: f64, s: f64) -> (f64, f64) {
    let d = b - a;
    let m = segment_moments(r, s);
    (d * m[0], d * (a * m[0] + d * m[1]))
}

/// Distinct sorted values and their relative frequencies.
fn collapse_ties(r: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if let Some(i) = r.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let mut sorted = r.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut xs: Vec<f64> = Vec::new();
    let mut ws: Vec<f64> = Vec::new();
    for v in sorted {
        match xs.last() {
            Some(&last) if last == v => *ws.last_mut().unwrap() += 1.0,
            _ => {
                xs.push(v);
                ws.push(1.0);
            }
        }
    }
    if xs.len() < 2 {
        return Err(Error::MleDoesNotExist);
    }
    for w in &mut ws {
        *w /= n;
    }
    Ok((xs, ws))
}

/// Solver state on standardized support points in `[-1, 1]`.
struct ActiveSet<'a> {
    x: &'a [f64],
    w: &'a [f64],
    /// Indices into `x` of the current knots, sorted, always containing
    /// both end points.
    knots: Vec<usize>,
    /// `phi` at the knots.
    theta: Vec<f64>,
}

const NEWTON_MAX_ITER: usize = 200;
const NEWTON_DECREMENT: f64 = 1e-22;

impl<'a> ActiveSet<'a> {
    fn new(x: &'a [f64], w: &'a [f64]) -> Self {
        let m = x.len();
        let level = -libm::log(x[m - 1] - x[0]);
        Self { x, w, knots: vec![0, m - 1], theta: vec![level, level] }
    }

    /// Linear part of the objective: `sum_j w_j phi(x_j) = mass . theta`.
    fn knot_mass(&self, knots: &[usize]) -> Vec<f64> {
        let mut mass = vec![0.0; knots.len()];
        for p in 0..knots.len() - 1 {
            let (lo, hi) = (knots[p], knots[p + 1]);
            let (ta, tb) = (self.x[lo], self.x[hi]);
            let span = tb - ta;
            mass[p] += self.w[lo];
            for j in lo + 1..hi {
                let lambda = (tb - self.x[j]) / span;
                mass[p] += self.w[j] * lambda;
                mass[p + 1] += self.w[j] * (1.0 - lambda);
            }
        }
        *mass.last_mut().unwrap() += self.w[*knots.last().unwrap()];
        mass
    }

    fn objective(&self, knots: &[usize], mass: &[f64], theta: &[f64]) -> f64 {
        let mut value: f64 = mass.iter().zip(theta).map(|(a, b)| a * b).sum();
        for p in 0..knots.len() - 1 {
            value -= segment_mass(self.x[knots[p]], self.x[knots[p + 1]], theta[p], theta[p + 1]);
        }
        if value.is_nan() {
            f64::NEG_INFINITY
        } else {
            value
        }
    }

    /// Newton ascent over functions linear between `knots`, started at
    /// `theta`. Concavity is not enforced here.
    fn newton(&self, knots: &[usize], mut theta: Vec<f64>) -> Vec<f64> {
        let k = knots.len();
        let mass = self.knot_mass(knots);
        let mut value = self.objective(knots, &mass, &theta);
        let mut grad = vec![0.0; k];
        let mut diag = vec![0.0; k];
        let mut off = vec![0.0; k - 1];
        for _ in 0..NEWTON_MAX_ITER {
            grad.copy_from_slice(&mass);
            diag.iter_mut().for_each(|d| *d = 0.0);
            for p in 0..k - 1 {
                let span = self.x[knots[p + 1]] - self.x[knots[p]];
                let [j0, j1, j2] = segment_moments(theta[p], theta[p + 1]);
                grad[p] -= span * (j0 - j1);
                grad[p + 1] -= span * j1;
                diag[p] += span * (j0 - 2.0 * j1 + j2);
                diag[p + 1] += span * j2;
                off[p] = span * (j1 - j2);
            }
            let Some(step) = solve_tridiagonal(&diag, &off, &grad) else {
                break;
            };
            let decrement: f64 = grad.iter().zip(&step).map(|(g, s)| g * s).sum();
            if !(decrement > NEWTON_DECREMENT) {
                break;
            }
            let mut t = 1.0;
            let mut accepted = false;
            while t > 1e-12 {
                let trial: Vec<f64> = theta.iter().zip(&step).map(|(a, s)| a + t * s).collect();
                let trial_value = self.objective(knots, &mass, &trial);
                if trial_value >= value + 1e-4 * t * decrement {
                    theta = trial;
                    value = trial_value;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        theta
    }

    /// Slope change at each interior knot (`<= 0` means concave there).
    fn bends(&self, knots: &[usize], theta: &[f64]) -> Vec<f64> {
        let slope = |p: usize| (theta[p + 1] - theta[p]) / (self.x[knots[p + 1]] - self.x[knots[p]]);
        (1..knots.len() - 1).map(|p| slope(p) - slope(p - 1)).collect()
    }

    /// `phi` at every support point.
    fn phi_at_support(&self) -> Vec<f64> {
        let mut phi = vec![0.0; self.x.len()];
        for p in 0..self.knots.len() - 1 {
            let (lo, hi) = (self.knots[p], self.knots[p + 1]);
            let (ta, tb) = (self.x[lo], self.x[hi]);
            for j in lo..hi {
                let lambda = (tb - self.x[j]) / (tb - ta);
                phi[j] = lambda * self.theta[p] + (1.0 - lambda) * self.theta[p + 1];
            }
        }
        let last = self.x.len() - 1;
        phi[last] = *self.theta.last().unwrap();
        phi
    }

    /// Directional derivatives of the objective along the concave bends
    /// `-(x - x_j)^+`, for every support point.
    fn bend_derivatives(&self) -> Vec<f64> {
        let m = self.x.len();
        let phi = self.phi_at_support();
        let mut out = vec![0.0; m];
        let (mut mass, mut moment, mut wsum, mut wxsum) = (0.0, 0.0, 0.0, 0.0);
        for j in (0..m).rev() {
            if j + 1 < m {
                let (e, xe) = segment_mass_and_moment(self.x[j], self.x[j + 1], phi[j], phi[j + 1]);
                mass += e;
                moment += xe;
            }
            let xj = self.x[j];
            out[j] = (moment - xj * mass) - (wxsum - xj * wsum);
            wsum += self.w[j];
            wxsum += self.w[j] * xj;
        }
        out
    }

    /// Maximize over the current knot set while keeping `phi` concave,
    /// dropping knots that must straighten out. `protect` is a freshly
    /// added knot; returns `false` if it would be dropped without progress.
    fn optimize_on_knots(&mut self, protect: Option<usize>) -> bool {
        loop {
            let target = self.newton(&self.knots, self.theta.clone());
            let new_bends = self.bends(&self.knots, &target);
            if new_bends.iter().all(|&b| b <= 0.0) {
                self.theta = target;
                return true;
            }
            let old_bends = self.bends(&self.knots, &self.theta);
            let mut t = 1.0;
            let mut blocking = 0;
            for (i, (&old, &new)) in old_bends.iter().zip(&new_bends).enumerate() {
                if new > 0.0 {
                    let old = old.min(0.0);
                    let ti = old / (old - new);
                    if ti < t {
                        t = ti;
                        blocking = i;
                    }
                }
            }
            if let Some(j) = protect.filter(|_| t <= 0.0) {
                if self.knots[blocking + 1] == j {
                    return false;
                }
            }
            let stepped: Vec<f64> = self.theta.iter().zip(&target).map(|(a, b)| a + t * (b - a)).collect();
            let bends = self.bends(&self.knots, &stepped);
            let scale = bends.iter().fold(0.0f64, |acc, b| acc.max(b.abs())).max(1.0);
            // The blocking knot goes even if rounding left it slightly bent.
            let mut keep = vec![true; self.knots.len()];
            keep[blocking + 1] = false;
            for (i, &b) in bends.iter().enumerate() {
                if b >= -1e-14 * scale {
                    keep[i + 1] = false;
                }
            }
            let knots: Vec<usize> = self.knots.iter().zip(&keep).filter(|(_, &k)| k).map(|(&j, _)| j).collect();
            let theta: Vec<f64> = stepped.iter().zip(&keep).filter(|(_, &k)| k).map(|(&v, _)| v).collect();
            self.knots = knots;
            self.theta = theta;
        }
    }

    fn insert_knot(&mut self, j: usize) {
        let p = self.knots.partition_point(|&k| k < j);
        let (lo, hi) = (self.knots[p - 1], self.knots[p]);
        let lambda = (self.x[hi] - self.x[j]) / (self.x[hi] - self.x[lo]);
        let value = lambda * self.theta[p - 1] + (1.0 - lambda) * self.theta[p];
        self.knots.insert(p, j);
        self.theta.insert(p, value);
    }

    fn solve(&mut self, add_threshold: f64) {
        self.optimize_on_knots(None);
        let max_rounds = 20 * self.x.len() + 100;
        for _ in 0..max_rounds {
            let derivs = self.bend_derivatives();
            let mut best: Option<(usize, f64)> = None;
            let mut p = 0;
            for j in 1..self.x.len() - 1 {
                while self.knots[p] < j {
                    p += 1;
                }
                if self.knots[p] == j {
                    continue;
                }
                if derivs[j] > add_threshold && best.map_or(true, |(_, d)| derivs[j] > d) {
                    best = Some((j, derivs[j]));
                }
            }
            let Some((j, _)) = best else { break };
            let saved = (self.knots.clone(), self.theta.clone());
            self.insert_knot(j);
            if !self.optimize_on_knots(Some(j)) {
                (self.knots, self.theta) = saved;
                break;
            }
        }
    }
}

/// Symmetric tridiagonal solve `A s = g` via `LDL'`; `None` unless `A` is
/// numerically positive definite.
fn solve_tridiagonal(diag: &[f64], off: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let k = diag.len();
    let mut d = vec![0.0; k];
    let mut l = vec![0.0; k.saturating_sub(1)];
    let mut z = vec![0.0; k];
    d[0] = diag[0];
    z[0] = rhs[0];
    for i in 1..k {
        if !(d[i - 1] > 0.0) {
            return None;
        }
        l[i - 1] = off[i - 1] / d[i - 1];
        d[i] = diag[i] - l[i - 1] * off[i - 1];
        z[i] = rhs[i] - l[i - 1] * z[i - 1];
    }
    if !(d[k - 1] > 0.0) {
        return None;
    }
    let mut s = vec![0.0; k];
    s[k - 1] = z[k - 1] / d[k - 1];
    for i in (0..k - 1).rev() {
        s[i] = z[i] / d[i] - l[i] * s[i + 1];
    }
    Some(s)
}

/// Log-concave MLE of the density of `r`.
///
/// Needs at least two distinct values; otherwise the likelihood is
/// unbounded and [`Error::MleDoesNotExist`] is returned.
pub fn fit_logconcave(r: &[f64], tol: f64) -> Result<LogConcaveFit> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument("tol must be positive"));
    }
    let (xs, ws) = collapse_ties(r)?;
    let m = xs.len();
    let center = 0.5 * (xs[0] + xs[m - 1]);
    let scale = 0.5 * (xs[m - 1] - xs[0]);
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::MleDoesNotExist);
    }
    let z: Vec<f64> = xs.iter().map(|&v| (v - center) / scale).collect();

    let mut state = ActiveSet::new(&z, &ws);
    state.solve(1e-2 * tol);

    let log_scale = libm::log(scale);
    let phi_support = state.phi_at_support();
    let n = r.len() as f64;
    let loglik = n * ws.iter().zip(&phi_support).map(|(w, p)| w * (p - log_scale)).sum::<f64>();
    let knots: Vec<f64> = state.knots.iter().map(|&j| xs[j]).collect();
    let phi: Vec<f64> = state.theta.iter().map(|t| t - log_scale).collect();
    Ok(LogConcaveFit::from_parts(knots, phi, loglik, tol))
}

impl LogConcaveFit {
    fn from_parts(knots: Vec<f64>, phi: Vec<f64>, loglik: f64, tol: f64) -> Self {
        let (mut integral, mut moment) = (0.0, 0.0);
        for p in 0..knots.len() - 1 {
            let (e, xe) = segment_mass_and_moment(knots[p], knots[p + 1], phi[p], phi[p + 1]);
            integral += e;
            moment += xe;
        }
        Self { knots, phi, loglik, integral, mean: moment / integral, tol }
    }

    /// Slopes of `phi` between consecutive knots.
    pub fn slopes(&self) -> Vec<f64> {
        self.knots
            .windows(2)
            .zip(self.phi.windows(2))
            .map(|(t, p)| (p[1] - p[0]) / (t[1] - t[0]))
            .collect()
    }

    /// `int exp(phi)` over each knot interval.
    pub fn segment_integrals(&self) -> Vec<f64> {
        (0..self.knots.len() - 1)
            .map(|p| segment_mass(self.knots[p], self.knots[p + 1], self.phi[p], self.phi[p + 1]))
            .collect()
    }

    pub fn log_density(&self, y: f64) -> f64 {
        let k = self.knots.len();
        if !(y >= self.knots[0] && y <= self.knots[k - 1]) {
            return f64::NEG_INFINITY;
        }
        let p = self.knots.partition_point(|&t| t <= y).clamp(1, k - 1) - 1;
        let (ta, tb) = (self.knots[p], self.knots[p + 1]);
        let lambda = (tb - y) / (tb - ta);
        lambda * self.phi[p] + (1.0 - lambda) * self.phi[p + 1]
    }

    /// Log-density, density and cdf at `y`.
    pub fn evaluate(&self, y: f64) -> Evaluation {
        let k = self.knots.len();
        if y < self.knots[0] || y.is_nan() {
            return Evaluation { log_density: f64::NEG_INFINITY, density: 0.0, cdf: 0.0 };
        }
        if y > self.knots[k - 1] {
            return Evaluation { log_density: f64::NEG_INFINITY, density: 0.0, cdf: self.integral };
        }
        let p = self.knots.partition_point(|&t| t <= y).clamp(1, k - 1) - 1;
        let below: f64 = (0..p)
            .map(|i| segment_mass(self.knots[i], self.knots[i + 1], self.phi[i], self.phi[i + 1]))
            .sum();
        let log_density = self.log_density(y);
        let partial = segment_mass(self.knots[p], y, self.phi[p], log_density);
        Evaluation { log_density, density: libm::exp(log_density), cdf: below + partial }
    }

    /// The same density moved by `shift` (knots `+ shift`).
    pub fn translated(&self, shift: f64) -> Self {
        let knots = self.knots.iter().map(|t| t + shift).collect();
        Self::from_parts(knots, self.phi.clone(), self.loglik, self.tol)
    }
}

/// Shift a fit to mean zero and move the mean into the intercept.
///
/// With `mu` the mean of the fitted density, returns `phi(y + mu)` and the
/// estimate with `theta[intercept_col] += mu`. The fitted values
/// `x' theta + y` are unchanged, and so is the log-likelihood.
pub fn recenter_to_mean_zero(
    fit: &LogConcaveFit,
    estimate: &Estimate,
    intercept_col: Option<usize>,
) -> Result<(LogConcaveFit, Estimate)> {
    let col = intercept_col.ok_or(Error::MissingIntercept)?;
    if col >= estimate.theta.len() {
        return Err(Error::MissingIntercept);
    }
    let mu = fit.mean;
    let mut shifted = fit.translated(-mu);
    // A second pass removes the rounding left by the first one.
    let residual_mean = shifted.mean;
    if residual_mean != 0.0 {
        shifted = shifted.translated(-residual_mean);
    }
    let mut estimate = estimate.clone();
    estimate.theta[col] += mu + residual_mean;
    Ok((shifted, estimate))
}

/// `L_n(eta)`: maximal log-likelihood of a log-concave error density at
/// regression coefficient `eta`.
///
/// The unconstrained fit is used; since the design contains the constant
/// vector, recentering to mean zero moves only the intercept and leaves
/// the value unchanged.
pub fn profile_loglik(problem: &RegressionProblem, eta: &DVector<f64>, tol: f64) -> Result<f64> {
    let r = residuals(problem, eta)?;
    Ok(fit_logconcave(r.as_slice(), tol)?.loglik)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    #[test]
    fn unit_moments_agree_across_branches() {
        // Closed forms against the series at the switch point.
        for &d in &[-2.0, 2.0] {
            let s = unit_moments(d);
            let e = libm::exp(d);
            let c = [(e - 1.0) / d, (e * (d - 1.0) + 1.0) / (d * d), (e * (d * d - 2.0 * d + 2.0) - 2.0) / (d * d * d)];
            for k in 0..3 {
                assert_relative_eq!(s[k], c[k], max_relative = 1e-13);
            }
        }
        assert_eq!(unit_moments(0.0), [1.0, 0.5, 1.0 / 3.0]);
    }

    #[test]
    fn segment_moments_are_reflection_symmetric() {
        let a = segment_moments(0.3, -4.0);
        let b = segment_moments(-4.0, 0.3);
        assert_relative_eq!(a[0], b[0], max_relative = 1e-14);
        assert_relative_eq!(a[0] - a[1], b[1], max_relative = 1e-13);
        // large exponents stay finite
        assert!(segment_moments(700.0, -800.0)[0].is_finite());
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let diag = [4.0, 5.0, 6.0];
        let off = [1.0, 2.0];
        let rhs = [1.0, 2.0, 3.0];
        let s = solve_tridiagonal(&diag, &off, &rhs).unwrap();
        let a = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.0, 1.0, 5.0, 2.0, 0.0, 2.0, 6.0]);
        let x = a.lu().solve(&DVector::from_row_slice(&rhs)).unwrap();
        for i in 0..3 {
            assert_relative_eq!(s[i], x[i], epsilon = 1e-14);
        }
        assert!(solve_tridiagonal(&[-1.0, 1.0], &[0.0], &[1.0, 1.0]).is_none());
    }

    #[test]
    fn collapse_ties_counts() {
        let (x, w) = collapse_ties(&[2.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(x, [1.0, 2.0, 3.0]);
        assert_eq!(w, [0.25, 0.5, 0.25]);
        assert_eq!(collapse_ties(&[1.0, 1.0]).unwrap_err(), Error::MleDoesNotExist);
        assert_eq!(collapse_ties(&[1.0, f64::NAN]).unwrap_err(), Error::NonFinite(1));
    }

    #[test]
    fn two_points_give_uniform() {
        let fit = fit_logconcave(&[0.0, 1.0], 1e-7).unwrap();
        assert_eq!(fit.knots, [0.0, 1.0]);
        assert!(fit.phi.iter().all(|p| p.abs() < 1e-10));
        assert!(fit.loglik.abs() < 1e-10);
        assert_relative_eq!(fit.mean, 0.5, epsilon = 1e-10);

        let fit = fit_logconcave(&[0.0, 2.0], 1e-7).unwrap();
        let ln2 = core::f64::consts::LN_2;
        assert!(fit.phi.iter().all(|p| (p + ln2).abs() < 1e-10));
        assert_relative_eq!(fit.loglik, -2.0 * ln2, epsilon = 1e-10);
    }

    #[test]
    fn two_points_with_ties_tilt_towards_heavier_end() {
        // Weights (3/4, 1/4) on {0, 1}: the optimal linear phi(x) = a + b x
        // solves e^a (e^b - 1)/b = 1 and the mean condition
        // int x e^phi = 1/4, i.e. the mean of the data.
        let fit = fit_logconcave(&[0.0, 0.0, 0.0, 1.0], 1e-7).unwrap();
        assert_relative_eq!(fit.integral, 1.0, epsilon = 1e-10);
        assert_relative_eq!(fit.mean, 0.25, epsilon = 1e-9);
        assert!(fit.phi[0] > fit.phi[1]);
    }

    #[test]
    fn degenerate_input() {
        assert_eq!(fit_logconcave(&[3.0, 3.0, 3.0], 1e-7).unwrap_err(), Error::MleDoesNotExist);
        assert_eq!(fit_logconcave(&[3.0], 1e-7).unwrap_err(), Error::MleDoesNotExist);
        assert!(fit_logconcave(&[0.0, 1.0], 0.0).is_err());
    }

    #[test]
    fn evaluate_uniform() {
        let fit = fit_logconcave(&[0.0, 1.0], 1e-7).unwrap();
        let e = fit.evaluate(0.5);
        assert_relative_eq!(e.density, 1.0, epsilon = 1e-9);
        assert_relative_eq!(e.cdf, 0.5, epsilon = 1e-9);
        let e = fit.evaluate(-0.1);
        assert_eq!((e.density, e.cdf), (0.0, 0.0));
        assert_eq!(e.log_density, f64::NEG_INFINITY);
        let fit2 = fit_logconcave(&[0.0, 2.0], 1e-7).unwrap();
        assert_relative_eq!(fit2.evaluate(2.0).cdf, 1.0, epsilon = 1e-9);
        assert_relative_eq!(fit2.evaluate(5.0).cdf, fit2.integral, epsilon = 0.0);
    }

    #[test]
    fn recenter_uniform() {
        let fit = fit_logconcave(&[0.0, 1.0], 1e-7).unwrap();
        let est = Estimate {
            theta: DVector::from_row_slice(&[3.0]),
            gram: DMatrix::identity(1, 1),
            rank: 1,
            used_pseudoinverse: false,
        };
        let (shifted, moved) = recenter_to_mean_zero(&fit, &est, Some(0)).unwrap();
        assert_relative_eq!(shifted.knots[0], -0.5, epsilon = 1e-9);
        assert_relative_eq!(shifted.knots[1], 0.5, epsilon = 1e-9);
        assert_relative_eq!(moved.theta[0], 3.5, epsilon = 1e-9);
        assert!(shifted.mean.abs() < 1e-12);
        assert_eq!(shifted.loglik, fit.loglik);

        let (again, same) = recenter_to_mean_zero(&shifted, &moved, Some(0)).unwrap();
        assert_relative_eq!(again.knots[0], shifted.knots[0], epsilon = 1e-12);
        assert_relative_eq!(same.theta[0], moved.theta[0], epsilon = 1e-12);

        assert_eq!(recenter_to_mean_zero(&fit, &est, None).unwrap_err(), Error::MissingIntercept);
    }

    #[test]
    fn profile_loglik_intercept_only() {
        let p = RegressionProblem::new(DMatrix::from_element(2, 1, 1.0), DVector::from_row_slice(&[0.0, 1.0]), Some(0))
            .unwrap();
        for &c in &[0.0, -3.0, 17.5] {
            let v = profile_loglik(&p, &DVector::from_element(1, c), 1e-7).unwrap();
            assert!(v.abs() < 1e-9);
        }
    }
}
