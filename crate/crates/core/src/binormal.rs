//! The equal-variance two-normal population.
//!
//! Given class `A` the feature is `N(nu, sigma^2)`, otherwise `N(mu, sigma^2)`,
//! with `P[A] = p`. The posterior is logistic in the feature,
//! `P[A | X] = 1 / (1 + exp(a X + b))` with `a = (mu - nu) / sigma^2` and
//! `b = (nu^2 - mu^2) / (2 sigma^2) + ln((1 - p) / p)`. Since it is strictly
//! increasing, `{posterior > q}` equals `{X > x_alpha}` and the optimal
//! plug-in classifier is a plain cut on the feature, with no randomization.
//!
//! `alpha` is always the predicted positive rate: the cut solves
//! `P[X <= x_alpha] = 1 - alpha`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dataset::{Label, LabeledDataset, Record};
use crate::metrics::{CostParams, MetricsReport};
use crate::normal;
use crate::{Error, Result};

/// Required accuracy of the mixture CDF residual at the cut point.
pub const CUT_TOLERANCE: f64 = 1e-12;
const MAX_DOUBLINGS: u32 = 60;
const MAX_BISECTIONS: u32 = 2_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinormalModel {
    p: f64,
    mu: f64,
    nu: f64,
    sigma: f64,
}

/// The analytic optimal classifier and its metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinormalPluginResult {
    pub x_alpha: f64,
    pub q: f64,
    pub coeff_a: f64,
    pub coeff_b: f64,
    pub report: MetricsReport,
}

impl BinormalModel {
    /// `p`: positive prevalence; `mu`/`nu`: negative/positive class means.
    pub fn new(p: f64, mu: f64, nu: f64, sigma: f64) -> Result<Self> {
        if !(p.is_finite() && mu.is_finite() && nu.is_finite() && sigma.is_finite()) {
            return Err(Error::NonFiniteParameter);
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::PrevalenceOutOfRange(p));
        }
        if mu >= nu {
            return Err(Error::MeanOrder { mu, nu });
        }
        if sigma <= 0.0 {
            return Err(Error::NonPositiveSigma(sigma));
        }
        Ok(BinormalModel { p, mu, nu, sigma })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Slope and intercept `(a, b)` of the logistic posterior; `a < 0`.
    pub fn logistic_coefficients(&self) -> (f64, f64) {
        let var = self.sigma * self.sigma;
        let slope = (self.mu - self.nu) / var;
        let intercept =
            (self.nu * self.nu - self.mu * self.mu) / (2.0 * var) + libm::log((1.0 - self.p) / self.p);
        (slope, intercept)
    }

    pub fn posterior(&self, x: f64) -> f64 {
        let (slope, intercept) = self.logistic_coefficients();
        1.0 / (1.0 + libm::exp(slope * x + intercept))
    }

    /// `P[X <= x]`.
    pub fn mixture_cdf(&self, x: f64) -> f64 {
        self.p * normal::cdf((x - self.nu) / self.sigma)
            + (1.0 - self.p) * normal::cdf((x - self.mu) / self.sigma)
    }

    /// The feature cut `x` with `P[X > x] = alpha`, by bracketing bisection.
    pub fn solve_x_alpha(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        let target = 1.0 - alpha;
        let mut lo = self.mu.min(self.nu) - 10.0 * self.sigma;
        let mut hi = self.mu.max(self.nu) + 10.0 * self.sigma;
        let mut doublings = 0;
        while self.mixture_cdf(lo) > target || self.mixture_cdf(hi) < target {
            if doublings == MAX_DOUBLINGS {
                return Err(Error::BracketExpansion);
            }
            let width = hi - lo;
            if self.mixture_cdf(lo) > target {
                lo -= width;
            }
            if self.mixture_cdf(hi) < target {
                hi += width;
            }
            doublings += 1;
        }

        let mut best = lo;
        let mut best_residual = f64::INFINITY;
        for _ in 0..MAX_BISECTIONS {
            let mid = lo + 0.5 * (hi - lo);
            let residual = self.mixture_cdf(mid) - target;
            if residual.abs() < best_residual {
                best = mid;
                best_residual = residual.abs();
            }
            // Run to adjacent floats rather than stopping at CUT_TOLERANCE.
            if residual == 0.0 || mid <= lo || mid >= hi {
                break;
            }
            if residual < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(best)
    }

    /// Optimal classifier for top fraction `alpha`, with closed-form metrics.
    pub fn analytic_plugin(&self, alpha: f64, costs: &CostParams) -> Result<BinormalPluginResult> {
        let x_alpha = self.solve_x_alpha(alpha)?;
        let (coeff_a, coeff_b) = self.logistic_coefficients();
        let q = self.posterior(x_alpha);
        let recall = normal::sf((x_alpha - self.nu) / self.sigma);
        let fpr = normal::sf((x_alpha - self.mu) / self.sigma);
        let report = MetricsReport {
            cost: costs.a() * self.p * (1.0 - recall) + costs.b() * (1.0 - self.p) * fpr,
            precision: Some(self.p * recall / alpha),
            recall,
            fpr,
            tpr: recall,
            ppr: alpha,
            positive_prevalence: self.p,
        };
        Ok(BinormalPluginResult { x_alpha, q, coeff_a, coeff_b, report })
    }

    /// `n` i.i.d. `(feature, label)` draws, reproducible per `seed`.
    ///
    /// Uses ChaCha8 seeded from `seed`; the label is drawn first, then the
    /// feature from the matching class-conditional normal.
    pub fn sample_features(&self, n: usize, seed: u64) -> Result<Vec<(f64, Label)>> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let label = if rng.random::<f64>() < self.p { Label::Positive } else { Label::Negative };
            let mean = if label.is_positive() { self.nu } else { self.mu };
            let eps: f64 = rng.sample(StandardNormal);
            out.push((mean + self.sigma * eps, label));
        }
        Ok(out)
    }

    /// Like [`sample_features`](Self::sample_features) with the feature
    /// replaced by its posterior; unit weights.
    pub fn sample(&self, n: usize, seed: u64) -> Result<LabeledDataset> {
        let records = self
            .sample_features(n, seed)?
            .into_iter()
            .map(|(x, label)| Record::new(self.posterior(x), label, 1.0))
            .collect();
        LabeledDataset::new(records)
    }
}
