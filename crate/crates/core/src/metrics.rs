//! Expected cost, precision, recall, FPR and TPR of a threshold classifier.
//!
//! Posterior mode works on a [`DiscreteDistribution`] of the true posterior
//! and replaces `1_A` by `Z` (tower property). Label mode works on a
//! [`LabeledDataset`] and uses the labels directly, so the scores need not be
//! calibrated.

use crate::dataset::LabeledDataset;
use crate::dist::DiscreteDistribution;
use crate::plugin::ThresholdClassifier;
use crate::{Error, Result};

/// Tolerance for deciding that a threshold sits exactly at `b / (a + b)`.
pub const REGIME_TOLERANCE: f64 = 1e-12;

/// Weights of the expected misclassification cost
/// `a * E[(1 - H) 1_A] + b * E[H 1_{A^c}]`.
///
/// `a` multiplies missed positives, `b` multiplies false positives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    a: f64,
    b: f64,
}

impl CostParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite() && a + b > 0.0 {
            Ok(CostParams { a, b })
        } else {
            Err(Error::InvalidCosts { a, b })
        }
    }

    /// Cost of a missed positive.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Cost of a false positive.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// `b / (a + b)`, the cost-optimal posterior cutoff without constraint.
    pub fn bayes_threshold(&self) -> f64 {
        self.b / (self.a + self.b)
    }
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams { a: 1.0, b: 1.0 }
    }
}

/// Which rate constraint the plug-in classifier is optimal under, given where
/// its threshold sits relative to `b / (a + b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `q < b/(a+b)`: optimal among `E[H] >= alpha`.
    ConstraintBindingBelow,
    /// `q > b/(a+b)`: optimal among `E[H] <= alpha`.
    ConstraintBindingAbove,
    /// `q = b/(a+b)`: optimal among all classifiers.
    UnconstrainedOptimum,
}

pub fn regime(q: f64, costs: &CostParams) -> Regime {
    let bayes = costs.bayes_threshold();
    if (q - bayes).abs() <= REGIME_TOLERANCE {
        Regime::UnconstrainedOptimum
    } else if q < bayes {
        Regime::ConstraintBindingBelow
    } else {
        Regime::ConstraintBindingAbove
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub cost: f64,
    /// `None` when nothing is predicted positive.
    pub precision: Option<f64>,
    pub recall: f64,
    pub fpr: f64,
    pub tpr: f64,
    pub ppr: f64,
    pub positive_prevalence: f64,
}

/// Weighted sums shared by both modes, already divided by total weight.
struct Tally {
    ppr: f64,
    prevalence: f64,
    true_pos: f64,
    false_pos: f64,
    missed_pos: f64,
}

impl Tally {
    fn report(&self, costs: &CostParams) -> Result<MetricsReport> {
        let prevalence = self.prevalence;
        if !(prevalence > 0.0 && prevalence < 1.0) {
            return Err(Error::DegeneratePrevalence(prevalence));
        }
        let recall = self.true_pos / prevalence;
        Ok(MetricsReport {
            cost: costs.a * self.missed_pos + costs.b * self.false_pos,
            precision: (self.ppr > 0.0).then(|| self.true_pos / self.ppr),
            recall,
            fpr: self.false_pos / (1.0 - prevalence),
            tpr: recall,
            ppr: self.ppr,
            positive_prevalence: prevalence,
        })
    }
}

fn tally_posterior(dist: &DiscreteDistribution, c: &ThresholdClassifier) -> Tally {
    let mut t = Tally { ppr: 0.0, prevalence: 0.0, true_pos: 0.0, false_pos: 0.0, missed_pos: 0.0 };
    for atom in dist.atoms() {
        let (w, z) = (atom.mass, atom.value);
        let h = c.decision(z);
        t.ppr += w * h;
        t.prevalence += w * z;
        t.true_pos += w * h * z;
        t.false_pos += w * h * (1.0 - z);
        t.missed_pos += w * (1.0 - h) * z;
    }
    t
}

/// Expected cost under the posterior distribution.
pub fn cost_posterior(dist: &DiscreteDistribution, c: &ThresholdClassifier, costs: &CostParams) -> f64 {
    let t = tally_posterior(dist, c);
    costs.a * t.missed_pos + costs.b * t.false_pos
}

pub fn metrics_posterior(
    dist: &DiscreteDistribution,
    c: &ThresholdClassifier,
    costs: &CostParams,
) -> Result<MetricsReport> {
    tally_posterior(dist, c).report(costs)
}

pub fn metrics_labeled(
    data: &LabeledDataset,
    c: &ThresholdClassifier,
    costs: &CostParams,
) -> Result<MetricsReport> {
    let total = data.total_weight();
    let mut t = Tally { ppr: 0.0, prevalence: 0.0, true_pos: 0.0, false_pos: 0.0, missed_pos: 0.0 };
    for r in data.records() {
        let w = r.weight / total;
        let h = c.decision(r.score);
        t.ppr += w * h;
        if r.label.is_positive() {
            t.prevalence += w;
            t.true_pos += w * h;
            t.missed_pos += w * (1.0 - h);
        } else {
            t.false_pos += w * h;
        }
    }
    t.report(costs)
}
