//! Brute-force check that the plug-in classifier is optimal.
//!
//! On a distribution with `n` atoms a randomized classifier is a vector
//! `h` in `[0,1]^n`. Cost and predicted positive rate are both affine in `h`,
//! so the constrained minimum is attained at a vertex of the feasible
//! polytope: a binary point, or a point with one fractional coordinate on
//! which the rate constraint is tight. [`brute_force_optimum`] enumerates all
//! of them. It shares no code with the plug-in construction.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::dist::DiscreteDistribution;
use crate::metrics::{self, CostParams, Regime};
use crate::plugin::{ConstraintSpec, QuantileChoice, ThresholdClassifier};
use crate::{Error, Result};

pub const MAX_ORACLE_ATOMS: usize = 16;
/// Slack on the rate constraint for binary vertices.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-12;
/// Maximal cost gap for the plug-in classifier to count as optimal.
pub const GAP_TOLERANCE: f64 = 1e-10;
/// Probability that [`random_instance`] plants an atom at `b / (a + b)`.
pub const FORCED_ATOM_PROBABILITY: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub optimum: f64,
    /// Decision value per atom, in atom order.
    pub witness: Vec<f64>,
    pub constraint: ConstraintSpec,
}

impl OracleResult {
    pub fn fractional_coordinates(&self) -> usize {
        self.witness.iter().filter(|&&h| h > 0.0 && h < 1.0).count()
    }
}

/// Minimal expected cost over all randomized classifiers meeting `constraint`.
pub fn brute_force_optimum(
    dist: &DiscreteDistribution,
    costs: &CostParams,
    constraint: ConstraintSpec,
) -> Result<OracleResult> {
    let n = dist.len();
    if n > MAX_ORACLE_ATOMS {
        return Err(Error::TooManyAtoms { got: n, max: MAX_ORACLE_ATOMS });
    }
    let (a, b) = (costs.a(), costs.b());
    let weights: Vec<f64> = dist.atoms().iter().map(|t| t.mass).collect();
    let values: Vec<f64> = dist.atoms().iter().map(|t| t.value).collect();

    let Some(alpha) = constraint.alpha() else {
        // Pointwise rule; ties cost the same either way and get 0.
        let witness: Vec<f64> = values
            .iter()
            .map(|&z| if b * (1.0 - z) < a * z { 1.0 } else { 0.0 })
            .collect();
        let optimum = objective(&weights, &values, &witness, a, b);
        return Ok(OracleResult { optimum, witness, constraint });
    };

    // Cost is base + sum_i slope_i h_i; rate is sum_i w_i h_i.
    let base: f64 = weights.iter().zip(&values).map(|(w, z)| a * w * z).sum();
    let slope: Vec<f64> =
        weights.iter().zip(&values).map(|(w, z)| w * (b * (1.0 - z) - a * z)).collect();

    let count = 1usize << n;
    let mut mask_cost = vec![0.0; count];
    let mut mask_rate = vec![0.0; count];
    for mask in 1..count {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        mask_cost[mask] = mask_cost[rest] + slope[low];
        mask_rate[mask] = mask_rate[rest] + weights[low];
    }

    let mut best: Option<Vertex> = None;
    let mut consider = |cost: f64, mask: usize, frac: Option<(usize, f64)>| {
        if best.is_none_or(|v| cost < v.cost) {
            best = Some(Vertex { cost, mask, frac });
        }
    };
    for mask in 0..count {
        if constraint.admits(mask_rate[mask], CONSTRAINT_TOLERANCE) {
            consider(base + mask_cost[mask], mask, None);
        }
        for j in 0..n {
            if mask & (1 << j) != 0 {
                continue;
            }
            let h = (alpha - mask_rate[mask]) / weights[j];
            if h > 0.0 && h < 1.0 {
                consider(base + mask_cost[mask] + slope[j] * h, mask, Some((j, h)));
            }
        }
    }

    let Vertex { mask, frac, .. } = best.ok_or(Error::Infeasible)?;
    let mut witness: Vec<f64> = (0..n).map(|i| if mask & (1 << i) != 0 { 1.0 } else { 0.0 }).collect();
    if let Some((j, h)) = frac {
        witness[j] = h;
    }
    let optimum = objective(&weights, &values, &witness, a, b);
    Ok(OracleResult { optimum, witness, constraint })
}

/// Binary coordinates in `mask`, plus at most one fractional coordinate.
#[derive(Clone, Copy)]
struct Vertex {
    cost: f64,
    mask: usize,
    frac: Option<(usize, f64)>,
}

fn objective(weights: &[f64], values: &[f64], h: &[f64], a: f64, b: f64) -> f64 {
    weights
        .iter()
        .zip(values)
        .zip(h)
        .map(|((w, z), h)| a * w * (1.0 - h) * z + b * w * h * (1.0 - z))
        .sum()
}

/// Outcome of comparing the plug-in classifier against the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalityCheck {
    pub classifier: ThresholdClassifier,
    pub regime: Regime,
    pub plugin_cost: f64,
    /// Oracle under the constraint matching `regime`.
    pub regime_oracle: OracleResult,
    /// Oracle under `E[H] = alpha`, which the plug-in must match in every regime.
    pub equality_oracle: OracleResult,
}

impl OptimalityCheck {
    pub fn regime_gap(&self) -> f64 {
        (self.plugin_cost - self.regime_oracle.optimum).abs()
    }

    pub fn equality_gap(&self) -> f64 {
        (self.plugin_cost - self.equality_oracle.optimum).abs()
    }

    pub fn worst_gap(&self) -> f64 {
        self.regime_gap().max(self.equality_gap())
    }

    pub fn passed(&self) -> bool {
        self.worst_gap() <= GAP_TOLERANCE
    }
}

/// The constraint under which the plug-in classifier is claimed optimal.
pub fn constraint_for(regime: Regime, alpha: f64) -> ConstraintSpec {
    match regime {
        Regime::ConstraintBindingBelow => ConstraintSpec::RateAtLeast(alpha),
        Regime::ConstraintBindingAbove => ConstraintSpec::RateAtMost(alpha),
        Regime::UnconstrainedOptimum => ConstraintSpec::Unconstrained,
    }
}

/// Builds the lower-quantile plug-in classifier and compares its cost with
/// the brute-force optimum for its regime and for the equality constraint.
pub fn check_optimality(dist: &DiscreteDistribution, alpha: f64, costs: &CostParams) -> Result<OptimalityCheck> {
    let classifier = ThresholdClassifier::build(dist, alpha, QuantileChoice::Lower)?;
    let regime = metrics::regime(classifier.threshold(), costs);
    let plugin_cost = metrics::cost_posterior(dist, &classifier, costs);
    let regime_oracle = brute_force_optimum(dist, costs, constraint_for(regime, alpha))?;
    let equality_oracle = brute_force_optimum(dist, costs, ConstraintSpec::RateEqual(alpha))?;
    Ok(OptimalityCheck { classifier, regime, plugin_cost, regime_oracle, equality_oracle })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub dist: DiscreteDistribution,
    pub alpha: f64,
    pub costs: CostParams,
    /// Whether an atom was planted at `b / (a + b)`.
    pub forced_bayes_atom: bool,
}

/// A random test instance, reproducible per `seed`.
///
/// Atom count is uniform in `1..=max_atoms`, values uniform on `[0,1)`,
/// weights a flat Dirichlet draw, `alpha` uniform on `(0.05, 0.95)` and
/// `(a, b)` uniform on `[0,10)^2`. With probability
/// [`FORCED_ATOM_PROBABILITY`] the first value is replaced by `b / (a + b)`.
pub fn random_instance(seed: u64, max_atoms: usize) -> Result<Instance> {
    if !(1..=MAX_ORACLE_ATOMS).contains(&max_atoms) {
        return Err(Error::MaxAtomsOutOfRange(max_atoms));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(1..=max_atoms);
    let mut raw: Vec<(f64, f64)> = (0..k)
        .map(|_| {
            let value: f64 = rng.random();
            let weight: f64 = rng.sample(Exp1);
            (value, weight.max(f64::MIN_POSITIVE))
        })
        .collect();
    let alpha = loop {
        let x = 0.05 + 0.9 * rng.random::<f64>();
        if x > 0.05 {
            break x;
        }
    };
    let (a, b) = loop {
        let a = 10.0 * rng.random::<f64>();
        let b = 10.0 * rng.random::<f64>();
        if a + b >= 1e-6 {
            break (a, b);
        }
    };
    let costs = CostParams::new(a, b)?;
    let forced_bayes_atom = rng.random::<f64>() < FORCED_ATOM_PROBABILITY;
    if forced_bayes_atom {
        raw[0].0 = costs.bayes_threshold();
    }
    let dist = DiscreteDistribution::normalize(&raw)?;
    Ok(Instance { dist, alpha, costs, forced_bayes_atom })
}
