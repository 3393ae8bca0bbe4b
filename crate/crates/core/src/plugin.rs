//! The randomized threshold classifier on the posterior.

use crate::dist::DiscreteDistribution;
use crate::{Error, Result};

/// Slack allowed on the randomization mass before it is treated as a bug.
const MASS_SLACK: f64 = 1e-9;

/// Which end of the quantile interval to threshold at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuantileChoice {
    #[default]
    Lower,
    Upper,
}

/// A constraint on the predicted positive rate `E[H]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstraintSpec {
    RateAtLeast(f64),
    RateAtMost(f64),
    RateEqual(f64),
    Unconstrained,
}

impl ConstraintSpec {
    pub fn alpha(&self) -> Option<f64> {
        match *self {
            ConstraintSpec::RateAtLeast(a)
            | ConstraintSpec::RateAtMost(a)
            | ConstraintSpec::RateEqual(a) => Some(a),
            ConstraintSpec::Unconstrained => None,
        }
    }

    /// Whether a classifier with predicted positive rate `rate` is admissible,
    /// up to `tol`.
    pub fn admits(&self, rate: f64, tol: f64) -> bool {
        match *self {
            ConstraintSpec::RateAtLeast(a) => rate >= a - tol,
            ConstraintSpec::RateAtMost(a) => rate <= a + tol,
            ConstraintSpec::RateEqual(a) => (rate - a).abs() <= tol,
            ConstraintSpec::Unconstrained => true,
        }
    }
}

/// `H(z) = 1{z > q} + m 1{z = q}`.
///
/// `alpha` records the target rate the classifier was built for; evaluation
/// ignores it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdClassifier {
    threshold: f64,
    tie_mass: f64,
    alpha: Option<f64>,
}

impl ThresholdClassifier {
    pub fn new(threshold: f64, tie_mass: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::ThresholdOutOfRange(threshold));
        }
        if !(0.0..=1.0).contains(&tie_mass) {
            return Err(Error::MassOutOfRange(tie_mass));
        }
        Ok(ThresholdClassifier { threshold, tie_mass, alpha: None })
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        self.alpha = Some(alpha);
        Ok(self)
    }

    /// Predicts everything negative.
    pub fn reject_all() -> Self {
        ThresholdClassifier { threshold: 1.0, tie_mass: 0.0, alpha: None }
    }

    /// Predicts everything positive.
    pub fn accept_all() -> Self {
        ThresholdClassifier { threshold: 0.0, tie_mass: 1.0, alpha: None }
    }

    /// The optimal classifier with predicted positive rate `alpha`.
    ///
    /// `q` is a `(1 - alpha)`-quantile of `dist`. When `dist` has an atom at
    /// `q`, the mass on that atom is randomized with probability
    /// `(alpha - P[Z > q]) / P[Z = q]`, so that `E[H] = alpha` exactly.
    pub fn build(dist: &DiscreteDistribution, alpha: f64, choice: QuantileChoice) -> Result<Self> {
        check_alpha(alpha)?;
        let set = dist.quantile_set(1.0 - alpha)?;
        let threshold = match choice {
            QuantileChoice::Lower => set.lo,
            QuantileChoice::Upper => set.hi,
        };
        let parts = dist.cdf_parts(threshold);
        let tie_mass = if parts.at > 0.0 {
            let m = (alpha - parts.above) / parts.at;
            if !(-MASS_SLACK..=1.0 + MASS_SLACK).contains(&m) {
                return Err(Error::InconsistentMass(m));
            }
            m.clamp(0.0, 1.0)
        } else {
            0.0
        };
        Ok(ThresholdClassifier { threshold, tie_mass, alpha: Some(alpha) })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn tie_mass(&self) -> f64 {
        self.tie_mass
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    /// Probability of predicting positive at posterior value `z`.
    pub fn evaluate(&self, z: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&z) {
            return Err(Error::ValueOutOfRange(z));
        }
        Ok(self.decision(z))
    }

    /// [`evaluate`](Self::evaluate) without the range check.
    pub fn decision(&self, z: f64) -> f64 {
        if z > self.threshold {
            1.0
        } else if z == self.threshold {
            self.tie_mass
        } else {
            0.0
        }
    }

    /// `E[H]` under `dist`.
    pub fn predicted_positive_rate(&self, dist: &DiscreteDistribution) -> f64 {
        dist.atoms().iter().map(|a| a.mass * self.decision(a.value)).sum()
    }

    /// The deterministic classifiers `H(0) <= self <= H(1)` sharing the threshold.
    pub fn sandwich(&self) -> (Self, Self) {
        let lower = ThresholdClassifier { tie_mass: 0.0, ..*self };
        let upper = ThresholdClassifier { tie_mass: 1.0, ..*self };
        (lower, upper)
    }

    /// Same threshold, different tie mass.
    pub fn with_tie_mass(&self, tie_mass: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tie_mass) {
            return Err(Error::MassOutOfRange(tie_mass));
        }
        Ok(ThresholdClassifier { tie_mass, ..*self })
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point() -> DiscreteDistribution {
        DiscreteDistribution::normalize(&[(0.2, 1.0), (0.8, 1.0)]).unwrap()
    }

    #[test]
    fn build_examples() {
        let d = two_point();
        let c = ThresholdClassifier::build(&d, 0.25, QuantileChoice::Lower).unwrap();
        assert_eq!((c.threshold(), c.tie_mass()), (0.8, 0.5));
        assert_eq!(c.predicted_positive_rate(&d), 0.25);

        let c = ThresholdClassifier::build(&d, 0.5, QuantileChoice::Lower).unwrap();
        assert_eq!((c.threshold(), c.tie_mass()), (0.2, 0.0));

        let up = ThresholdClassifier::build(&d, 0.5, QuantileChoice::Upper).unwrap();
        assert_eq!((up.threshold(), up.tie_mass()), (0.8, 1.0));
        for atom in d.atoms() {
            assert_eq!(up.decision(atom.value), c.decision(atom.value));
        }
        // Off support they differ.
        assert_ne!(up.decision(0.5), c.decision(0.5));
    }

    #[test]
    fn build_rejects_bad_alpha() {
        let d = two_point();
        for alpha in [0.0, 1.0, 1.5, f64::NAN] {
            assert!(matches!(
                ThresholdClassifier::build(&d, alpha, QuantileChoice::Lower),
                Err(Error::AlphaOutOfRange(_))
            ));
        }
    }

    #[test]
    fn evaluate_examples() {
        let c = ThresholdClassifier::new(0.8, 0.5).unwrap();
        assert_eq!(c.evaluate(0.9), Ok(1.0));
        assert_eq!(c.evaluate(0.8), Ok(0.5));
        assert_eq!(c.evaluate(0.1), Ok(0.0));
        assert_eq!(c.evaluate(1.1), Err(Error::ValueOutOfRange(1.1)));
    }

    #[test]
    fn extreme_classifiers() {
        let d = DiscreteDistribution::normalize(&[(0.0, 1.0), (0.3, 2.0), (1.0, 1.0)]).unwrap();
        assert_eq!(ThresholdClassifier::new(1.0, 0.0).unwrap().predicted_positive_rate(&d), 0.0);
        assert_eq!(ThresholdClassifier::new(0.0, 1.0).unwrap().predicted_positive_rate(&d), 1.0);
        assert_eq!(ThresholdClassifier::reject_all().predicted_positive_rate(&d), 0.0);
        assert_eq!(ThresholdClassifier::accept_all().predicted_positive_rate(&d), 1.0);
    }

    #[test]
    fn sandwich_examples() {
        let c = ThresholdClassifier::new(0.8, 0.5).unwrap();
        let (lo, hi) = c.sandwich();
        assert_eq!((lo.threshold(), lo.tie_mass()), (0.8, 0.0));
        assert_eq!((hi.threshold(), hi.tie_mass()), (0.8, 1.0));

        let c = ThresholdClassifier::new(0.8, 0.0).unwrap();
        assert_eq!(c.sandwich().0, c);
        let c = ThresholdClassifier::new(0.5, 1.0).unwrap();
        assert_eq!(c.sandwich().1, c);
    }

    #[test]
    fn constructor_validation() {
        assert_eq!(ThresholdClassifier::new(1.5, 0.0), Err(Error::ThresholdOutOfRange(1.5)));
        assert_eq!(ThresholdClassifier::new(0.5, -0.1), Err(Error::MassOutOfRange(-0.1)));
        assert!(ThresholdClassifier::new(0.5, 0.5).unwrap().with_alpha(1.0).is_err());
    }

    #[test]
    fn constraint_admits() {
        assert!(ConstraintSpec::RateAtLeast(0.5).admits(0.5, 0.0));
        assert!(!ConstraintSpec::RateAtLeast(0.5).admits(0.4, 1e-12));
        assert!(ConstraintSpec::RateAtMost(0.5).admits(0.4, 0.0));
        assert!(ConstraintSpec::RateEqual(0.5).admits(0.5 + 1e-13, 1e-12));
        assert!(ConstraintSpec::Unconstrained.admits(0.99, 0.0));
        assert_eq!(ConstraintSpec::Unconstrained.alpha(), None);
        assert_eq!(ConstraintSpec::RateAtMost(0.3).alpha(), Some(0.3));
    }
}
