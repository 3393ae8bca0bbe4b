//! Finite distributions of the posterior positive-class probability.

use alloc::vec::Vec;

use crate::dataset::LabeledDataset;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub value: f64,
    pub mass: f64,
}

/// A probability measure on finitely many points of `[0,1]`.
///
/// Atom values are strictly increasing and masses are positive and sum to
/// one. Values are compared exactly; nearby values are never merged.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    atoms: Vec<Atom>,
}

/// `P[Z < z]`, `P[Z = z]` and `P[Z > z]` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfParts {
    pub below: f64,
    pub at: f64,
    pub above: f64,
}

impl CdfParts {
    /// `P[Z <= z]`.
    pub fn at_or_below(&self) -> f64 {
        self.below + self.at
    }

    /// Whether `z` is a `level`-quantile: `P[Z < z] <= level <= P[Z <= z]`.
    pub fn is_quantile(&self, level: f64) -> bool {
        self.below <= level && level <= self.at_or_below()
    }
}

/// The closed interval of all quantiles at a given level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileSet {
    pub lo: f64,
    pub hi: f64,
}

impl QuantileSet {
    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, z: f64) -> bool {
        self.lo <= z && z <= self.hi
    }
}

impl DiscreteDistribution {
    /// Builds a distribution from `(value, weight)` pairs, merging equal
    /// values and rescaling the weights to sum to one.
    pub fn normalize(raw: &[(f64, f64)]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for &(value, weight) in raw {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ValueOutOfRange(value));
            }
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(Error::NonPositiveWeight(weight));
            }
        }

        let mut sorted = raw.to_vec();
        sorted.sort_by(|x, y| x.0.total_cmp(&y.0));

        let mut merged: Vec<Atom> = Vec::with_capacity(sorted.len());
        for (value, weight) in sorted {
            match merged.last_mut() {
                Some(last) if last.value == value => last.mass += weight,
                _ => merged.push(Atom { value, mass: weight }),
            }
        }

        let total: f64 = merged.iter().map(|a| a.mass).sum();
        if !total.is_finite() {
            return Err(Error::NonPositiveWeight(total));
        }
        for atom in &mut merged {
            atom.mass /= total;
        }
        Ok(DiscreteDistribution { atoms: merged })
    }

    /// Weighted marginal of the score column; labels are ignored.
    pub fn from_labeled(data: &LabeledDataset) -> Result<Self> {
        let raw: Vec<(f64, f64)> = data.records().iter().map(|r| (r.score, r.weight)).collect();
        Self::normalize(&raw)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `E[Z]`, which equals `P[A]` when `Z` is the true posterior.
    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass * a.value).sum()
    }

    pub fn cdf_parts(&self, z: f64) -> CdfParts {
        let mut parts = CdfParts { below: 0.0, at: 0.0, above: 0.0 };
        for atom in &self.atoms {
            if atom.value < z {
                parts.below += atom.mass;
            } else if atom.value == z {
                parts.at += atom.mass;
            } else {
                parts.above += atom.mass;
            }
        }
        // Normalized masses may sum to 1 + ulp.
        parts.below = parts.below.min(1.0);
        parts.at = parts.at.min(1.0);
        parts.above = parts.above.min(1.0);
        parts
    }

    /// All `z` with `P[Z < z] <= level <= P[Z <= z]`.
    ///
    /// `lo` is the conventional quantile `min { z : P[Z <= z] >= level }`.
    /// The set is a proper interval only when the CDF equals `level` exactly
    /// on a gap between two atoms.
    pub fn quantile_set(&self, level: f64) -> Result<QuantileSet> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::LevelOutOfRange(level));
        }
        // Cumulative sums in ascending order, matching `cdf_parts` bit for bit.
        let mut cumulative = 0.0;
        let last = self.atoms.len() - 1;
        for (i, atom) in self.atoms.iter().enumerate() {
            cumulative += atom.mass;
            if cumulative >= level {
                let hi = if i < last && cumulative <= level {
                    self.atoms[i + 1].value
                } else {
                    atom.value
                };
                return Ok(QuantileSet { lo: atom.value, hi });
            }
        }
        // Masses summed a hair below `level`; the top atom is the quantile.
        let top = self.atoms[last].value;
        Ok(QuantileSet { lo: top, hi: top })
    }
}
