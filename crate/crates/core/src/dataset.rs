//! Weighted records of (posterior score, class label).

use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    /// `+1` for positive, `-1` for negative.
    pub fn sign(self) -> i8 {
        match self {
            Label::Positive => 1,
            Label::Negative => -1,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub score: f64,
    pub label: Label,
    pub weight: f64,
}

impl Record {
    pub fn new(score: f64, label: Label, weight: f64) -> Self {
        Record { score, label, weight }
    }
}

/// The empirical joint distribution of score and label.
///
/// Scores lie in `[0,1]` and weights are positive; weights are not normalized
/// here, consumers divide by [`LabeledDataset::total_weight`].
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    records: Vec<Record>,
}

impl LabeledDataset {
    pub fn new(records: Vec<Record>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyDataset);
        }
        for r in &records {
            if !(0.0..=1.0).contains(&r.score) {
                return Err(Error::ValueOutOfRange(r.score));
            }
            if !(r.weight > 0.0 && r.weight.is_finite()) {
                return Err(Error::NonPositiveWeight(r.weight));
            }
        }
        Ok(LabeledDataset { records })
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.records.iter().map(|r| r.weight).sum()
    }

    /// Weighted fraction of positive records.
    pub fn positive_prevalence(&self) -> f64 {
        let pos: f64 = self
            .records
            .iter()
            .filter(|r| r.label.is_positive())
            .map(|r| r.weight)
            .sum();
        pos / self.total_weight()
    }
}
