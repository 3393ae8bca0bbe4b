//! Optimal plug-in classifiers for cost-sensitive classification under a
//! constraint on the predicted positive rate.
//!
//! Thresholding the posterior positive-class probability `Z = P[A | features]`
//! at a `(1 - alpha)`-quantile `q`, and randomizing on the atom `{Z = q}` so
//! that exactly a fraction `alpha` is predicted positive, yields a classifier
//! that minimizes the expected cost `a * E[(1-H) 1_A] + b * E[H 1_{A^c}]`
//! among all randomized classifiers with the matching rate constraint. The
//! same classifier maximizes precision@k and recall@k.
//!
//! The crate is `no_std` and only needs `alloc`:
//!
//! - [`dist`]: finite distributions of the posterior, CDFs and quantile sets.
//! - [`plugin`]: construction and evaluation of the threshold classifier.
//! - [`metrics`]: cost, precision, recall, FPR/TPR on posteriors or labels.
//! - [`binormal`]: the equal-variance two-normal population in closed form.
//! - [`oracle`]: brute-force LP vertex enumeration that checks optimality.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod binormal;
pub mod dataset;
pub mod dist;
mod error;
pub mod metrics;
pub mod normal;
pub mod oracle;
pub mod plugin;

pub use binormal::{BinormalModel, BinormalPluginResult};
pub use dataset::{Label, LabeledDataset, Record};
pub use dist::{Atom, CdfParts, DiscreteDistribution, QuantileSet};
pub use error::{Error, Result};
pub use metrics::{CostParams, MetricsReport, Regime};
pub use oracle::{OracleResult, OptimalityCheck};
pub use plugin::{ConstraintSpec, QuantileChoice, ThresholdClassifier};
