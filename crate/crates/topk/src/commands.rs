//! The `fit`, `eval`, `binormal`, `sweep` and `verify` commands.
//!
//! Each returns the text the binary writes, so tests can run them in-process.

use std::fmt::Write;
use std::path::Path;

use topk_core::metrics::{self, Regime};
use topk_core::oracle::{self, check_optimality, random_instance};
use topk_core::{
    BinormalModel, BinormalPluginResult, CostParams, DiscreteDistribution, LabeledDataset, MetricsReport,
    QuantileChoice, ThresholdClassifier,
};

use crate::csv_input::parse_csv;
use crate::render::{self, SweepRow};
use crate::spec_file::ClassifierSpecFile;
use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMode {
    /// Use the label column.
    #[default]
    Labels,
    /// Treat scores as the true posterior and ignore labels.
    Posterior,
}

pub fn fit(input: &Path, alpha: f64, choice: QuantileChoice) -> Result<ClassifierSpecFile> {
    let data = parse_csv(input)?;
    let classifier = fit_dataset(&data, alpha, choice)?;
    Ok(ClassifierSpecFile::new(&classifier, alpha, input.display().to_string()))
}

pub fn fit_dataset(data: &LabeledDataset, alpha: f64, choice: QuantileChoice) -> Result<ThresholdClassifier> {
    let marginal = DiscreteDistribution::from_labeled(data)?;
    Ok(ThresholdClassifier::build(&marginal, alpha, choice)?)
}

pub fn evaluate(
    data: &LabeledDataset,
    classifier: &ThresholdClassifier,
    mode: EvalMode,
    costs: &CostParams,
) -> Result<MetricsReport> {
    let report = match mode {
        EvalMode::Labels => metrics::metrics_labeled(data, classifier, costs)?,
        EvalMode::Posterior => {
            metrics::metrics_posterior(&DiscreteDistribution::from_labeled(data)?, classifier, costs)?
        }
    };
    Ok(report)
}

pub fn eval(input: &Path, spec: &Path, mode: EvalMode, costs: &CostParams) -> Result<MetricsReport> {
    let data = parse_csv(input)?;
    let classifier = ClassifierSpecFile::read(spec)?.classifier()?;
    evaluate(&data, &classifier, mode, costs)
}

pub fn binormal(model: &BinormalModel, alpha: f64, costs: &CostParams) -> Result<BinormalPluginResult> {
    Ok(model.analytic_plugin(alpha, costs)?)
}

/// Evenly spaced alphas from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaGrid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl AlphaGrid {
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self> {
        if !(start > 0.0 && start < stop && stop < 1.0) {
            return Err(CliError::Usage(format!("grid needs 0 < start < stop < 1, got {start}:{stop}")));
        }
        if steps < 2 {
            return Err(CliError::Usage(format!("grid needs at least 2 steps, got {steps}")));
        }
        Ok(AlphaGrid { start, stop, steps })
    }

    /// Parses `start:stop:steps`.
    pub fn parse(text: &str) -> Result<Self> {
        let usage = || CliError::Usage(format!("grid must look like start:stop:steps, got `{text}`"));
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, steps] = parts.as_slice() else {
            return Err(usage());
        };
        Self::new(
            start.trim().parse().map_err(|_| usage())?,
            stop.trim().parse().map_err(|_| usage())?,
            steps.trim().parse().map_err(|_| usage())?,
        )
    }

    pub fn alphas(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

pub enum SweepSource<'a> {
    Binormal(BinormalModel),
    Dataset { data: &'a LabeledDataset, mode: EvalMode, choice: QuantileChoice },
}

pub fn sweep(source: &SweepSource<'_>, grid: &AlphaGrid, costs: &CostParams) -> Result<Vec<SweepRow>> {
    grid.alphas()
        .into_iter()
        .map(|alpha| {
            let (q, m, report) = match source {
                SweepSource::Binormal(model) => {
                    let r = binormal(model, alpha, costs)?;
                    (r.q, 0.0, r.report)
                }
                SweepSource::Dataset { data, mode, choice } => {
                    let c = fit_dataset(data, alpha, *choice)?;
                    (c.threshold(), c.tie_mass(), evaluate(data, &c, *mode, costs)?)
                }
            };
            Ok(SweepRow {
                alpha,
                q,
                m,
                precision: report.precision,
                recall: report.recall,
                fpr: report.fpr,
                cost: report.cost,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySummary {
    pub trials: u64,
    pub passed: u64,
    pub worst_gap: f64,
    pub worst_seed: u64,
    /// Counts for below / above / at the Bayes threshold.
    pub regimes: [u64; 3],
    pub forced_bayes_atoms: u64,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").unwrap();
        kv("trials", self.trials.to_string());
        kv("passed", self.passed.to_string());
        kv("failed", (self.trials - self.passed).to_string());
        kv("tolerance", render::real(oracle::GAP_TOLERANCE));
        kv("worst_gap", render::real(self.worst_gap));
        kv("worst_seed", self.worst_seed.to_string());
        kv("regime_binding_below", self.regimes[0].to_string());
        kv("regime_binding_above", self.regimes[1].to_string());
        kv("regime_unconstrained", self.regimes[2].to_string());
        kv("forced_bayes_atoms", self.forced_bayes_atoms.to_string());
        kv("status", if self.all_passed() { "\"pass\"" } else { "\"fail\"" }.to_string());
        out
    }
}

/// Checks the plug-in classifier against the brute-force oracle on `trials`
/// random instances seeded `seed, seed + 1, ...`.
pub fn verify(seed: u64, trials: u64, max_atoms: usize) -> Result<VerifySummary> {
    if trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    if !(1..=oracle::MAX_ORACLE_ATOMS).contains(&max_atoms) {
        return Err(CliError::Usage(format!("max-atoms must be in [1, 16], got {max_atoms}")));
    }
    let mut summary =
        VerifySummary { trials, passed: 0, worst_gap: 0.0, worst_seed: seed, regimes: [0; 3], forced_bayes_atoms: 0 };
    for i in 0..trials {
        let instance_seed = seed.wrapping_add(i);
        let inst = random_instance(instance_seed, max_atoms)?;
        let check = check_optimality(&inst.dist, inst.alpha, &inst.costs)?;
        if check.passed() {
            summary.passed += 1;
        }
        if check.worst_gap() > summary.worst_gap {
            summary.worst_gap = check.worst_gap();
            summary.worst_seed = instance_seed;
        }
        summary.regimes[match check.regime {
            Regime::ConstraintBindingBelow => 0,
            Regime::ConstraintBindingAbove => 1,
            Regime::UnconstrainedOptimum => 2,
        }] += 1;
        summary.forced_bayes_atoms += inst.forced_bayes_atom as u64;
    }
    Ok(summary)
}
