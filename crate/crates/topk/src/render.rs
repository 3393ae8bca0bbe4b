//! Stable `key = value` rendering of reports.
//!
//! Reals are written with 17 significant digits in exponent form, which
//! round-trips every `f64`. The output is valid TOML.

use std::fmt::Write;

use topk_core::{BinormalPluginResult, MetricsReport};

pub const UNDEFINED: &str = "undefined";

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn maybe_real(x: Option<f64>) -> String {
    x.map_or_else(|| UNDEFINED.to_string(), real)
}

fn line(out: &mut String, key: &str, value: &str) {
    writeln!(out, "{key} = {value}").unwrap();
}

pub fn metrics_report(r: &MetricsReport) -> String {
    let mut out = String::new();
    write_metrics(&mut out, r);
    out
}

fn write_metrics(out: &mut String, r: &MetricsReport) {
    line(out, "cost", &real(r.cost));
    let precision = match r.precision {
        Some(p) => real(p),
        None => format!("\"{UNDEFINED}\""),
    };
    line(out, "precision", &precision);
    line(out, "recall", &real(r.recall));
    line(out, "tpr", &real(r.tpr));
    line(out, "fpr", &real(r.fpr));
    line(out, "ppr", &real(r.ppr));
    line(out, "prevalence", &real(r.positive_prevalence));
}

pub fn binormal_result(r: &BinormalPluginResult) -> String {
    let mut out = String::new();
    line(&mut out, "x_alpha", &real(r.x_alpha));
    line(&mut out, "q", &real(r.q));
    line(&mut out, "m", &real(0.0));
    line(&mut out, "coeff_a", &real(r.coeff_a));
    line(&mut out, "coeff_b", &real(r.coeff_b));
    write_metrics(&mut out, &r.report);
    out
}

/// One row of an alpha sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub q: f64,
    pub m: f64,
    pub precision: Option<f64>,
    pub recall: f64,
    pub fpr: f64,
    pub cost: f64,
}

pub const SWEEP_HEADER: &str = "alpha,q,m,precision,recall,fpr,cost";

pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{SWEEP_HEADER}").unwrap();
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            real(r.alpha),
            real(r.q),
            real(r.m),
            maybe_real(r.precision),
            real(r.recall),
            real(r.fpr),
            real(r.cost)
        )
        .unwrap();
    }
    let column = |f: fn(&SweepRow) -> Option<f64>| rows.iter().filter_map(f).collect::<Vec<_>>();
    writeln!(out, "# q: {}", monotonicity(&column(|r| Some(r.q)))).unwrap();
    writeln!(out, "# precision: {}", monotonicity(&column(|r| r.precision))).unwrap();
    writeln!(out, "# recall: {}", monotonicity(&column(|r| Some(r.recall)))).unwrap();
    writeln!(out, "# fpr: {}", monotonicity(&column(|r| Some(r.fpr)))).unwrap();
    out
}

/// Classifies a sequence as strictly or weakly monotone, constant, or neither.
pub fn monotonicity(values: &[f64]) -> &'static str {
    let pairs = || values.windows(2).map(|w| (w[0], w[1]));
    if pairs().all(|(x, y)| x == y) {
        "constant"
    } else if pairs().all(|(x, y)| x < y) {
        "strictly increasing"
    } else if pairs().all(|(x, y)| x <= y) {
        "nondecreasing"
    } else if pairs().all(|(x, y)| x > y) {
        "strictly decreasing"
    } else if pairs().all(|(x, y)| x >= y) {
        "nonincreasing"
    } else {
        "not monotone"
    }
}
