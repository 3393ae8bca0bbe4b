//! `score,label[,weight]` CSV files.
//!
//! Labels are `1`/`+1` for positive and `-1`/`0` for negative. Lines starting
//! with `#` are comments. Weight defaults to 1.

use std::io::Read;
use std::path::{Path, PathBuf};

use topk_core::{Label, LabeledDataset, Record};

use crate::{CliError, Result};

pub fn parse_csv(path: &Path) -> Result<LabeledDataset> {
    let file = std::fs::File::open(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    parse_csv_reader(file, path)
}

/// Parses from any reader; `origin` is only used in error messages.
pub fn parse_csv_reader<R: Read>(reader: R, origin: &Path) -> Result<LabeledDataset> {
    let origin: PathBuf = origin.into();
    let csv_err = |source| CliError::Csv { path: origin.clone(), source };
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr.headers().map_err(csv_err)?.clone();
    let column = |name: &'static str| headers.iter().position(|h| h == name);
    let score_col = column("score").ok_or(CliError::MissingColumn { path: origin.clone(), column: "score" })?;
    let label_col = column("label").ok_or(CliError::MissingColumn { path: origin.clone(), column: "label" })?;
    let weight_col = column("weight");

    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_err)?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |message: String| CliError::BadRow { path: origin.clone(), line, message };
        let field = |i: usize| row.get(i).unwrap_or("");

        let score_text = field(score_col);
        let score: f64 = score_text.parse().map_err(|_| bad(format!("malformed score `{score_text}`")))?;
        if !(0.0..=1.0).contains(&score) {
            return Err(bad(format!("score {score_text} outside [0,1]")));
        }
        let label = parse_label(field(label_col)).ok_or_else(|| bad(format!("unknown label `{}`", field(label_col))))?;
        let weight = match weight_col {
            Some(i) => {
                let text = field(i);
                let w: f64 = text.parse().map_err(|_| bad(format!("malformed weight `{text}`")))?;
                if !(w > 0.0 && w.is_finite()) {
                    return Err(bad(format!("weight {text} must be positive")));
                }
                w
            }
            None => 1.0,
        };
        records.push(Record::new(score, label, weight));
    }
    Ok(LabeledDataset::new(records)?)
}

fn parse_label(token: &str) -> Option<Label> {
    match token {
        "1" | "+1" => Some(Label::Positive),
        "-1" | "0" => Some(Label::Negative),
        _ => None,
    }
}
