use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use topk::commands::{self, AlphaGrid, EvalMode, SweepSource};
use topk::csv_input::parse_csv;
use topk::{render, CliError};
use topk_core::{BinormalModel, CostParams, QuantileChoice};

/// Optimal plug-in classifiers for precision@k, recall@k and cost-sensitive
/// classification under a predicted-positive-rate constraint.
#[derive(Parser)]
#[command(name = "topk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Costs {
    /// Cost of a missed positive.
    #[arg(long = "cost-a", default_value_t = 1.0)]
    a: f64,
    /// Cost of a false positive.
    #[arg(long = "cost-b", default_value_t = 1.0)]
    b: f64,
}

#[derive(clap::Args)]
struct Model {
    /// Positive prevalence.
    #[arg(long)]
    p: f64,
    /// Negative-class mean.
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,
    /// Positive-class mean.
    #[arg(long, allow_negative_numbers = true)]
    nu: f64,
    /// Common standard deviation.
    #[arg(long, allow_negative_numbers = true)]
    sigma: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantile {
    Lower,
    Upper,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Labels,
    Posterior,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the plug-in classifier for top fraction alpha on a scored CSV.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "lower")]
        quantile: Quantile,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a fitted classifier on a scored CSV.
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "labels")]
        mode: Mode,
        #[command(flatten)]
        costs: Costs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Closed-form optimal classifier for the equal-variance binormal model.
    Binormal {
        #[command(flatten)]
        model: Model,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[command(flatten)]
        costs: Costs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tabulate the optimal classifier over a grid of alphas.
    Sweep {
        /// Scored CSV; without it the binormal model flags are required.
        #[arg(long, conflicts_with_all = ["p", "mu", "nu", "sigma"])]
        input: Option<PathBuf>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        mu: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        nu: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        sigma: Option<f64>,
        /// start:stop:steps
        #[arg(long, default_value = "0.05:0.95:19")]
        grid: String,
        #[arg(long, value_enum, default_value = "labels")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "lower")]
        quantile: Quantile,
        #[command(flatten)]
        costs: Costs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check optimality against the brute-force oracle on random instances.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long = "max-atoms", default_value_t = 10)]
        max_atoms: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

impl From<Quantile> for QuantileChoice {
    fn from(q: Quantile) -> Self {
        match q {
            Quantile::Lower => QuantileChoice::Lower,
            Quantile::Upper => QuantileChoice::Upper,
        }
    }
}

impl From<Mode> for EvalMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Labels => EvalMode::Labels,
            Mode::Posterior => EvalMode::Posterior,
        }
    }
}

impl Costs {
    fn params(&self) -> Result<CostParams, CliError> {
        Ok(CostParams::new(self.a, self.b)?)
    }
}

impl Model {
    fn build(&self) -> Result<BinormalModel, CliError> {
        Ok(BinormalModel::new(self.p, self.mu, self.nu, self.sigma)?)
    }
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

/// Returns whether verification (if any) passed.
fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Fit { input, alpha, quantile, output } => {
            let spec = commands::fit(&input, alpha, quantile.into())?;
            emit(output.as_ref(), &spec.to_text())?;
        }
        Command::Eval { input, spec, mode, costs, output } => {
            let report = commands::eval(&input, &spec, mode.into(), &costs.params()?)?;
            emit(output.as_ref(), &render::metrics_report(&report))?;
        }
        Command::Binormal { model, alpha, costs, output } => {
            let result = commands::binormal(&model.build()?, alpha, &costs.params()?)?;
            emit(output.as_ref(), &render::binormal_result(&result))?;
        }
        Command::Sweep { input, p, mu, nu, sigma, grid, mode, quantile, costs, output } => {
            let grid = AlphaGrid::parse(&grid)?;
            let costs = costs.params()?;
            let rows = match input {
                Some(path) => {
                    let data = parse_csv(&path)?;
                    let source = SweepSource::Dataset { data: &data, mode: mode.into(), choice: quantile.into() };
                    commands::sweep(&source, &grid, &costs)?
                }
                None => {
                    let (Some(p), Some(mu), Some(nu), Some(sigma)) = (p, mu, nu, sigma) else {
                        return Err(CliError::Usage("sweep needs --input or all of --p --mu --nu --sigma".into()));
                    };
                    let model = Model { p, mu, nu, sigma }.build()?;
                    commands::sweep(&SweepSource::Binormal(model), &grid, &costs)?
                }
            };
            emit(output.as_ref(), &render::sweep_table(&rows))?;
        }
        Command::Verify { seed, trials, max_atoms, output } => {
            let summary = commands::verify(seed, trials, max_atoms)?;
            emit(output.as_ref(), &summary.to_text())?;
            return Ok(summary.all_passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
