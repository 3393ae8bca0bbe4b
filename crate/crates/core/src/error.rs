use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distribution needs at least one atom")]
    EmptyDistribution,
    #[error("dataset needs at least one record")]
    EmptyDataset,
    #[error("weight must be positive and finite, got {0}")]
    NonPositiveWeight(f64),
    #[error("posterior value must be in [0,1], got {0}")]
    ValueOutOfRange(f64),
    #[error("alpha must be in (0,1), got {0}")]
    AlphaOutOfRange(f64),
    #[error("quantile level must be in (0,1), got {0}")]
    LevelOutOfRange(f64),
    #[error("threshold must be in [0,1], got {0}")]
    ThresholdOutOfRange(f64),
    #[error("randomization mass must be in [0,1], got {0}")]
    MassOutOfRange(f64),
    #[error("randomization mass {0} outside [0,1]: quantile and CDF are inconsistent")]
    InconsistentMass(f64),
    #[error("costs need a >= 0, b >= 0 and a + b > 0, got a = {a}, b = {b}")]
    InvalidCosts { a: f64, b: f64 },
    #[error("positive prevalence must be in (0,1), got {0}")]
    DegeneratePrevalence(f64),
    #[error("p must be in (0,1), got {0}")]
    PrevalenceOutOfRange(f64),
    #[error("mu must be < nu, got mu = {mu}, nu = {nu}")]
    MeanOrder { mu: f64, nu: f64 },
    #[error("sigma must be > 0, got {0}")]
    NonPositiveSigma(f64),
    #[error("model parameters must be finite")]
    NonFiniteParameter,
    #[error("bracket expansion exceeded 60 doublings")]
    BracketExpansion,
    #[error("sample size must be at least 1")]
    EmptySample,
    #[error("oracle enumeration supports at most {max} atoms, got {got}")]
    TooManyAtoms { got: usize, max: usize },
    #[error("max_atoms must be in [1, 16], got {0}")]
    MaxAtomsOutOfRange(usize),
    #[error("no classifier satisfies the rate constraint")]
    Infeasible,
}
