use std::fmt;

use thiserror::Error;

/// One violated constraint found while validating a chain description.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    /// A probability row does not sum to one.
    SumViolation { location: String, sum: f64 },
    NegativeProbability { location: String, value: f64 },
    /// A birth (`a`) or death (`c`) rate vanishes on some leg.
    ZeroRate { leg: usize, depth: usize, rate: char },
    /// `alpha[index]` is zero for an index that must be positive.
    DegenerateAlpha { index: usize },
    /// Array lengths disagree with the declared number of legs.
    Shape { detail: String },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::SumViolation { .. } => "SumViolation",
            Violation::NegativeProbability { .. } => "NegativeProbability",
            Violation::ZeroRate { .. } => "ZeroRate",
            Violation::DegenerateAlpha { .. } => "DegenerateAlpha",
            Violation::Shape { .. } => "Shape",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SumViolation { location, sum } => {
                write!(f, "{location}: probabilities sum to {sum}")
            }
            Violation::NegativeProbability { location, value } => {
                write!(f, "{location}: probability {value} outside [0, 1]")
            }
            Violation::ZeroRate { leg, depth, rate } => {
                write!(f, "leg {leg}, depth {depth}: rate {rate} vanishes")
            }
            Violation::DegenerateAlpha { index } => write!(f, "alpha[{index}] must be positive"),
            Violation::Shape { detail } => f.write_str(detail),
        }
    }
}

/// Which factor sequence an entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum FactorEntry {
    X,
    Y,
    R,
    S,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid chain: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("invalid chain specification: {0}")]
    InvalidSpec(String),
    #[error("truncated operator would have {rows} rows (cap {cap})")]
    SizeOverflow { rows: usize, cap: usize },
    #[error("quadrature did not converge: refinement changed the result by {change:e} (tolerance {tol:e})")]
    QuadratureUnconverged { change: f64, tol: f64 },
    #[error("no spectral weight is available for this chain; supply one explicitly")]
    UnsupportedWeight,
    #[error("evaluation point is {distance:e} away from the support of the measure")]
    PoleTooClose { distance: f64 },
    #[error("Stieltjes assembly is singular at this point")]
    SingularAssembly,
    #[error("continued fraction hypothesis 0 < A < B fails on leg {leg} at depth {depth}")]
    HypothesisViolated { leg: usize, depth: usize },
    #[error("continued fraction on leg {leg} did not settle within {depth} convergents")]
    DepthExceeded { leg: usize, depth: usize },
    #[error("factor entry {entry:?} = {value} on leg {leg} at depth {depth} is not a probability")]
    NotStochastic {
        depth: usize,
        leg: usize,
        entry: FactorEntry,
        value: f64,
    },
    #[error("division by a vanishing factor entry on leg {leg} at depth {depth}")]
    DegenerateDivision { depth: usize, leg: usize },
    #[error("invalid beta vector: {0}")]
    InvalidBeta(String),
    #[error("Geronimus transform is singular (beta_0 vanishes)")]
    SingularGeronimus,
    #[error("zero lies in the support of the weight")]
    ZeroInSupport,
    #[error("Geronimus atom at zero is not nonnegative definite (smallest eigenvalue {min_eigenvalue:e})")]
    NegativeAtomMass { min_eigenvalue: f64 },
    #[error("x = {x} lies outside the support")]
    OutOfSupport { x: f64 },
    #[error("atom direction degenerates because 1 - alpha_0 - a vanishes")]
    DegenerateDirection,
    #[error("the chain does not have constant transition probabilities")]
    NotConstant,
    #[error("state indexing of empirical and exact distributions differ")]
    IndexMismatch,
    #[error("level {level} is outside a truncation with {levels} levels")]
    LevelOutOfRange { level: usize, levels: usize },
    #[error("factorization does not reach level {0}")]
    FactorDepth(usize),
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Stable name of the variant, used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Invalid(_) => "Invalid",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::SizeOverflow { .. } => "SizeOverflow",
            Error::QuadratureUnconverged { .. } => "QuadratureUnconverged",
            Error::UnsupportedWeight => "UnsupportedWeight",
            Error::PoleTooClose { .. } => "PoleTooClose",
            Error::SingularAssembly => "SingularAssembly",
            Error::HypothesisViolated { .. } => "HypothesisViolated",
            Error::DepthExceeded { .. } => "DepthExceeded",
            Error::NotStochastic { .. } => "NotStochastic",
            Error::DegenerateDivision { .. } => "DegenerateDivision",
            Error::InvalidBeta(_) => "InvalidBeta",
            Error::SingularGeronimus => "SingularGeronimus",
            Error::ZeroInSupport => "ZeroInSupport",
            Error::NegativeAtomMass { .. } => "NegativeAtomMass",
            Error::OutOfSupport { .. } => "OutOfSupport",
            Error::DegenerateDirection => "DegenerateDirection",
            Error::NotConstant => "NotConstant",
            Error::IndexMismatch => "IndexMismatch",
            Error::LevelOutOfRange { .. } => "LevelOutOfRange",
            Error::FactorDepth(_) => "FactorDepth",
            Error::Io(_) => "Io",
        }
    }
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
