use thiserror::Error;

use crate::parse::ParseError;

/// Every failure a densitylab computation can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error("invalid set expression: {0}")]
    InvalidSet(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient horizon: {0}")]
    InsufficientHorizon(String),

    #[error("search for element {index} exceeded horizon cap {cap}")]
    HorizonExceeded { index: u64, cap: u64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("filter limit did not converge (tail spread {spread:.3e}){}", atom_suffix(*.atom))]
    NonConvergent { spread: f64, atom: Option<usize> },

    #[error("sets are not disjoint: both contain {element}")]
    NotDisjoint { element: u64 },

    #[error("target {target} outside estimated range [{lower}, {upper}]")]
    OutOfRange { target: f64, lower: f64, upper: f64 },

    #[error("fewer than two elements in the tail window [{from}, {to}]")]
    InsufficientElements { from: u64, to: u64 },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

fn atom_suffix(atom: Option<usize>) -> String {
    match atom {
        Some(i) => format!(" in atom {i}"),
        None => String::new(),
    }
}

impl DensityError {
    pub(crate) fn with_atom(self, index: usize) -> Self {
        match self {
            DensityError::NonConvergent { spread, .. } => DensityError::NonConvergent {
                spread,
                atom: Some(index),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, DensityError>;
