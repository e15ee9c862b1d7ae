//! Invariant subspace engine: operator trees, invariance, reduction and residuals.

mod expr;
mod residual;
mod system;

use thiserror::Error;

use crate::fracalc::FracError;
use crate::series::SeriesError;

pub use expr::{apply, Inputs, OperatorExpr};
pub use residual::{residual, Grid, ResidualReport, SolutionForm};
pub use system::{
    ComponentFit, ComponentSpec, FodeEquation, FodeSystem, InvarianceReport, PdeSystem, PolySymbol, SymbolTable, TimeTerm,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("at {path}: {source}")]
    Frac { path: String, source: FracError },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("component {0} is not defined")]
    Component(usize),
    #[error("mixed time derivatives need a linear operand")]
    NonlinearMixed,
    #[error("subspace is not invariant for {0}")]
    NotInvariant(String),
    #[error("{0}")]
    Invalid(String),
}
