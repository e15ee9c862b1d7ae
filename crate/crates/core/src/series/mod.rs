//! Generalized power series with exact symbolic exponents.

mod builders;
mod coeff;
mod exponent;
mod fit;
mod genseries;
mod params;
mod poly;

use thiserror::Error;

pub use builders::{frac_cos_series, frac_sin_series, gamma_exp, power_term, rgamma_exp, MlTerm};
pub use coeff::{Coeff, CANCEL_TOL};
pub use exponent::{ExponentVector, MAX_SYMBOLS};
pub use fit::{fit_to_basis, Fit, FIT_TOL};
pub use genseries::{Exps, GenSeries, SeriesContext, SeriesEvaluator, DEFAULT_TRUNCATION, EXPONENT_EPS, MAX_VARS};
pub use params::ParamTable;
pub use poly::{Monomial, Poly, PolyAccumulator};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("series have different variables or parameters")]
    VariableMismatch,
    #[error("cannot raise {base} to the power {exponent}")]
    Domain { base: f64, exponent: f64 },
    #[error("polynomial coefficients must be specialized before evaluation")]
    UnspecializedPoly,
    #[error("basis series are linearly dependent")]
    DependentBasis,
    #[error("series is not in the span of the basis ({residual_terms} residual terms)")]
    NotInSpan { residual_terms: usize },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("{0}")]
    Parse(String),
    #[error("gamma pole at {0}")]
    Pole(String),
}
