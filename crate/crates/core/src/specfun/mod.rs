//! Real-argument special functions.

mod gamma;
mod laplace;
mod mittag_leffler;

use thiserror::Error;

pub use gamma::{gamma_real, is_gamma_pole, ln_gamma, rgamma, sin_pi};
pub use laplace::{laplace_horizon, laplace_numeric, GRADING_DEPTH};
pub use mittag_leffler::{
    epsilon_fn, epsilon_transform, frac_cos, frac_sin, mittag_leffler, mittag_leffler_capped, ml_derivative,
    FracTrigParams, KernelSign, MLParams, DEFAULT_TERM_CAP, DEFAULT_TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("gamma function pole at {0}")]
    Pole(f64),
    #[error("series did not converge within {terms} terms at argument {z}")]
    Convergence { terms: usize, z: f64 },
    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tol:e}")]
    Quadrature { estimate: f64, tol: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
