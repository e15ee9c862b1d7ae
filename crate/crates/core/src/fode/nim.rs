//! Iteration `K^m = c I^α[K^{m-1}]` on the integral form of a linear fractional equation.

use crate::fracalc::{caputo_deriv, rl_integral, FracOrder};
use crate::series::{ExponentVector, GenSeries};

use super::FodeError;

/// `D^order K = coeff * K + forcing` with Taylor part `initial`.
///
/// The integral form is `K = g0 + coeff * I^order[K]` with `g0 = initial + I^order[forcing]`.
#[derive(Debug, Clone)]
pub struct NimProblem {
    pub var: usize,
    pub order: ExponentVector,
    pub coeff: f64,
    pub initial: GenSeries<f64>,
    pub forcing: GenSeries<f64>,
}

#[derive(Debug, Clone)]
pub struct NimResult {
    /// `K^0 = g0`, `K^1`, …
    pub iterates: Vec<GenSeries<f64>>,
    /// `S_m = K^0 + … + K^m`.
    pub partial_sums: Vec<GenSeries<f64>>,
}

impl NimResult {
    pub fn solution(&self) -> &GenSeries<f64> {
        self.partial_sums.last().expect("at least the source term")
    }
}

impl NimProblem {
    fn order(&self) -> Result<FracOrder, FodeError> {
        Ok(FracOrder::new(self.order, self.initial.params())?)
    }

    pub fn source(&self) -> Result<GenSeries<f64>, FodeError> {
        Ok(self.initial.add(&rl_integral(&self.forcing, self.var, &self.order()?)?)?)
    }
}

/// Runs `n_iters` iterations; stops early once the operator annihilates the iterate.
pub fn nim_solve(problem: &NimProblem, n_iters: usize) -> Result<NimResult, FodeError> {
    let order = problem.order()?;
    let g0 = problem.source()?;
    let mut iterates = vec![g0.clone()];
    let mut partial_sums = vec![g0];
    for m in 1..=n_iters {
        let prev = iterates.last().expect("nonempty");
        let next = rl_integral(prev, problem.var, &order)?.scale(problem.coeff);
        if next.is_zero() {
            if problem.coeff != 0.0 && !prev.is_zero() {
                return Err(FodeError::TruncationStall { iteration: m });
            }
            break;
        }
        let sum = partial_sums.last().expect("nonempty").add(&next)?;
        iterates.push(next);
        partial_sums.push(sum);
    }
    Ok(NimResult { iterates, partial_sums })
}

/// Equation defect `D^α K - c K - forcing` below the common frontier.
pub fn nim_residual(problem: &NimProblem, k: &GenSeries<f64>) -> Result<GenSeries<f64>, FodeError> {
    let d = caputo_deriv(k, problem.var, &problem.order()?)?;
    let defect = d.sub(&k.scale(problem.coeff))?.sub(&problem.forcing)?;
    let cut: Vec<f64> = d.precision().iter().zip(k.precision()).map(|(a, b)| a.min(*b)).collect();
    Ok(defect.restrict_below(&cut))
}
