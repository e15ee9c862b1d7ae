//! Solvers for reduced systems of fractional ODEs.

mod adams;
mod ansatz;
mod nim;
mod series_solver;

use std::sync::Arc;

use thiserror::Error;

use crate::fracalc::{caputo_deriv, sequential_deriv, FracError, FracOrder};
use crate::operators::{FodeEquation, FodeSystem};
use crate::series::{GenSeries, Poly, SeriesContext, SeriesError};
use crate::specfun::SpecFunError;

pub use adams::{adams_pece, AdamsProblem, Trajectory};
pub use ansatz::{power_law_ratio, solve_power_ansatz, FreeBindings};
pub use nim::{nim_residual, nim_solve, NimProblem, NimResult};
pub use series_solver::{solve_series, InitialData, LATTICE_CAP};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FodeError {
    #[error("exponent lattice has {points} points, more than the cap of {cap}")]
    Lattice { points: usize, cap: usize },
    #[error("inconsistent system: {0}")]
    Inconsistent(String),
    #[error("unsupported system: {0}")]
    Unsupported(String),
    #[error("unknown {unknown} needs {expected} initial values, got {got}")]
    InitialData { unknown: String, expected: usize, got: usize },
    #[error("no power-law solution: {0}")]
    NoPowerLawSolution(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("iterate {iteration} vanished below the truncation frontier")]
    TruncationStall { iteration: usize },
    #[error("step error: {0}")]
    Step(String),
    #[error(transparent)]
    Frac(#[from] FracError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// Named closed-form family a solution belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ClosedForm {
    MittagLeffler,
    FracTrig,
    EpsilonSeries,
    PowerLaw,
    Polynomial,
    /// Partial sums of iterated fractional integrals.
    IteratedIntegral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreeConstant {
    pub name: String,
    pub value: f64,
}

/// Coefficient functions `K_u(t)`, indexed like the system's unknowns.
#[derive(Debug, Clone)]
pub struct FodeSolution {
    pub components: Vec<GenSeries<f64>>,
    pub form: Option<ClosedForm>,
    pub free: Vec<FreeConstant>,
}

impl FodeSolution {
    pub fn new(components: Vec<GenSeries<f64>>) -> Self {
        Self { components, form: None, free: Vec::new() }
    }

    pub fn tagged(mut self, form: ClosedForm) -> Self {
        self.form = Some(form);
        self
    }

    pub fn free_value(&self, name: &str) -> Option<f64> {
        self.free.iter().find(|c| c.name == name).map(|c| c.value)
    }
}

/// Evaluates `p` with symbol `s` replaced by `values[s]`.
pub(crate) fn eval_poly(
    p: &Poly,
    values: &[GenSeries<f64>],
    ctx: &Arc<SeriesContext>,
    bound: f64,
) -> Result<GenSeries<f64>, SeriesError> {
    let mut acc = GenSeries::zero(ctx).set_bound(bound);
    for (m, c) in p.terms() {
        let mut term = GenSeries::constant(ctx, c).set_bound(bound);
        for &(s, e) in m.factors() {
            term = term.mul(&values[s as usize].pow(e)?)?;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Values of every polynomial symbol: the unknowns, then their mixed time derivatives.
pub(crate) fn symbol_values(sys: &FodeSystem, unknowns: &[GenSeries<f64>]) -> Result<Vec<GenSeries<f64>>, FodeError> {
    let params = sys.ctx.params();
    sys.symbols
        .symbols
        .iter()
        .map(|s| match &s.time_order {
            None => Ok(unknowns[s.unknown].clone()),
            Some(o) => Ok(caputo_deriv(&unknowns[s.unknown], 0, &FracOrder::new(*o, params)?)?),
        })
        .collect()
}

pub(crate) fn lhs_series(sys: &FodeSystem, eq: &FodeEquation, k: &GenSeries<f64>) -> Result<GenSeries<f64>, FodeError> {
    let params = sys.ctx.params();
    let mut acc = GenSeries::zero(&sys.ctx).set_bound(k.bound()[0]);
    for term in &eq.lhs {
        let d = sequential_deriv(k, 0, &FracOrder::new(term.order, params)?, term.times, term.kind)?;
        acc = acc.add(&d.scale(term.coeff))?;
    }
    Ok(acc)
}

/// Termwise defect of a solution substituted into its system.
#[derive(Debug, Clone)]
pub struct FodeResidual {
    /// Largest defect coefficient per equation, below the common frontier.
    pub per_equation: Vec<f64>,
    /// Largest coefficient of the solution.
    pub scale: f64,
    pub frontier: f64,
}

impl FodeResidual {
    pub fn max_relative(&self) -> f64 {
        self.per_equation.iter().copied().fold(0.0, f64::max) / self.scale.max(1.0)
    }
}

/// Substitutes `sol` into `sys` and compares both sides term by term.
pub fn fode_residual(sys: &FodeSystem, sol: &FodeSolution) -> Result<FodeResidual, FodeError> {
    let n = sys.unknown_names().len();
    if sol.components.len() != n {
        return Err(FodeError::Inconsistent(format!("solution has {} components, system has {n} unknowns", sol.components.len())));
    }
    let bound = sol.components.iter().map(|c| c.bound()[0]).fold(f64::INFINITY, f64::min);
    let values = symbol_values(sys, &sol.components)?;
    let mut per_equation = Vec::with_capacity(sys.equations.len());
    let mut frontier = f64::INFINITY;
    for eq in &sys.equations {
        let lhs = lhs_series(sys, eq, &sol.components[eq.unknown])?;
        let rhs = eval_poly(&eq.rhs, &values, &sys.ctx, bound)?;
        let cut = lhs.precision()[0].min(rhs.precision()[0]);
        frontier = frontier.min(cut);
        let mut limit = vec![f64::INFINITY; sys.ctx.nvars()];
        limit[0] = cut;
        per_equation.push(lhs.sub(&rhs)?.restrict_below(&limit).max_magnitude());
    }
    let scale = sol.components.iter().map(GenSeries::max_magnitude).fold(0.0, f64::max);
    Ok(FodeResidual { per_equation, scale, frontier })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracalc::DerivKind;
    use crate::operators::{SymbolTable, TimeTerm};
    use crate::series::{ExponentVector, MlTerm, ParamTable};

    #[test]
    fn ml_solution_has_no_defect() {
        let p = ParamTable::new(vec![("alpha".into(), 0.7)]).unwrap();
        let ctx = SeriesContext::new(vec!["t".into()], p.clone()).unwrap();
        let alpha = p.symbol("alpha").unwrap();
        let sys = FodeSystem {
            ctx: Arc::clone(&ctx),
            symbols: SymbolTable::new(vec!["K".into()], &[], &p),
            equations: vec![FodeEquation {
                unknown: 0,
                lhs: vec![TimeTerm::new(1.0, alpha, DerivKind::Caputo)],
                rhs: Poly::var(0).scale(-2.0),
            }],
        };
        let k = MlTerm::new(0, alpha, ExponentVector::integer(1), -2.0).expand(&ctx).unwrap();
        let good = fode_residual(&sys, &FodeSolution::new(vec![k.clone()])).unwrap();
        assert!(good.max_relative() < 1e-14, "{good:?}");
        let bad = fode_residual(&sys, &FodeSolution::new(vec![k.scale(1.0 + 1e-6).add(&GenSeries::constant(&ctx, 0.1)).unwrap()]))
            .unwrap();
        assert!(bad.max_relative() > 1e-3);
    }
}
