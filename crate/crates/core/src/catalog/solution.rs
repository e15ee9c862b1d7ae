//! Closed-form coefficient functions `K(t)`, as series and as pointwise values.

use std::fmt;
use std::sync::Arc;

use crate::fode::{ClosedForm, FodeSolution, FreeBindings, FreeConstant};
use crate::operators::SolutionForm;
use crate::series::{ExponentVector, Exps, GenSeries, MlTerm, ParamTable, SeriesContext, SeriesError};
use crate::specfun::{ml_derivative, MLParams, DEFAULT_TOL};

use super::doc::ProblemSpec;
use super::CatalogError;

/// `sum_m scale ratio^m / m! * t^{shift0 + m dshift} E^{(m)}_{alpha, beta0 + m dbeta}(arg t^alpha)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MlSeriesSum {
    pub alpha: ExponentVector,
    pub arg: f64,
    pub beta0: ExponentVector,
    pub dbeta: ExponentVector,
    pub shift0: ExponentVector,
    pub dshift: ExponentVector,
    pub ratio: f64,
    pub scale: f64,
}

impl MlSeriesSum {
    fn term(&self, m: u32, weight: f64) -> MlTerm {
        let k = m as i64;
        MlTerm::new(0, self.alpha, self.beta0.add(&self.dbeta.scale_int(k)), self.arg)
            .shifted(self.shift0.add(&self.dshift.scale_int(k)))
            .derivative(m)
            .scaled(self.scale * weight)
    }

    fn series(&self, ctx: &Arc<SeriesContext>) -> Result<GenSeries<f64>, SeriesError> {
        let params = ctx.params();
        if !(self.dshift.value(params) > 0.0) {
            return Err(SeriesError::Params("epsilon sums need a growing shift".into()));
        }
        let bound = ctx.default_bound();
        let mut acc = GenSeries::zero(ctx).set_bound(bound);
        let mut weight = 1.0;
        for m in 0u32.. {
            let term = self.term(m, weight);
            if term.shift.value(params) > bound || (m > 0 && self.ratio == 0.0) {
                break;
            }
            acc = acc.add(&term.expand(ctx)?)?;
            weight *= self.ratio / (m + 1) as f64;
        }
        Ok(acc)
    }

    fn eval(&self, t: f64, params: &ParamTable) -> Result<f64, CatalogError> {
        let a = self.alpha.value(params);
        let mut sum = 0.0;
        let mut weight = 1.0;
        let mut small = 0;
        for m in 0u32..400 {
            let term = self.term(m, weight);
            let shift = term.shift.value(params);
            let v = if t == 0.0 && shift > 0.0 {
                0.0
            } else {
                let p = MLParams::new(a, term.beta.value(params))?;
                term.scale * t.powf(shift) * ml_derivative(p, m as usize, self.arg * t.powf(a), DEFAULT_TOL)?
            };
            sum += v;
            small = if v.abs() <= 1e-17 * sum.abs().max(1e-300) { small + 1 } else { 0 };
            if small >= 3 || self.ratio == 0.0 {
                return Ok(sum);
            }
            weight *= self.ratio / (m + 1) as f64;
        }
        Ok(sum)
    }
}

pub type SeriesBuilder = dyn Fn(&Arc<SeriesContext>) -> Result<GenSeries<f64>, CatalogError> + Send + Sync;

/// One additive piece of a coefficient function of `t` (variable 0).
#[derive(Clone)]
pub enum TimeAtom {
    /// `coeff * t^exponent`
    Power { coeff: f64, exponent: ExponentVector },
    Ml(MlTerm),
    MlSum(MlSeriesSum),
    /// A series without a closed special-function form, rebuilt at any truncation.
    Series(Arc<SeriesBuilder>),
}

impl fmt::Debug for TimeAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power { coeff, exponent } => write!(f, "Power({coeff}, {exponent:?})"),
            Self::Ml(m) => write!(f, "{m:?}"),
            Self::MlSum(s) => write!(f, "{s:?}"),
            Self::Series(_) => f.write_str("Series(..)"),
        }
    }
}

/// Truncation used when a series atom has to be evaluated pointwise.
const EVAL_TRUNCATION: f64 = 60.0;

#[derive(Debug, Clone, Default)]
pub struct TimeFn(pub Vec<TimeAtom>);

impl TimeFn {
    pub fn power(coeff: f64, exponent: ExponentVector) -> Self {
        Self(vec![TimeAtom::Power { coeff, exponent }])
    }

    pub fn constant(c: f64) -> Self {
        Self::power(c, ExponentVector::zero())
    }

    pub fn ml(term: MlTerm) -> Self {
        Self(vec![TimeAtom::Ml(term)])
    }

    pub fn plus(mut self, other: TimeFn) -> Self {
        self.0.extend(other.0);
        self
    }

    /// Expansion in `t` within `ctx`, up to its truncation bound.
    pub fn series(&self, ctx: &Arc<SeriesContext>) -> Result<GenSeries<f64>, CatalogError> {
        let bound = ctx.default_bound();
        let mut acc = GenSeries::zero(ctx).set_bound(bound);
        for atom in &self.0 {
            let s = match atom {
                TimeAtom::Power { coeff, exponent } => {
                    GenSeries::monomial(ctx, *coeff, Exps::single(0, *exponent)).set_bound(bound)
                }
                TimeAtom::Ml(m) => m.expand(ctx)?,
                TimeAtom::MlSum(s) => s.series(ctx)?,
                TimeAtom::Series(build) => build(ctx)?,
            };
            acc = acc.add(&s)?;
        }
        Ok(acc)
    }

    fn evaluator(&self, params: &ParamTable) -> Result<TimeEvaluator, CatalogError> {
        let series = if self.0.iter().any(|a| matches!(a, TimeAtom::Series(_))) {
            let ctx = SeriesContext::with_truncation(vec!["t".into()], params.clone(), EVAL_TRUNCATION)?;
            let only: Vec<TimeAtom> = self.0.iter().filter(|a| matches!(a, TimeAtom::Series(_))).cloned().collect();
            Some(TimeFn(only).series(&ctx)?.evaluator())
        } else {
            None
        };
        let direct: Vec<TimeAtom> = self.0.iter().filter(|a| !matches!(a, TimeAtom::Series(_))).cloned().collect();
        Ok(TimeEvaluator { direct, series, params: params.clone() })
    }
}

struct TimeEvaluator {
    direct: Vec<TimeAtom>,
    series: Option<crate::series::SeriesEvaluator>,
    params: ParamTable,
}

impl TimeEvaluator {
    fn eval(&self, t: f64) -> Result<f64, CatalogError> {
        let p = &self.params;
        let mut sum = match &self.series {
            Some(ev) => ev.eval(&[t])?,
            None => 0.0,
        };
        for atom in &self.direct {
            sum += match atom {
                TimeAtom::Power { coeff, exponent } => coeff * t.powf(exponent.value(p)),
                TimeAtom::Ml(m) => {
                    let a = m.alpha.value(p);
                    let shift = m.shift.value(p);
                    if t == 0.0 && shift > 0.0 {
                        0.0
                    } else {
                        let ml = MLParams::new(a, m.beta.value(p))?;
                        m.scale * t.powf(shift) * ml_derivative(ml, m.deriv as usize, m.arg * t.powf(a), DEFAULT_TOL)?
                    }
                }
                TimeAtom::MlSum(s) => s.eval(t, p)?,
                TimeAtom::Series(_) => 0.0,
            };
        }
        Ok(sum)
    }
}

/// Closed-form solution on a problem's subspace.
#[derive(Debug, Clone)]
pub struct KnownSolution {
    pub provenance: String,
    pub form: ClosedForm,
    /// `coefficients[p][j]` multiplies basis function `j` of component `p`.
    pub coefficients: Vec<Vec<TimeFn>>,
    pub free: Vec<FreeConstant>,
    /// Free constants of the power-law solver that select this member of the family.
    pub solver_bindings: FreeBindings,
}

impl KnownSolution {
    pub fn new(provenance: &str, form: ClosedForm, coefficients: Vec<Vec<TimeFn>>) -> Self {
        Self { provenance: provenance.into(), form, coefficients, free: Vec::new(), solver_bindings: FreeBindings::new() }
    }

    pub fn with_free(mut self, names: &[&str], spec: &ProblemSpec) -> Self {
        self.free = names
            .iter()
            .filter_map(|n| spec.param(n).map(|value| FreeConstant { name: n.to_string(), value }))
            .collect();
        self
    }

    pub fn binding(mut self, unknown: &str, value: f64) -> Self {
        self.solver_bindings.insert(unknown.into(), value);
        self
    }

    pub fn solution_form(&self, ctx: &Arc<SeriesContext>) -> Result<SolutionForm, CatalogError> {
        let coefficients = self
            .coefficients
            .iter()
            .map(|ks| ks.iter().map(|k| k.series(ctx)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SolutionForm { coefficients })
    }

    /// The coefficient functions flattened in unknown order.
    pub fn fode_solution(&self, ctx: &Arc<SeriesContext>) -> Result<FodeSolution, CatalogError> {
        let components = self.solution_form(ctx)?.coefficients.into_iter().flatten().collect();
        let mut sol = FodeSolution::new(components).tagged(self.form);
        sol.free = self.free.clone();
        Ok(sol)
    }

    pub fn evaluator(&self, spec: &ProblemSpec) -> Result<FieldEvaluator, CatalogError> {
        let params = spec.order_params()?;
        if self.coefficients.len() != spec.components.len() {
            return Err(CatalogError::Spec("closed form has the wrong number of components".into()));
        }
        let mut fields = Vec::new();
        for (ks, c) in self.coefficients.iter().zip(&spec.components) {
            if ks.len() != c.basis.len() {
                return Err(CatalogError::Spec(format!("closed form for {} has the wrong size", c.name)));
            }
            let terms = ks.iter().map(|k| k.evaluator(&params)).collect::<Result<Vec<_>, _>>()?;
            fields.push((terms, c.basis.clone()));
        }
        Ok(FieldEvaluator { fields, vars: spec.variables.clone(), params })
    }
}

/// Pointwise values of every field of a closed-form solution.
pub struct FieldEvaluator {
    fields: Vec<(Vec<TimeEvaluator>, Vec<super::doc::BasisFn>)>,
    vars: Vec<String>,
    params: ParamTable,
}

impl FieldEvaluator {
    /// `point = (t, x1, ..., xn)`.
    pub fn eval(&self, point: &[f64]) -> Result<Vec<f64>, CatalogError> {
        if point.len() != self.vars.len() {
            return Err(CatalogError::Spec(format!("point has {} coordinates, expected {}", point.len(), self.vars.len())));
        }
        self.fields
            .iter()
            .map(|(ks, basis)| {
                let mut f = 0.0;
                for (k, phi) in ks.iter().zip(basis) {
                    f += k.eval(point[0])? * phi.eval(&self.vars, &self.params, point)?;
                }
                Ok(f)
            })
            .collect()
    }
}
