//! Operator expression trees and their evaluation on series.

use std::collections::BTreeMap;

use crate::fracalc::{caputo_deriv, sequential_deriv, DerivKind, FracOrder};
use crate::series::{Coeff, ExponentVector, Exps, GenSeries, SeriesContext};

use super::OperatorError;

/// Expression tree for a (possibly nonlinear) fractional differential operator.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorExpr {
    /// The `p`-th unknown field.
    Component(usize),
    /// `times`-fold sequential Caputo derivative of order `order` in space variable `var`.
    SpaceDeriv { child: Box<OperatorExpr>, var: usize, order: ExponentVector, times: u32 },
    /// Caputo time derivative of order `time_order` applied to a linear child.
    MixedDeriv { child: Box<OperatorExpr>, time_order: ExponentVector },
    /// Multiplier `var^exponent`.
    CoordMonomial { var: usize, exponent: ExponentVector },
    Sum(Vec<OperatorExpr>),
    Product(Vec<OperatorExpr>),
    Scale(f64, Box<OperatorExpr>),
    Power(Box<OperatorExpr>, u32),
    Constant(f64),
}

impl OperatorExpr {
    pub fn component(p: usize) -> Self {
        Self::Component(p)
    }

    pub fn dx(self, var: usize, order: ExponentVector) -> Self {
        self.dx_seq(var, order, 1)
    }

    pub fn dx_seq(self, var: usize, order: ExponentVector, times: u32) -> Self {
        Self::SpaceDeriv { child: Box::new(self), var, order, times }
    }

    pub fn dt_mixed(self, time_order: ExponentVector) -> Self {
        Self::MixedDeriv { child: Box::new(self), time_order }
    }

    pub fn scale(self, k: f64) -> Self {
        Self::Scale(k, Box::new(self))
    }

    pub fn times(self, other: Self) -> Self {
        Self::Product(vec![self, other])
    }

    pub fn pow(self, n: u32) -> Self {
        Self::Power(Box::new(self), n)
    }

    pub fn sum(terms: Vec<Self>) -> Self {
        Self::Sum(terms)
    }

    /// Highest component index referenced, if any.
    pub fn max_component(&self) -> Option<usize> {
        match self {
            Self::Component(p) => Some(*p),
            Self::SpaceDeriv { child, .. } | Self::MixedDeriv { child, .. } | Self::Scale(_, child) | Self::Power(child, _) => {
                child.max_component()
            }
            Self::Sum(v) | Self::Product(v) => v.iter().filter_map(Self::max_component).max(),
            Self::CoordMonomial { .. } | Self::Constant(_) => None,
        }
    }

    /// Distinct time orders of the mixed-derivative nodes.
    pub fn mixed_orders(&self, out: &mut Vec<ExponentVector>) {
        match self {
            Self::MixedDeriv { child, time_order } => {
                if !out.contains(time_order) {
                    out.push(*time_order);
                }
                child.mixed_orders(out);
            }
            Self::SpaceDeriv { child, .. } | Self::Scale(_, child) | Self::Power(child, _) => child.mixed_orders(out),
            Self::Sum(v) | Self::Product(v) => v.iter().for_each(|e| e.mixed_orders(out)),
            Self::Component(_) | Self::CoordMonomial { .. } | Self::Constant(_) => {}
        }
    }

    /// True when the expression is linear and homogeneous in the fields.
    pub fn is_linear(&self) -> bool {
        self.degree() == Some(1)
    }

    /// Polynomial degree in the fields (`Some(0)` for field-free terms, `None` if mixed degrees).
    fn degree(&self) -> Option<u32> {
        match self {
            Self::Component(_) => Some(1),
            Self::CoordMonomial { .. } | Self::Constant(_) => Some(0),
            Self::SpaceDeriv { child, .. } | Self::MixedDeriv { child, .. } | Self::Scale(_, child) => child.degree(),
            Self::Power(child, n) => child.degree().map(|d| d * n),
            Self::Sum(v) => {
                let mut it = v.iter().map(Self::degree);
                let first = it.next().flatten();
                it.try_fold(first?, |d, e| (e == Some(d)).then_some(d))
            }
            Self::Product(v) => v.iter().try_fold(0, |d, e| e.degree().map(|x| d + x)),
        }
    }
}

/// Field values for [`apply`].
///
/// With `time_derivatives` set, a mixed node evaluates its child on the
/// supplied per-order substitute fields (symbolic mode); otherwise the
/// Caputo time derivative is applied to the child's image (concrete mode).
pub struct Inputs<'a, C: Coeff> {
    pub ctx: &'a std::sync::Arc<SeriesContext>,
    pub fields: &'a [GenSeries<C>],
    pub time_derivatives: Option<&'a BTreeMap<ExponentVector, Vec<GenSeries<C>>>>,
}

/// Evaluates `expr` on the given fields.
pub fn apply<C: Coeff>(expr: &OperatorExpr, inputs: &Inputs<'_, C>) -> Result<GenSeries<C>, OperatorError> {
    eval(expr, inputs, "root")
}

fn eval<C: Coeff>(expr: &OperatorExpr, inp: &Inputs<'_, C>, path: &str) -> Result<GenSeries<C>, OperatorError> {
    let params = inp.ctx.params();
    let at = |e: crate::fracalc::FracError, what: &str| OperatorError::Frac { path: format!("{path}/{what}"), source: e };
    Ok(match expr {
        OperatorExpr::Component(p) => inp.fields.get(*p).cloned().ok_or(OperatorError::Component(*p))?,
        OperatorExpr::SpaceDeriv { child, var, order, times } => {
            let inner = eval(child, inp, &format!("{path}/d{var}"))?;
            let ord = FracOrder::new(*order, params).map_err(|e| at(e, "order"))?;
            sequential_deriv(&inner, *var, &ord, *times, DerivKind::Caputo).map_err(|e| at(e, &format!("d{var}")))?
        }
        OperatorExpr::MixedDeriv { child, time_order } => {
            if !child.is_linear() {
                return Err(OperatorError::NonlinearMixed);
            }
            match inp.time_derivatives {
                Some(map) => {
                    let subs = map.get(time_order).ok_or_else(|| {
                        OperatorError::Invalid(format!("no substitute for time order {}", time_order.display(params)))
                    })?;
                    let sub = Inputs { ctx: inp.ctx, fields: subs, time_derivatives: None };
                    eval(child, &sub, &format!("{path}/dt"))?
                }
                None => {
                    let inner = eval(child, inp, &format!("{path}/dt"))?;
                    let ord = FracOrder::new(*time_order, params).map_err(|e| at(e, "order"))?;
                    caputo_deriv(&inner, 0, &ord).map_err(|e| at(e, "dt"))?
                }
            }
        }
        OperatorExpr::CoordMonomial { var, exponent } => {
            GenSeries::monomial(inp.ctx, C::from_real(1.0), Exps::single(*var, *exponent))
        }
        OperatorExpr::Sum(terms) => {
            let mut acc = GenSeries::zero(inp.ctx);
            for (i, t) in terms.iter().enumerate() {
                acc = acc.add(&eval(t, inp, &format!("{path}/sum{i}"))?)?;
            }
            acc
        }
        OperatorExpr::Product(factors) => {
            let mut acc = GenSeries::constant(inp.ctx, C::from_real(1.0));
            for (i, f) in factors.iter().enumerate() {
                acc = acc.mul(&eval(f, inp, &format!("{path}/mul{i}"))?)?;
            }
            acc
        }
        OperatorExpr::Scale(k, child) => eval(child, inp, path)?.scale(*k),
        OperatorExpr::Power(child, n) => eval(child, inp, &format!("{path}/pow"))?.pow(*n)?,
        OperatorExpr::Constant(c) => GenSeries::constant(inp.ctx, C::from_real(*c)),
    })
}
