//! Termwise fractional integrals and derivatives of generalized power series.

use std::cmp::Ordering;

use thiserror::Error;

use crate::series::{gamma_exp, rgamma_exp, Coeff, ExponentVector, GenSeries, ParamTable, SeriesError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum DerivKind {
    Caputo,
    RiemannLiouville,
}

/// A positive order with its integer ceiling under a fixed parameter assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FracOrder {
    value: ExponentVector,
    ceil: i64,
}

impl FracOrder {
    pub fn new(value: ExponentVector, params: &ParamTable) -> Result<Self, FracError> {
        if value.cmp_integer(0, params) != Ordering::Greater {
            return Err(FracError::InvalidOrder(value.display(params).to_string()));
        }
        Ok(Self { value, ceil: value.ceil(params) })
    }

    pub fn value(&self) -> &ExponentVector {
        &self.value
    }

    pub fn ceil(&self) -> i64 {
        self.ceil
    }

    pub fn numeric(&self, params: &ParamTable) -> f64 {
        self.value.value(params)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FracError {
    #[error("order must be positive, got {0}")]
    InvalidOrder(String),
    #[error("exponent {exponent} is not above -1")]
    Domain { exponent: String },
    #[error("Caputo derivative of order {order} is undefined for the power {exponent}")]
    UndefinedCaputo { exponent: String, order: String },
    #[error("stage {stage} of sequential derivative: {source}")]
    Stage { stage: u32, source: Box<FracError> },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn shifted_precision<C: Coeff>(s: &GenSeries<C>, var: usize, delta: f64) -> Vec<f64> {
    let mut p = s.precision().to_vec();
    p[var] += delta;
    p
}

fn above_minus_one(g: &ExponentVector, params: &ParamTable) -> Result<(), FracError> {
    if g.cmp_integer(-1, params) == Ordering::Greater {
        Ok(())
    } else {
        Err(FracError::Domain { exponent: g.display(params).to_string() })
    }
}

/// Riemann-Liouville integral `I^α` in `var`.
pub fn rl_integral<C: Coeff>(s: &GenSeries<C>, var: usize, order: &FracOrder) -> Result<GenSeries<C>, FracError> {
    let params = s.params().clone();
    let a = order.value;
    let precision = shifted_precision(s, var, a.value(&params));
    s.map_terms(
        |e, _| {
            let g = e.get(var);
            above_minus_one(g, &params)?;
            let k = gamma_exp(&g.add_int(1), &params)? * rgamma_exp(&g.add(&a).add_int(1), &params);
            Ok(Some((e.with(var, g.add(&a)), k)))
        },
        &precision,
    )
}

/// Caputo derivative `D^α` in `var`.
pub fn caputo_deriv<C: Coeff>(s: &GenSeries<C>, var: usize, order: &FracOrder) -> Result<GenSeries<C>, FracError> {
    let params = s.params().clone();
    let a = order.value;
    let n = order.ceil;
    let precision = shifted_precision(s, var, -a.value(&params));
    s.map_terms(
        |e, _| {
            let g = e.get(var);
            match g.as_integer(&params) {
                Some(k) if (0..n).contains(&k) => return Ok(None),
                Some(k) if k >= n => {}
                _ if g.cmp_integer(n - 1, &params) == Ordering::Greater => {}
                _ => {
                    return Err(FracError::UndefinedCaputo {
                        exponent: g.display(&params).to_string(),
                        order: a.display(&params).to_string(),
                    })
                }
            }
            let k = gamma_exp(&g.add_int(1), &params)? * rgamma_exp(&g.sub(&a).add_int(1), &params);
            Ok((k != 0.0).then(|| (e.with(var, g.sub(&a)), k)))
        },
        &precision,
    )
}

/// Riemann-Liouville derivative `D^α` in `var`; integer orders reduce to the classical derivative.
pub fn rl_deriv<C: Coeff>(s: &GenSeries<C>, var: usize, order: &FracOrder) -> Result<GenSeries<C>, FracError> {
    let params = s.params().clone();
    let a = order.value;
    let n = order.ceil;
    let integer_order = a.as_integer(&params).is_some();
    let precision = shifted_precision(s, var, -a.value(&params));
    s.map_terms(
        |e, _| {
            let g = e.get(var);
            if integer_order {
                let x = g.value(&params);
                let k: f64 = (0..n).map(|j| x - j as f64).product();
                return Ok((k != 0.0).then(|| (e.with(var, g.sub(&a)), k)));
            }
            above_minus_one(g, &params)?;
            if let Some(k) = a.sub(g).as_integer(&params) {
                if (0..n).contains(&k) {
                    return Ok(None);
                }
            }
            let k = gamma_exp(&g.add_int(1), &params)? * rgamma_exp(&g.sub(&a).add_int(1), &params);
            Ok((k != 0.0).then(|| (e.with(var, g.sub(&a)), k)))
        },
        &precision,
    )
}

pub fn frac_deriv<C: Coeff>(
    s: &GenSeries<C>,
    var: usize,
    order: &FracOrder,
    kind: DerivKind,
) -> Result<GenSeries<C>, FracError> {
    match kind {
        DerivKind::Caputo => caputo_deriv(s, var, order),
        DerivKind::RiemannLiouville => rl_deriv(s, var, order),
    }
}

/// `k`-fold composition of `D^α`.
pub fn sequential_deriv<C: Coeff>(
    s: &GenSeries<C>,
    var: usize,
    order: &FracOrder,
    k: u32,
    kind: DerivKind,
) -> Result<GenSeries<C>, FracError> {
    let mut out = s.clone();
    for stage in 1..=k {
        out = frac_deriv(&out, var, order, kind).map_err(|e| FracError::Stage { stage, source: Box::new(e) })?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Exps, MlTerm, SeriesContext};
    use std::sync::Arc;

    fn ctx(alpha: f64) -> Arc<SeriesContext> {
        let p = ParamTable::new(vec![("alpha".into(), alpha), ("beta".into(), 0.7)]).unwrap();
        SeriesContext::new(vec!["t".into(), "x".into()], p).unwrap()
    }

    fn sym(c: &Arc<SeriesContext>, name: &str) -> ExponentVector {
        c.params().symbol(name).unwrap()
    }

    fn order(c: &Arc<SeriesContext>, e: ExponentVector) -> FracOrder {
        FracOrder::new(e, c.params()).unwrap()
    }

    fn mono(c: &Arc<SeriesContext>, var: usize, e: ExponentVector) -> GenSeries<f64> {
        GenSeries::monomial(c, 1.0, Exps::single(var, e))
    }

    #[test]
    fn half_integral_of_one() {
        let c = ctx(0.4);
        let s = rl_integral(&GenSeries::constant(&c, 1.0), 0, &order(&c, ExponentVector::rational(1, 2))).unwrap();
        let v = s.coeff(&Exps::single(0, ExponentVector::rational(1, 2))).unwrap();
        assert!((v - 1.0 / 0.886226925452758).abs() < 1e-14);
    }

    #[test]
    fn caputo_rejects_negative_power() {
        let c = ctx(0.5);
        let a = sym(&c, "alpha");
        let err = caputo_deriv(&mono(&c, 0, a.neg()), 0, &order(&c, a)).unwrap_err();
        assert!(matches!(err, FracError::UndefinedCaputo { .. }));
        assert!(caputo_deriv(&GenSeries::constant(&c, 2.0), 0, &order(&c, a)).unwrap().is_zero());
    }

    #[test]
    fn riemann_liouville_of_negative_power() {
        let c = ctx(0.3);
        let a = sym(&c, "alpha");
        let s = rl_deriv(&mono(&c, 0, a.neg()), 0, &order(&c, a)).unwrap();
        let expected = crate::specfun::gamma_real(0.7).unwrap() / crate::specfun::gamma_real(0.4).unwrap();
        let got = s.coeff(&Exps::single(0, a.scale_int(-2))).unwrap();
        assert!((got - expected).abs() < 1e-13);
        // at alpha = 1/2 the reciprocal gamma vanishes
        let h = ctx(0.5);
        let a = sym(&h, "alpha");
        assert!(rl_deriv(&mono(&h, 0, a.neg()), 0, &order(&h, a)).unwrap().is_zero());
        let g = ExponentVector::rational(-1, 2);
        assert!(rl_deriv(&mono(&h, 0, g), 0, &order(&h, ExponentVector::rational(1, 2))).unwrap().is_zero());
    }

    #[test]
    fn integer_order_is_classical() {
        let c = ctx(0.3);
        let one = FracOrder::new(ExponentVector::integer(1), c.params()).unwrap();
        let s = rl_deriv(&mono(&c, 0, ExponentVector::integer(1)), 0, &one).unwrap();
        assert_eq!(s.coeff(&Exps::zero()), Some(&1.0));
        assert!(rl_deriv(&GenSeries::constant(&c, 1.0), 0, &one).unwrap().is_zero());
    }

    #[test]
    fn sequential_caputo_of_double_power() {
        let c = ctx(0.3);
        let b = sym(&c, "beta");
        let s = sequential_deriv(&mono(&c, 1, b.scale_int(2)), 1, &order(&c, b), 2, DerivKind::Caputo).unwrap();
        let expected = crate::specfun::gamma_real(2.4).unwrap();
        assert!((s.coeff(&Exps::zero()).unwrap() - expected).abs() < 1e-12);
        let single = sequential_deriv(&mono(&c, 1, b), 1, &order(&c, b), 1, DerivKind::Caputo).unwrap();
        assert_eq!(single, caputo_deriv(&mono(&c, 1, b), 1, &order(&c, b)).unwrap());
    }

    #[test]
    fn stage_is_reported() {
        let c = ctx(0.3);
        let b = sym(&c, "beta");
        // x^{beta/2} -> x^{-beta/2}, which the second application rejects
        let err = sequential_deriv(&mono(&c, 1, b.scale(num::rational::Ratio::new(1, 2))), 1, &order(&c, b), 2, DerivKind::Caputo)
            .unwrap_err();
        assert!(matches!(err, FracError::Stage { stage: 2, .. }));
    }

    #[test]
    fn caputo_of_mittag_leffler() {
        let c = ctx(0.45);
        let a = sym(&c, "alpha");
        let e = MlTerm::new(0, a, ExponentVector::integer(1), -0.8).expand(&c).unwrap();
        let d = caputo_deriv(&e, 0, &order(&c, a)).unwrap();
        assert_eq!(d.len(), e.len() - 1);
        let expected = e.scale(-0.8).restrict_below(d.precision());
        assert!(d.approx_eq(&expected, 1e-12));
    }

    #[test]
    fn double_integer_order_e_two_alpha() {
        let c = ctx(0.35);
        let a = sym(&c, "alpha");
        let e = MlTerm::new(0, a.scale_int(2), ExponentVector::integer(1), 1.7).expand(&c).unwrap();
        let d = sequential_deriv(&e, 0, &order(&c, a), 2, DerivKind::Caputo).unwrap();
        assert!(d.approx_eq(&e.scale(1.7).restrict_below(d.precision()), 1e-12));
    }
}
