//! Series expansions of the special functions that appear in closed-form solutions.

use std::sync::Arc;

use super::exponent::ExponentVector;
use super::genseries::{Exps, GenSeries, SeriesContext, EXPONENT_EPS};
use super::params::ParamTable;
use super::SeriesError;
use crate::specfun::{gamma_real, rgamma};

/// `Γ(e)` with exact pole detection.
pub fn gamma_exp(e: &ExponentVector, params: &ParamTable) -> Result<f64, SeriesError> {
    if e.is_nonpositive_integer(params) {
        return Err(SeriesError::Pole(e.display(params).to_string()));
    }
    gamma_real(e.value(params)).map_err(|_| SeriesError::Pole(e.display(params).to_string()))
}

/// `1/Γ(e)`, exactly zero at the poles.
pub fn rgamma_exp(e: &ExponentVector, params: &ParamTable) -> f64 {
    if e.is_nonpositive_integer(params) {
        0.0
    } else {
        rgamma(e.value(params))
    }
}

/// Description of `scale * var^shift * E^{(deriv)}_{alpha,beta}(arg * var^alpha)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MlTerm {
    pub var: usize,
    pub alpha: ExponentVector,
    pub beta: ExponentVector,
    pub arg: f64,
    pub shift: ExponentVector,
    pub deriv: u32,
    pub scale: f64,
}

impl MlTerm {
    pub fn new(var: usize, alpha: ExponentVector, beta: ExponentVector, arg: f64) -> Self {
        Self { var, alpha, beta, arg, shift: ExponentVector::zero(), deriv: 0, scale: 1.0 }
    }

    pub fn shifted(mut self, shift: ExponentVector) -> Self {
        self.shift = shift;
        self
    }

    pub fn derivative(mut self, m: u32) -> Self {
        self.deriv = m;
        self
    }

    pub fn scaled(mut self, k: f64) -> Self {
        self.scale *= k;
        self
    }

    /// Expands up to the context's truncation bound.
    pub fn expand(&self, ctx: &Arc<SeriesContext>) -> Result<GenSeries<f64>, SeriesError> {
        ml_series(ctx, self)
    }
}

fn ml_series(ctx: &Arc<SeriesContext>, term: &MlTerm) -> Result<GenSeries<f64>, SeriesError> {
    let params = ctx.params();
    if term.var >= ctx.nvars() {
        return Err(SeriesError::VariableMismatch);
    }
    let a = term.alpha.value(params);
    if !(a > 0.0) {
        return Err(SeriesError::Params(format!("Mittag-Leffler order must be positive, got {a}")));
    }
    let bound = ctx.default_bound();
    let shift = term.shift.value(params);
    let m = term.deriv as i64;
    let mut terms = Vec::new();
    let mut frontier = f64::INFINITY;
    // E^{(m)}(z) = sum_j (j+m)!/j! z^j / Γ(α(j+m)+β)
    let mut falling = (1..=m).map(|i| i as f64).product::<f64>();
    let mut argpow = 1.0;
    for j in 0i64.. {
        let exponent = term.shift.add(&term.alpha.scale_int(j));
        let x = shift + a * j as f64;
        if x > bound + EXPONENT_EPS {
            frontier = x;
            break;
        }
        if term.arg == 0.0 && j > 0 {
            break;
        }
        let g = term.alpha.scale_int(j + m).add(&term.beta);
        let c = term.scale * falling * argpow * rgamma_exp(&g, params);
        if c != 0.0 {
            terms.push((Exps::single(term.var, exponent), c));
        }
        argpow *= term.arg;
        falling *= (j + m + 1) as f64 / (j + 1) as f64;
    }
    let mut precision = vec![f64::INFINITY; ctx.nvars()];
    precision[term.var] = frontier;
    let s = GenSeries::from_terms(ctx, terms, &precision);
    Ok(s)
}

/// `cos_γ(λ var^γ) = E_{2γ,1}(−λ² var^{2γ})`.
pub fn frac_cos_series(
    ctx: &Arc<SeriesContext>,
    var: usize,
    gamma: &ExponentVector,
    lambda: f64,
) -> Result<GenSeries<f64>, SeriesError> {
    MlTerm::new(var, gamma.scale_int(2), ExponentVector::integer(1), -lambda * lambda).expand(ctx)
}

/// `sin_γ(λ var^γ) = λ var^γ E_{2γ,γ+1}(−λ² var^{2γ})`.
pub fn frac_sin_series(
    ctx: &Arc<SeriesContext>,
    var: usize,
    gamma: &ExponentVector,
    lambda: f64,
) -> Result<GenSeries<f64>, SeriesError> {
    MlTerm::new(var, gamma.scale_int(2), gamma.add_int(1), -lambda * lambda)
        .shifted(*gamma)
        .scaled(lambda)
        .expand(ctx)
}

/// `c * var^e`.
pub fn power_term(ctx: &Arc<SeriesContext>, var: usize, e: ExponentVector, c: f64) -> GenSeries<f64> {
    GenSeries::monomial(ctx, c, Exps::single(var, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{mittag_leffler, MLParams};

    fn ctx(bound: f64) -> Arc<SeriesContext> {
        let p = ParamTable::new(vec![("alpha".into(), 0.6)]).unwrap();
        SeriesContext::with_truncation(vec!["t".into()], p, bound).unwrap()
    }

    #[test]
    fn exponential_at_one() {
        let c = ctx(30.0);
        let e = MlTerm::new(0, ExponentVector::integer(1), ExponentVector::integer(1), 1.0).expand(&c).unwrap();
        assert_eq!(e.len(), 31);
        assert!((e.eval(&[1.0]).unwrap() - std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn matches_direct_mittag_leffler() {
        let c = ctx(12.0);
        let alpha = c.params().symbol("alpha").unwrap();
        let s = MlTerm::new(0, alpha, ExponentVector::integer(1), -0.8).expand(&c).unwrap();
        let t: f64 = 0.5;
        let direct = mittag_leffler(MLParams::new(0.6, 1.0).unwrap(), -0.8 * t.powf(0.6), 1e-15).unwrap();
        assert!((s.eval(&[t]).unwrap() - direct).abs() < 1e-12);
        assert!((s.precision()[0] - 0.6 * 21.0).abs() < 1e-12);
    }

    #[test]
    fn pole_coefficients_vanish() {
        let c = ctx(12.0);
        // E_{1,0}(t) = t e^t has no constant term
        let s = MlTerm::new(0, ExponentVector::integer(1), ExponentVector::zero(), 1.0).expand(&c).unwrap();
        assert!(s.coeff(&Exps::zero()).is_none());
        assert!(gamma_exp(&ExponentVector::integer(-2), c.params()).is_err());
        assert_eq!(rgamma_exp(&ExponentVector::integer(0), c.params()), 0.0);
    }
}
