//! Sparse generalized power series with exact exponents.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::coeff::Coeff;
use super::exponent::ExponentVector;
use super::params::ParamTable;
use super::poly::Poly;
use super::SeriesError;

/// Maximum number of series variables (time plus up to three space variables).
pub const MAX_VARS: usize = 4;
/// Default truncation bound on the numeric exponent in every variable.
pub const DEFAULT_TRUNCATION: f64 = 12.0;
/// Slack used when comparing numeric exponents against bounds and frontiers.
pub const EXPONENT_EPS: f64 = 1e-9;

/// One exponent per variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Exps(pub [ExponentVector; MAX_VARS]);

impl Exps {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(var: usize, e: ExponentVector) -> Self {
        let mut out = Self::zero();
        out.0[var] = e;
        out
    }

    pub fn get(&self, var: usize) -> &ExponentVector {
        &self.0[var]
    }

    pub fn with(mut self, var: usize, e: ExponentVector) -> Self {
        self.0[var] = e;
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for (o, b) in out.0.iter_mut().zip(other.0.iter()) {
            if !b.is_zero() {
                *o = o.add(b);
            }
        }
        out
    }
}

/// Variables and parameter table shared by every series of one problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesContext {
    vars: Vec<String>,
    params: ParamTable,
    default_bound: f64,
}

impl SeriesContext {
    pub fn new(vars: Vec<String>, params: ParamTable) -> Result<Arc<Self>, SeriesError> {
        Self::with_truncation(vars, params, DEFAULT_TRUNCATION)
    }

    pub fn with_truncation(vars: Vec<String>, params: ParamTable, bound: f64) -> Result<Arc<Self>, SeriesError> {
        if vars.is_empty() || vars.len() > MAX_VARS {
            return Err(SeriesError::Params(format!("between 1 and {MAX_VARS} variables are supported")));
        }
        if !(bound > 0.0) {
            return Err(SeriesError::Params(format!("truncation bound must be positive, got {bound}")));
        }
        Ok(Arc::new(Self { vars, params, default_bound: bound }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn params(&self) -> &ParamTable {
        &self.params
    }

    pub fn default_bound(&self) -> f64 {
        self.default_bound
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn value(&self, e: &ExponentVector) -> f64 {
        e.value(&self.params)
    }

    fn numeric(&self, exps: &Exps) -> [f64; MAX_VARS] {
        let mut out = [0.0; MAX_VARS];
        for (v, o) in out.iter_mut().enumerate().take(self.nvars()) {
            *o = exps.0[v].value(&self.params);
        }
        out
    }
}

/// Sparse series `sum c * prod var^{e}`.
///
/// `precision[v]` marks where the representation stops being exact: every
/// dropped or unknown contribution has exponent at least `precision[v]` in
/// some variable `v`. Terms are never stored at or above their frontier.
#[derive(Clone, Debug)]
pub struct GenSeries<C: Coeff> {
    ctx: Arc<SeriesContext>,
    terms: BTreeMap<Exps, C>,
    bound: [f64; MAX_VARS],
    precision: [f64; MAX_VARS],
    truncated: bool,
}

impl<C: Coeff> PartialEq for GenSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx)
            && self.terms == other.terms
            && self.precision == other.precision
    }
}

fn min_arr(a: &[f64; MAX_VARS], b: &[f64; MAX_VARS]) -> [f64; MAX_VARS] {
    let mut out = *a;
    for (o, x) in out.iter_mut().zip(b) {
        *o = o.min(*x);
    }
    out
}

impl<C: Coeff> GenSeries<C> {
    pub fn zero(ctx: &Arc<SeriesContext>) -> Self {
        Self {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
            bound: [ctx.default_bound; MAX_VARS],
            precision: [f64::INFINITY; MAX_VARS],
            truncated: false,
        }
    }

    pub fn constant(ctx: &Arc<SeriesContext>, c: C) -> Self {
        Self::monomial(ctx, c, Exps::zero())
    }

    pub fn monomial(ctx: &Arc<SeriesContext>, c: C, exps: Exps) -> Self {
        let mut s = Self::zero(ctx);
        if !c.is_zero() {
            s.terms.insert(exps, c);
        }
        s.normalize();
        s
    }

    /// Builds a series from terms (duplicates are summed) with a known frontier.
    pub fn from_terms(
        ctx: &Arc<SeriesContext>,
        terms: impl IntoIterator<Item = (Exps, C)>,
        precision: &[f64],
    ) -> Self {
        let mut acc: BTreeMap<Exps, C::Acc> = BTreeMap::new();
        for (e, c) in terms {
            C::accumulate(acc.entry(e).or_default(), &c, 1.0);
        }
        let mut s = Self::zero(ctx);
        for (v, p) in precision.iter().enumerate().take(MAX_VARS) {
            s.precision[v] = *p;
        }
        s.terms = acc.into_iter().map(|(e, a)| (e, C::finish(a))).collect();
        s.normalize();
        s
    }

    pub fn ctx(&self) -> &Arc<SeriesContext> {
        &self.ctx
    }

    pub fn params(&self) -> &ParamTable {
        &self.ctx.params
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &Exps) -> Option<&C> {
        self.terms.get(exps)
    }

    /// Per-variable frontier of exactness.
    pub fn precision(&self) -> &[f64] {
        &self.precision[..self.ctx.nvars()]
    }

    pub fn bound(&self) -> &[f64] {
        &self.bound[..self.ctx.nvars()]
    }

    /// True when some product or builder dropped terms above the truncation bound.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn numeric_exponents(&self, exps: &Exps) -> Vec<f64> {
        self.ctx.numeric(exps)[..self.ctx.nvars()].to_vec()
    }

    /// Largest coefficient magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.magnitude()))
    }

    fn check_ctx(&self, other: &Self) -> Result<(), SeriesError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(SeriesError::VariableMismatch)
        }
    }

    fn normalize(&mut self) {
        let n = self.ctx.nvars();
        self.terms.retain(|_, c| !c.is_zero());
        let mut dropped = [f64::INFINITY; MAX_VARS];
        for e in self.terms.keys() {
            let x = self.ctx.numeric(e);
            for v in 0..n {
                if x[v] > self.bound[v] + EXPONENT_EPS {
                    dropped[v] = dropped[v].min(x[v]);
                }
            }
        }
        if dropped.iter().any(|d| d.is_finite()) {
            self.truncated = true;
            self.precision = min_arr(&self.precision, &dropped);
        }
        let ctx = Arc::clone(&self.ctx);
        let precision = self.precision;
        self.terms.retain(|e, _| {
            let x = ctx.numeric(e);
            (0..n).all(|v| x[v] < precision[v] - EXPONENT_EPS)
        });
    }

    /// Lowers the truncation bound (never raises precision).
    pub fn with_bound(mut self, bound: f64) -> Self {
        for b in &mut self.bound {
            *b = b.min(bound);
        }
        self.normalize();
        self
    }

    /// Sets the truncation bound in every variable.
    pub fn set_bound(mut self, bound: f64) -> Self {
        self.bound = [bound; MAX_VARS];
        self.normalize();
        self
    }

    /// Lowers the frontier in the given variables.
    pub fn with_precision(mut self, precision: &[f64]) -> Self {
        for (p, q) in self.precision.iter_mut().zip(precision) {
            *p = p.min(*q);
        }
        self.normalize();
        self
    }

    /// Drops every term at or above `frontier` and lowers the precision to it.
    pub fn restrict_below(&self, frontier: &[f64]) -> Self {
        self.clone().with_precision(frontier)
    }

    fn combine(&self, other: &Self, k: f64) -> Result<Self, SeriesError> {
        self.check_ctx(other)?;
        let mut acc: BTreeMap<Exps, C::Acc> = BTreeMap::new();
        for (e, c) in &self.terms {
            C::accumulate(acc.entry(*e).or_default(), c, 1.0);
        }
        for (e, c) in &other.terms {
            C::accumulate(acc.entry(*e).or_default(), c, k);
        }
        let mut out = Self {
            ctx: Arc::clone(&self.ctx),
            terms: acc.into_iter().map(|(e, a)| (e, C::finish(a))).collect(),
            bound: min_arr(&self.bound, &other.bound),
            precision: min_arr(&self.precision, &other.precision),
            truncated: self.truncated || other.truncated,
        };
        out.normalize();
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, -1.0)
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut out = self.clone();
        if k == 0.0 {
            out.terms.clear();
            return out;
        }
        for c in out.terms.values_mut() {
            *c = c.scale(k);
        }
        out
    }

    /// Multiplies every coefficient by the ring element `c`.
    pub fn mul_coeff(&self, c: &C) -> Self {
        let mut out = self.clone();
        out.terms = self
            .terms
            .iter()
            .map(|(e, x)| {
                let mut acc = C::Acc::default();
                C::accumulate_product(&mut acc, x, c, 1.0);
                (*e, C::finish(acc))
            })
            .collect();
        out.normalize();
        out
    }

    fn min_exponents(&self) -> [f64; MAX_VARS] {
        let n = self.ctx.nvars();
        let mut m = self.precision;
        for e in self.terms.keys() {
            let x = self.ctx.numeric(e);
            for v in 0..n {
                m[v] = m[v].min(x[v]);
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ctx(other)?;
        let n = self.ctx.nvars();
        let (ma, mb) = (self.min_exponents(), other.min_exponents());
        let mut precision = [f64::INFINITY; MAX_VARS];
        for v in 0..n {
            precision[v] = (self.precision[v] + mb[v]).min(other.precision[v] + ma[v]);
        }
        let bound = min_arr(&self.bound, &other.bound);
        let a: Vec<(&Exps, [f64; MAX_VARS], &C)> =
            self.terms.iter().map(|(e, c)| (e, self.ctx.numeric(e), c)).collect();
        let b: Vec<(&Exps, [f64; MAX_VARS], &C)> =
            other.terms.iter().map(|(e, c)| (e, self.ctx.numeric(e), c)).collect();
        let mut acc: BTreeMap<Exps, C::Acc> = BTreeMap::new();
        let mut dropped = [f64::INFINITY; MAX_VARS];
        let mut truncated = self.truncated || other.truncated;
        for (ea, xa, ca) in &a {
            'pair: for (eb, xb, cb) in &b {
                let mut over = false;
                let mut sum = [0.0; MAX_VARS];
                for v in 0..n {
                    sum[v] = xa[v] + xb[v];
                    if sum[v] >= precision[v] - EXPONENT_EPS {
                        continue 'pair;
                    }
                    if sum[v] > bound[v] + EXPONENT_EPS {
                        over = true;
                    }
                }
                if over {
                    for v in 0..n {
                        if sum[v] > bound[v] + EXPONENT_EPS {
                            dropped[v] = dropped[v].min(sum[v]);
                        }
                    }
                    truncated = true;
                    continue;
                }
                C::accumulate_product(acc.entry(ea.add(eb)).or_default(), ca, cb, 1.0);
            }
        }
        let mut out = Self {
            ctx: Arc::clone(&self.ctx),
            terms: acc.into_iter().map(|(e, a)| (e, C::finish(a))).collect(),
            bound,
            precision: min_arr(&precision, &dropped),
            truncated,
        };
        out.normalize();
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self, SeriesError> {
        let mut out = Self::constant(&self.ctx, C::from_real(1.0));
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Multiplies by the monomial `prod var^{exps}`; the frontier shifts with it.
    pub fn shift(&self, exps: &Exps) -> Self {
        let n = self.ctx.nvars();
        let x = self.ctx.numeric(exps);
        let mut out = self.clone();
        out.terms = self.terms.iter().map(|(e, c)| (e.add(exps), c.clone())).collect();
        for v in 0..n {
            out.precision[v] += x[v];
        }
        out.normalize();
        out
    }

    /// Applies a termwise map; `f` returns the new exponent tuple and a real
    /// factor, or `None` to annihilate the term. `precision` is the frontier
    /// of the result.
    pub fn map_terms<E>(
        &self,
        mut f: impl FnMut(&Exps, &C) -> Result<Option<(Exps, f64)>, E>,
        precision: &[f64],
    ) -> Result<Self, E> {
        let mut acc: BTreeMap<Exps, C::Acc> = BTreeMap::new();
        for (e, c) in &self.terms {
            if let Some((ne, k)) = f(e, c)? {
                C::accumulate(acc.entry(ne).or_default(), c, k);
            }
        }
        let mut out = Self {
            ctx: Arc::clone(&self.ctx),
            terms: acc.into_iter().map(|(e, a)| (e, C::finish(a))).collect(),
            bound: self.bound,
            precision: self.precision,
            truncated: self.truncated,
        };
        for (p, q) in out.precision.iter_mut().zip(precision) {
            *p = *q;
        }
        out.normalize();
        Ok(out)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> GenSeries<D> {
        let mut out = GenSeries::<D> {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(e, c)| (*e, f(c))).collect(),
            bound: self.bound,
            precision: self.precision,
            truncated: self.truncated,
        };
        out.normalize();
        out
    }

    /// Structural comparison: same support, coefficients within `tol`
    /// relative to the largest coefficient of either series.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.check_ctx(other).is_err() {
            return false;
        }
        let scale = self.max_magnitude().max(other.max_magnitude());
        let zero = C::zero();
        let keys: std::collections::BTreeSet<&Exps> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|k| {
            let a = self.terms.get(k).unwrap_or(&zero);
            let b = other.terms.get(k).unwrap_or(&zero);
            a.close_to(b, tol, scale)
        })
    }

    /// Terms sorted by numeric exponent (lexicographic over variables).
    pub fn sorted_terms(&self) -> Vec<(Exps, Vec<f64>, C)> {
        let mut v: Vec<(Exps, Vec<f64>, C)> =
            self.terms.iter().map(|(e, c)| (*e, self.numeric_exponents(e), c.clone())).collect();
        v.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        v
    }
}

/// Precomputed numeric form of a real series for repeated evaluation.
pub struct SeriesEvaluator {
    terms: Vec<(f64, Vec<(f64, bool)>)>,
}

impl SeriesEvaluator {
    pub fn eval(&self, point: &[f64]) -> Result<f64, SeriesError> {
        let mut sum = 0.0;
        for (c, exps) in &self.terms {
            let mut term = *c;
            for (&(e, integral), &x) in exps.iter().zip(point) {
                term *= power(x, e, integral)?;
            }
            sum += term;
        }
        Ok(sum)
    }
}

fn power(x: f64, e: f64, integral: bool) -> Result<f64, SeriesError> {
    if e == 0.0 {
        return Ok(1.0);
    }
    if x > 0.0 {
        return Ok(if integral { x.powi(e as i32) } else { x.powf(e) });
    }
    if x == 0.0 {
        return if e > 0.0 { Ok(0.0) } else { Err(SeriesError::Domain { base: x, exponent: e }) };
    }
    if integral {
        Ok(x.powi(e as i32))
    } else {
        Err(SeriesError::Domain { base: x, exponent: e })
    }
}

impl GenSeries<f64> {
    pub fn evaluator(&self) -> SeriesEvaluator {
        let p = self.params();
        let n = self.ctx.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| {
                let ex = (0..n)
                    .map(|v| {
                        let exp = &e.0[v];
                        match exp.as_integer(p) {
                            Some(k) => (k as f64, true),
                            None => (exp.value(p), false),
                        }
                    })
                    .collect();
                (c, ex)
            })
            .collect();
        SeriesEvaluator { terms }
    }

    /// Evaluates at one point (one coordinate per variable).
    pub fn eval(&self, point: &[f64]) -> Result<f64, SeriesError> {
        if point.len() != self.ctx.nvars() {
            return Err(SeriesError::VariableMismatch);
        }
        self.evaluator().eval(point)
    }

    pub fn lift<D: Coeff>(&self) -> GenSeries<D> {
        self.map_coeffs(|&c| D::from_real(c))
    }

    /// Human-readable listing, lowest exponents first.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = self.ctx.vars.clone();
        let pnames = self.params().names();
        let mut out = String::new();
        for (i, (e, _, c)) in self.sorted_terms().into_iter().enumerate() {
            if i > 0 {
                out.push_str(if c < 0.0 { " - " } else { " + " });
            } else if c < 0.0 {
                out.push('-');
            }
            let _ = write!(out, "{}", c.abs());
            for (v, name) in names.iter().enumerate() {
                if !e.0[v].is_zero() {
                    let _ = write!(out, "*{}^({})", name, e.0[v].display_with(pnames));
                }
            }
        }
        out
    }
}

impl GenSeries<Poly> {
    /// Substitutes numeric values for every polynomial symbol.
    pub fn specialize(&self, values: &[f64]) -> GenSeries<f64> {
        self.map_coeffs(|p| p.eval(values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<SeriesContext> {
        let p = ParamTable::new(vec![("alpha".into(), 0.4), ("beta".into(), 0.7)]).unwrap();
        SeriesContext::new(vec!["t".into(), "x".into()], p).unwrap()
    }

    fn xb(ctx: &Arc<SeriesContext>, k: i64) -> Exps {
        Exps::single(1, ctx.params().symbol("beta").unwrap().scale_int(k))
    }

    #[test]
    fn add_merges_terms() {
        let c = ctx();
        let a = GenSeries::constant(&c, 1.0).add(&GenSeries::monomial(&c, 1.0, xb(&c, 1))).unwrap();
        let b = GenSeries::constant(&c, -1.0).add(&GenSeries::monomial(&c, 1.0, xb(&c, 1))).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coeff(&xb(&c, 1)), Some(&2.0));
        assert_eq!(a.add(&GenSeries::zero(&c)).unwrap(), a);
    }

    #[test]
    fn square_of_binomial() {
        let c = ctx();
        let a = GenSeries::constant(&c, 1.0).add(&GenSeries::monomial(&c, 1.0, xb(&c, 1))).unwrap();
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&xb(&c, 2)), Some(&1.0));
        assert_eq!(sq.coeff(&xb(&c, 1)), Some(&2.0));
    }

    #[test]
    fn mixed_variable_exponent_addition() {
        let c = ctx();
        let alpha = c.params().symbol("alpha").unwrap();
        let a = GenSeries::monomial(&c, 1.0, xb(&c, 1));
        let b = GenSeries::monomial(&c, 1.0, Exps::single(0, alpha.neg()));
        let p = a.mul(&b).unwrap();
        assert_eq!(p.coeff(&xb(&c, 1).with(0, alpha.neg())), Some(&1.0));
    }

    #[test]
    fn truncation_lowers_precision() {
        let c = ctx();
        let hi = GenSeries::monomial(&c, 1.0, xb(&c, 10)); // x^7
        let sq = hi.mul(&hi).unwrap(); // x^14 > 12
        assert!(sq.is_zero());
        assert!(sq.is_truncated());
        assert!((sq.precision()[1] - 14.0).abs() < 1e-12);
    }

    #[test]
    fn eval_and_domain() {
        let c = ctx();
        let s = GenSeries::monomial(&c, 1.0, xb(&c, 1));
        let v = s.eval(&[1.0, 2.0]).unwrap();
        assert!((v - 2f64.powf(0.7)).abs() < 1e-15);
        assert!(matches!(s.eval(&[1.0, -1.0]), Err(SeriesError::Domain { .. })));
        assert_eq!(GenSeries::constant(&c, 3.0).eval(&[0.3, 0.9]).unwrap(), 3.0);
    }

    #[test]
    fn mismatched_contexts() {
        let c = ctx();
        let d = SeriesContext::new(vec!["t".into()], ParamTable::empty()).unwrap();
        let a = GenSeries::constant(&c, 1.0);
        let b = GenSeries::constant(&d, 1.0);
        assert!(matches!(a.add(&b), Err(SeriesError::VariableMismatch)));
    }
}
