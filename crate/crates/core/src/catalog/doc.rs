//! Versioned JSON model of a problem. Exponents are stored as text such as `2*beta+1`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::fracalc::DerivKind;
use crate::operators::{ComponentSpec, OperatorExpr, PdeSystem, TimeTerm};
use crate::series::{
    frac_cos_series, frac_sin_series, power_term, ExponentVector, GenSeries, MlTerm, ParamTable, SeriesContext,
};
use crate::specfun::{frac_cos, frac_sin, mittag_leffler, FracTrigParams, MLParams, DEFAULT_TOL};

use super::{CatalogError, Range, Values};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamRole {
    /// Symbolic order; may appear in exponents.
    Order,
    Coefficient,
    FreeConstant,
    Dimension,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeDoc {
    pub min: f64,
    pub max: f64,
    pub min_open: bool,
    pub max_open: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excluded: Vec<f64>,
    pub text: String,
}

impl RangeDoc {
    pub fn from_range(r: &Range, text: &str) -> Self {
        Self { min: r.min, max: r.max, min_open: r.min_open, max_open: r.max_open, excluded: r.excluded.clone(), text: text.into() }
    }

    pub fn range(&self) -> Range {
        Range { min: self.min, max: self.max, min_open: self.min_open, max_open: self.max_open, excluded: self.excluded.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamEntry {
    pub name: String,
    pub value: f64,
    pub role: ParamRole,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<RangeDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeKind {
    Caputo,
    RiemannLiouville,
}

impl From<TimeKind> for DerivKind {
    fn from(k: TimeKind) -> Self {
        match k {
            TimeKind::Caputo => DerivKind::Caputo,
            TimeKind::RiemannLiouville => DerivKind::RiemannLiouville,
        }
    }
}

fn one() -> u32 {
    1
}

fn is_one(n: &u32) -> bool {
    *n == 1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeTermDoc {
    pub coeff: f64,
    pub order: String,
    pub kind: TimeKind,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub times: u32,
}

/// Operator tree; fields are referred to by component name, variables by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ExprDoc {
    Field { name: String },
    /// `times`-fold sequential Caputo derivative in a space variable.
    Dx {
        var: String,
        order: String,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        times: u32,
        arg: Box<ExprDoc>,
    },
    /// Caputo time derivative of a linear argument.
    Dt { order: String, arg: Box<ExprDoc> },
    Coord { var: String, exponent: String },
    Sum { terms: Vec<ExprDoc> },
    Product { factors: Vec<ExprDoc> },
    Scale { k: f64, arg: Box<ExprDoc> },
    Power { n: u32, arg: Box<ExprDoc> },
    Constant { value: f64 },
}

impl ExprDoc {
    pub fn field(name: &str) -> Self {
        Self::Field { name: name.into() }
    }

    pub fn dx(self, var: &str, order: &str) -> Self {
        self.dx_seq(var, order, 1)
    }

    pub fn dx_seq(self, var: &str, order: &str, times: u32) -> Self {
        Self::Dx { var: var.into(), order: order.into(), times, arg: Box::new(self) }
    }

    pub fn dt(self, order: &str) -> Self {
        Self::Dt { order: order.into(), arg: Box::new(self) }
    }

    pub fn coord(var: &str, exponent: &str) -> Self {
        Self::Coord { var: var.into(), exponent: exponent.into() }
    }

    pub fn scale(self, k: f64) -> Self {
        Self::Scale { k, arg: Box::new(self) }
    }

    pub fn times(self, other: Self) -> Self {
        Self::Product { factors: vec![self, other] }
    }

    pub fn pow(self, n: u32) -> Self {
        Self::Power { n, arg: Box::new(self) }
    }

    pub fn sum(terms: Vec<Self>) -> Self {
        Self::Sum { terms }
    }

    pub fn constant(value: f64) -> Self {
        Self::Constant { value }
    }
}

/// One factor of a separable basis function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisFactor {
    /// `var^exponent`
    Power { var: String, exponent: String },
    /// `E_order(lambda var^order)`
    MittagLeffler { var: String, order: String, lambda: f64 },
    /// `sin_order(lambda var^order)`
    Sin { var: String, order: String, lambda: f64 },
    /// `cos_order(lambda var^order)`
    Cos { var: String, order: String, lambda: f64 },
}

/// `coeff * prod(factors)`; the empty product is the constant function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisFn {
    #[serde(default = "unit", skip_serializing_if = "is_unit")]
    pub coeff: f64,
    #[serde(default)]
    pub factors: Vec<BasisFactor>,
}

fn unit() -> f64 {
    1.0
}

fn is_unit(x: &f64) -> bool {
    *x == 1.0
}

impl BasisFn {
    pub fn one() -> Self {
        Self { coeff: 1.0, factors: Vec::new() }
    }

    pub fn of(factors: Vec<BasisFactor>) -> Self {
        Self { coeff: 1.0, factors }
    }

    pub fn power(var: &str, exponent: &str) -> Self {
        Self::of(vec![BasisFactor::Power { var: var.into(), exponent: exponent.into() }])
    }

    pub fn ml(var: &str, order: &str, lambda: f64) -> Self {
        Self::of(vec![BasisFactor::MittagLeffler { var: var.into(), order: order.into(), lambda }])
    }

    pub fn sin(var: &str, order: &str, lambda: f64) -> Self {
        Self::of(vec![BasisFactor::Sin { var: var.into(), order: order.into(), lambda }])
    }

    pub fn cos(var: &str, order: &str, lambda: f64) -> Self {
        Self::of(vec![BasisFactor::Cos { var: var.into(), order: order.into(), lambda }])
    }

    pub fn series(&self, ctx: &Arc<SeriesContext>) -> Result<GenSeries<f64>, CatalogError> {
        let params = ctx.params();
        let mut acc = GenSeries::constant(ctx, self.coeff);
        for f in &self.factors {
            let s = match f {
                BasisFactor::Power { var, exponent } => {
                    power_term(ctx, var_index(ctx, var)?, parse_exp(exponent, params)?, 1.0)
                }
                BasisFactor::MittagLeffler { var, order, lambda } => {
                    MlTerm::new(var_index(ctx, var)?, parse_exp(order, params)?, ExponentVector::integer(1), *lambda)
                        .expand(ctx)?
                }
                BasisFactor::Sin { var, order, lambda } => {
                    frac_sin_series(ctx, var_index(ctx, var)?, &parse_exp(order, params)?, *lambda)?
                }
                BasisFactor::Cos { var, order, lambda } => {
                    frac_cos_series(ctx, var_index(ctx, var)?, &parse_exp(order, params)?, *lambda)?
                }
            };
            acc = acc.mul(&s)?;
        }
        Ok(acc)
    }

    /// Pointwise value from the special functions themselves (no truncation).
    pub fn eval(&self, vars: &[String], params: &ParamTable, point: &[f64]) -> Result<f64, CatalogError> {
        let mut acc = self.coeff;
        for f in &self.factors {
            let at = |var: &str| -> Result<f64, CatalogError> {
                let i = vars.iter().position(|v| v == var).ok_or_else(|| CatalogError::Spec(format!("unknown variable '{var}'")))?;
                Ok(point[i])
            };
            acc *= match f {
                BasisFactor::Power { var, exponent } => at(var)?.powf(parse_exp(exponent, params)?.value(params)),
                BasisFactor::MittagLeffler { var, order, lambda } => {
                    let a = parse_exp(order, params)?.value(params);
                    mittag_leffler(MLParams::new(a, 1.0)?, lambda * at(var)?.powf(a), DEFAULT_TOL)?
                }
                BasisFactor::Sin { var, order, lambda } => {
                    frac_sin(FracTrigParams::new(parse_exp(order, params)?.value(params), *lambda)?, at(var)?, DEFAULT_TOL)?
                }
                BasisFactor::Cos { var, order, lambda } => {
                    frac_cos(FracTrigParams::new(parse_exp(order, params)?.value(params), *lambda)?, at(var)?, DEFAULT_TOL)?
                }
            };
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub name: String,
    pub time: Vec<TimeTermDoc>,
    pub operator: ExprDoc,
    pub basis: Vec<BasisFn>,
    pub unknowns: Vec<String>,
}

/// A second subspace for the same operators, one basis per component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternateDoc {
    pub label: String,
    pub bases: Vec<Vec<BasisFn>>,
    pub unknowns: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub schema_version: u32,
    pub id: String,
    pub variables: Vec<String>,
    pub params: Vec<ParamEntry>,
    pub truncation: f64,
    pub components: Vec<ComponentDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alternates: Vec<AlternateDoc>,
    /// Per unknown: `K(0), K'(0), ...` as the leading time term requires.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_data: Option<Vec<Vec<f64>>>,
}

fn parse_exp(text: &str, params: &ParamTable) -> Result<ExponentVector, CatalogError> {
    ExponentVector::parse(text, params).map_err(|e| CatalogError::Spec(e.to_string()))
}

fn var_index(ctx: &SeriesContext, name: &str) -> Result<usize, CatalogError> {
    ctx.var_index(name).ok_or_else(|| CatalogError::Spec(format!("unknown variable '{name}'")))
}

impl ProblemSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        let spec: Self = serde_json::from_str(text).map_err(|e| CatalogError::Spec(e.to_string()))?;
        if spec.schema_version != SCHEMA_VERSION {
            return Err(CatalogError::Schema { found: spec.schema_version, expected: SCHEMA_VERSION });
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Every parameter value by name.
    pub fn values(&self) -> Values {
        let mut v = Values::new();
        for p in &self.params {
            v.set(&p.name, p.value);
        }
        v
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|p| p.name == name).map(|p| p.value)
    }

    pub fn order_params(&self) -> Result<ParamTable, CatalogError> {
        let entries = self.params.iter().filter(|p| p.role == ParamRole::Order).map(|p| (p.name.clone(), p.value)).collect();
        Ok(ParamTable::new(entries)?)
    }

    /// Range and structure checks that do not need the series engine.
    pub fn validate(&self) -> Result<(), CatalogError> {
        for p in &self.params {
            if let Some(r) = &p.range {
                if !r.range().contains(p.value) {
                    return Err(CatalogError::ParamOutOfRange { name: p.name.clone(), value: p.value, range: r.text.clone() });
                }
            }
        }
        if !(self.truncation > 0.0 && self.truncation.is_finite()) {
            return Err(CatalogError::Spec(format!("truncation must be positive, got {}", self.truncation)));
        }
        if self.variables.first().map(String::as_str) != Some("t") {
            return Err(CatalogError::Spec("the first variable must be t".into()));
        }
        for c in &self.components {
            if c.basis.len() != c.unknowns.len() || c.basis.is_empty() {
                return Err(CatalogError::Spec(format!("component {} needs one unknown per basis function", c.name)));
            }
        }
        for a in &self.alternates {
            if a.bases.len() != self.components.len() || a.unknowns.len() != self.components.len() {
                return Err(CatalogError::Spec(format!("alternate {} must cover every component", a.label)));
            }
        }
        if let Some(ics) = &self.initial_data {
            let n: usize = self.components.iter().map(|c| c.unknowns.len()).sum();
            if ics.len() != n {
                return Err(CatalogError::Spec(format!("{} initial-data rows for {n} unknowns", ics.len())));
            }
        }
        Ok(())
    }

    pub fn context(&self) -> Result<Arc<SeriesContext>, CatalogError> {
        Ok(SeriesContext::with_truncation(self.variables.clone(), self.order_params()?, self.truncation)?)
    }

    pub fn system(&self) -> Result<PdeSystem, CatalogError> {
        let bases: Vec<Vec<BasisFn>> = self.components.iter().map(|c| c.basis.clone()).collect();
        let unknowns: Vec<Vec<String>> = self.components.iter().map(|c| c.unknowns.clone()).collect();
        self.system_with(&bases, &unknowns)
    }

    pub fn alternate_system(&self, which: usize) -> Result<PdeSystem, CatalogError> {
        let alt = self.alternates.get(which).ok_or_else(|| CatalogError::Spec(format!("no alternate subspace {which}")))?;
        self.system_with(&alt.bases, &alt.unknowns)
    }

    fn system_with(&self, bases: &[Vec<BasisFn>], unknowns: &[Vec<String>]) -> Result<PdeSystem, CatalogError> {
        self.validate()?;
        let ctx = self.context()?;
        let names: Vec<&str> = self.components.iter().map(|c| c.name.as_str()).collect();
        let mut components = Vec::with_capacity(self.components.len());
        for ((c, basis), unknowns) in self.components.iter().zip(bases).zip(unknowns) {
            let time = c
                .time
                .iter()
                .map(|t| Ok(TimeTerm::new(t.coeff, parse_exp(&t.order, ctx.params())?, t.kind.into()).repeated(t.times)))
                .collect::<Result<Vec<_>, CatalogError>>()?;
            components.push(ComponentSpec {
                name: c.name.clone(),
                time,
                operator: compile(&c.operator, &ctx, &names)?,
                basis: basis.iter().map(|b| b.series(&ctx)).collect::<Result<_, _>>()?,
                unknowns: unknowns.clone(),
            });
        }
        Ok(PdeSystem { ctx, components })
    }
}

fn compile(e: &ExprDoc, ctx: &SeriesContext, fields: &[&str]) -> Result<OperatorExpr, CatalogError> {
    let p = ctx.params();
    let sub = |x: &ExprDoc| compile(x, ctx, fields);
    Ok(match e {
        ExprDoc::Field { name } => {
            let i = fields.iter().position(|f| f == name).ok_or_else(|| CatalogError::Spec(format!("unknown field '{name}'")))?;
            OperatorExpr::component(i)
        }
        ExprDoc::Dx { var, order, times, arg } => {
            let v = var_index(ctx, var)?;
            if v == 0 {
                return Err(CatalogError::Spec("space derivatives cannot act on t".into()));
            }
            sub(arg)?.dx_seq(v, parse_exp(order, p)?, *times)
        }
        ExprDoc::Dt { order, arg } => sub(arg)?.dt_mixed(parse_exp(order, p)?),
        ExprDoc::Coord { var, exponent } => {
            OperatorExpr::CoordMonomial { var: var_index(ctx, var)?, exponent: parse_exp(exponent, p)? }
        }
        ExprDoc::Sum { terms } => OperatorExpr::sum(terms.iter().map(sub).collect::<Result<_, _>>()?),
        ExprDoc::Product { factors } => OperatorExpr::Product(factors.iter().map(sub).collect::<Result<_, _>>()?),
        ExprDoc::Scale { k, arg } => sub(arg)?.scale(*k),
        ExprDoc::Power { n, arg } => sub(arg)?.pow(*n),
        ExprDoc::Constant { value } => OperatorExpr::Constant(*value),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ProblemSpec {
        let f = ExprDoc::field("f");
        ProblemSpec {
            schema_version: SCHEMA_VERSION,
            id: "tiny".into(),
            variables: vec!["t".into(), "x".into()],
            params: vec![
                ParamEntry { name: "alpha".into(), value: 0.5, role: ParamRole::Order, range: None },
                ParamEntry { name: "beta".into(), value: 0.75, role: ParamRole::Order, range: None },
            ],
            truncation: 6.0,
            components: vec![ComponentDoc {
                name: "f".into(),
                time: vec![TimeTermDoc { coeff: 1.0, order: "alpha".into(), kind: TimeKind::Caputo, times: 1 }],
                operator: f.clone().times(f.dx("x", "beta")),
                basis: vec![BasisFn::one(), BasisFn::power("x", "beta")],
                unknowns: vec!["K1".into(), "K2".into()],
            }],
            alternates: Vec::new(),
            initial_data: None,
        }
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let spec = tiny();
        let back = ProblemSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn compiled_system_reduces() {
        let sys = tiny().system().unwrap();
        let fode = sys.reduce().unwrap();
        assert_eq!(fode.equations.len(), 2);
    }

    #[test]
    fn bad_documents_are_reported() {
        let mut s = tiny();
        s.schema_version = 99;
        assert!(matches!(ProblemSpec::from_json(&s.to_json()), Err(CatalogError::Schema { .. })));
        let mut s = tiny();
        s.components[0].operator = ExprDoc::field("h");
        assert!(matches!(s.system(), Err(CatalogError::Spec(_))));
        let mut s = tiny();
        s.components[0].operator = ExprDoc::field("f").dx("t", "beta");
        assert!(s.system().is_err());
    }

    #[test]
    fn basis_values_agree_with_series() {
        let spec = tiny();
        let ctx = SeriesContext::with_truncation(spec.variables.clone(), spec.order_params().unwrap(), 30.0).unwrap();
        let b = BasisFn::of(vec![
            BasisFactor::Cos { var: "x".into(), order: "beta".into(), lambda: 0.7 },
            BasisFactor::Power { var: "x".into(), exponent: "beta".into() },
        ]);
        let s = b.series(&ctx).unwrap().eval(&[0.0, 0.6]).unwrap();
        let direct = b.eval(&spec.variables, ctx.params(), &[0.0, 0.6]).unwrap();
        assert!((s - direct).abs() < 1e-12);
    }
}
