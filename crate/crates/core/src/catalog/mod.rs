//! Encodings of the worked examples and the harness that replays reduction and
//! solution checks for each of them.

mod doc;
mod examples;
mod figures;
mod sample;
mod solution;
mod solve;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::fode::FodeError;
use crate::fracalc::FracError;
use crate::operators::{FodeSystem, OperatorError};
use crate::series::{Poly, SeriesError};
use crate::specfun::SpecFunError;

pub use doc::{
    AlternateDoc, BasisFactor, BasisFn, ComponentDoc, ExprDoc, ParamEntry, ParamRole, ProblemSpec, RangeDoc, TimeKind,
    TimeTermDoc, SCHEMA_VERSION,
};
pub use figures::{figure, figure_ids, Figure, Panel};
pub use sample::{sample, sample_figure, sample_spec, write_csv, Table};
pub use solve::{solve, Solved};
pub use solution::{FieldEvaluator, KnownSolution, MlSeriesSum, SeriesBuilder, TimeAtom, TimeFn};
pub use verify::{
    random_draws, verify, verify_many, verify_spec, Stage, StageStatus, VerificationReport, VerifyOptions, DEFAULT_TOLERANCE,
    ORACLE_TRUNCATION,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown example '{0}'")]
    UnknownExample(String),
    #[error("example {example} has no parameter '{name}'")]
    UnknownParameter { example: String, name: String },
    #[error("parameter {name}={value} is out of range: {range}")]
    ParamOutOfRange { name: String, value: f64, range: String },
    #[error("invalid problem spec: {0}")]
    Spec(String),
    #[error("schema version {found} is not supported (expected {expected})")]
    Schema { found: u32, expected: u32 },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("unknown figure {0}")]
    UnknownFigure(u32),
    #[error("output error: {0}")]
    Output(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Frac(#[from] FracError),
    #[error(transparent)]
    Fode(#[from] FodeError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// Admissible interval of a parameter, with isolated excluded points.
#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub min_open: bool,
    pub max_open: bool,
    pub excluded: Vec<f64>,
}

impl Range {
    /// `(0, 1]`, the usual range of a fractional order.
    pub fn unit_order() -> Self {
        Self { min: 0.0, max: 1.0, min_open: true, max_open: false, excluded: Vec::new() }
    }

    pub fn open(min: f64, max: f64) -> Self {
        Self { min, max, min_open: true, max_open: true, excluded: Vec::new() }
    }

    pub fn closed(min: f64, max: f64) -> Self {
        Self { min, max, min_open: false, max_open: false, excluded: Vec::new() }
    }

    pub fn excluding(mut self, x: f64) -> Self {
        self.excluded.push(x);
        self
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.min_open { x > self.min } else { x >= self.min };
        let below = if self.max_open { x < self.max } else { x <= self.max };
        above && below && !self.excluded.iter().any(|&e| (x - e).abs() < 1e-12)
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.min_open { '(' } else { '[' };
        let r = if self.max_open { ')' } else { ']' };
        write!(f, "{l}{}, {}{r}", self.min, self.max)?;
        if !self.excluded.is_empty() {
            let shown: Vec<String> = self.excluded.iter().map(f64::to_string).collect();
            write!(f, " \\ {{{}}}", shown.join(", "))?;
        }
        Ok(())
    }
}

/// Declared parameter of an example.
#[derive(Debug, Clone)]
pub struct ParamDecl {
    pub name: &'static str,
    pub role: ParamRole,
    /// NaN means the example derives the value from the other parameters.
    pub default: f64,
    pub range: Option<Range>,
    /// Human-readable statement of the admissible set, used in error messages.
    pub range_text: &'static str,
    /// Interval for random draws; `None` keeps the default.
    pub draw: Option<(f64, f64)>,
}

impl ParamDecl {
    pub fn order(name: &'static str, default: f64, range_text: &'static str) -> Self {
        Self { name, role: ParamRole::Order, default, range: Some(Range::unit_order()), range_text, draw: Some((0.3, 1.0)) }
    }

    pub fn coefficient(name: &'static str, default: f64) -> Self {
        Self { name, role: ParamRole::Coefficient, default, range: None, range_text: "any real", draw: None }
    }

    pub fn free(name: &'static str, default: f64) -> Self {
        Self { name, role: ParamRole::FreeConstant, default, range: None, range_text: "any real", draw: None }
    }

    pub fn with_range(mut self, range: Range, text: &'static str) -> Self {
        self.range = Some(range);
        self.range_text = text;
        self
    }

    pub fn drawn(mut self, lo: f64, hi: f64) -> Self {
        self.draw = Some((lo, hi));
        self
    }
}

/// Name-value map of bound parameters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Values(BTreeMap<String, f64>);

impl Values {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> Self {
        Self(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.0.insert(name.to_string(), value);
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Value of a declared parameter; declarations guarantee presence after binding.
    pub(crate) fn at(&self, name: &str) -> f64 {
        match self.0.get(name) {
            Some(&v) => v,
            None => panic!("parameter '{name}' is not bound"),
        }
    }
}

/// One worked example: its parameters, PDE encoding, displayed reduced system and closed form.
pub trait Example: Sync {
    fn id(&self) -> &'static str;

    /// Short description of the system and the solution family.
    fn provenance(&self) -> &'static str;

    fn params(&self) -> Vec<ParamDecl>;

    /// Cross-parameter conditions beyond the per-parameter ranges.
    fn check(&self, _values: &Values) -> Result<(), CatalogError> {
        Ok(())
    }

    fn spec(&self, values: &Values) -> Result<ProblemSpec, CatalogError>;

    /// Right-hand sides of the displayed reduced system, indexed like the system's unknowns.
    fn target(&self, values: &Values, sys: &FodeSystem) -> Result<Vec<Poly>, CatalogError>;

    fn known(&self, values: &Values, spec: &ProblemSpec) -> Result<KnownSolution, CatalogError>;

    /// Closed forms on the alternate subspaces, where one exists.
    fn alternate_known(&self, _values: &Values, _spec: &ProblemSpec, _which: usize) -> Option<Result<KnownSolution, CatalogError>> {
        None
    }

    /// Grid for the residual check, one `(min, max, count)` per variable.
    fn verify_grid(&self, values: &Values) -> Vec<(f64, f64, usize)>;
}

fn registry() -> &'static [&'static dyn Example] {
    examples::ALL
}

/// Ids and descriptions of every example, in catalog order.
pub fn list() -> Vec<(&'static str, &'static str)> {
    registry().iter().map(|e| (e.id(), e.provenance())).collect()
}

pub fn example(id: &str) -> Result<&'static dyn Example, CatalogError> {
    registry().iter().copied().find(|e| e.id() == id).ok_or_else(|| CatalogError::UnknownExample(id.to_string()))
}

/// Defaults merged with `overrides`, checked against the declared ranges.
pub fn bind(ex: &dyn Example, overrides: &Values) -> Result<Values, CatalogError> {
    let decls = ex.params();
    for (name, _) in overrides.iter() {
        if !decls.iter().any(|d| d.name == name) {
            return Err(CatalogError::UnknownParameter { example: ex.id().into(), name: name.into() });
        }
    }
    let mut values = Values::new();
    for d in &decls {
        let v = overrides.get(d.name).unwrap_or(d.default);
        // a NaN default is filled in by the example once the orders are known
        if v.is_nan() && overrides.get(d.name).is_none() {
            values.set(d.name, v);
            continue;
        }
        if !v.is_finite() {
            return Err(CatalogError::ParamOutOfRange { name: d.name.into(), value: v, range: d.range_text.into() });
        }
        if let Some(r) = &d.range {
            if !r.contains(v) {
                return Err(CatalogError::ParamOutOfRange { name: d.name.into(), value: v, range: d.range_text.into() });
            }
        }
        values.set(d.name, v);
    }
    ex.check(&values)?;
    Ok(values)
}

/// Fully bound problem and its closed-form solution.
pub fn build(id: &str, overrides: &Values) -> Result<(ProblemSpec, KnownSolution), CatalogError> {
    let ex = example(id)?;
    let values = bind(ex, overrides)?;
    let spec = ex.spec(&values)?;
    let known = ex.known(&values, &spec)?;
    Ok((spec, known))
}

/// Rebuilds the closed form for a spec whose id names a catalog example.
pub fn known_for_spec(spec: &ProblemSpec) -> Result<KnownSolution, CatalogError> {
    let ex = example(&spec.id)?;
    let values = bind(ex, &spec.values())?;
    ex.known(&values, spec)
}
