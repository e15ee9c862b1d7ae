//! The ten worked examples and the helpers they share.

mod boussinesq_2d;
mod boussinesq_system;
mod burgers;
mod coupled_ml;
mod diffusion;
mod dispersive_kdv;
mod kdv;
mod mixed;
mod population;
mod scale_wave;

use crate::operators::FodeSystem;
use crate::series::{ExponentVector, ParamTable, Poly};
use crate::specfun::gamma_real;

use super::doc::{ComponentDoc, ParamEntry, ProblemSpec, RangeDoc, TimeKind, TimeTermDoc, SCHEMA_VERSION};
use super::{CatalogError, Example, ParamDecl, Values};

pub static ALL: &[&dyn Example] = &[
    &burgers::Burgers,
    &coupled_ml::CoupledMl,
    &boussinesq_system::BoussinesqSystem,
    &kdv::KdvSystem,
    &dispersive_kdv::DispersiveKdv,
    &population::Population,
    &scale_wave::ScaleWave,
    &boussinesq_2d::Boussinesq2d,
    &diffusion::DiffusionLike,
    &mixed::MixedDerivative,
];

/// Truncation bound every example is built with unless overridden.
pub const TRUNCATION: f64 = 12.0;

pub(super) fn entries<'a>(decls: impl IntoIterator<Item = &'a ParamDecl>, values: &Values) -> Vec<ParamEntry> {
    decls
        .into_iter()
        .map(|d| ParamEntry {
            name: d.name.into(),
            value: values.at(d.name),
            role: d.role,
            range: d.range.as_ref().map(|r| RangeDoc::from_range(r, d.range_text)),
        })
        .collect()
}

pub(super) fn problem(
    id: &str,
    variables: &[&str],
    params: Vec<ParamEntry>,
    components: Vec<ComponentDoc>,
) -> ProblemSpec {
    ProblemSpec {
        schema_version: SCHEMA_VERSION,
        id: id.into(),
        variables: variables.iter().map(|v| v.to_string()).collect(),
        params,
        truncation: TRUNCATION,
        components,
        alternates: Vec::new(),
        initial_data: None,
    }
}

pub(super) fn time(coeff: f64, order: &str, kind: TimeKind) -> TimeTermDoc {
    TimeTermDoc { coeff, order: order.into(), kind, times: 1 }
}

pub(super) fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Exponent parsed against the spec's order symbols.
pub(super) fn exp(spec: &ProblemSpec, text: &str) -> Result<ExponentVector, CatalogError> {
    let params: ParamTable = spec.order_params()?;
    ExponentVector::parse(text, &params).map_err(|e| CatalogError::Spec(e.to_string()))
}

/// `Γ(1 + x)`.
pub(super) fn gamma1(x: f64) -> Result<f64, CatalogError> {
    Ok(gamma_real(1.0 + x)?)
}

/// Polynomial symbols of a reduced system, looked up by unknown name.
pub(super) struct Syms<'a>(pub &'a FodeSystem);

impl Syms<'_> {
    fn unknown(&self, name: &str) -> Result<usize, CatalogError> {
        self.0
            .unknown_names()
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CatalogError::Spec(format!("reduced system has no unknown {name}")))
    }

    pub fn k(&self, name: &str) -> Result<Poly, CatalogError> {
        let u = self.unknown(name)?;
        let s = self.0.symbols.index_of(u, None).expect("plain symbol exists");
        Ok(Poly::var(s))
    }

    /// Formal time derivative `D^order` of an unknown.
    pub fn d(&self, name: &str, order: &str) -> Result<Poly, CatalogError> {
        let u = self.unknown(name)?;
        let o = ExponentVector::parse(order, self.0.ctx.params()).map_err(|e| CatalogError::Spec(e.to_string()))?;
        let s = self
            .0
            .symbols
            .index_of(u, Some(&o))
            .ok_or_else(|| CatalogError::Spec(format!("reduced system has no D^{{{order}}}[{name}]")))?;
        Ok(Poly::var(s))
    }
}
