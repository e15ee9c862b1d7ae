//! Invariance checks and reduction of PDE systems to FODE systems.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::fracalc::DerivKind;
use crate::series::{fit_to_basis, ExponentVector, GenSeries, ParamTable, Poly, SeriesContext};

use super::expr::{apply, Inputs, OperatorExpr};
use super::OperatorError;

/// One term `coeff * (D^order)^times` of a time operator.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeTerm {
    pub coeff: f64,
    pub order: ExponentVector,
    pub kind: DerivKind,
    pub times: u32,
}

impl TimeTerm {
    pub fn new(coeff: f64, order: ExponentVector, kind: DerivKind) -> Self {
        Self { coeff, order, kind, times: 1 }
    }

    pub fn repeated(mut self, times: u32) -> Self {
        self.times = times;
        self
    }

    /// Order of the composite derivative.
    pub fn total_order(&self) -> ExponentVector {
        self.order.scale_int(self.times as i64)
    }
}

/// One field of a PDE system together with its subspace.
#[derive(Debug, Clone)]
pub struct ComponentSpec {
    pub name: String,
    pub time: Vec<TimeTerm>,
    pub operator: OperatorExpr,
    pub basis: Vec<GenSeries<f64>>,
    /// Names of the coefficient functions, one per basis element.
    pub unknowns: Vec<String>,
}

/// System `sum_i λ_pi D^{γ(i,p)} f_p = N_p[f]`.
#[derive(Debug, Clone)]
pub struct PdeSystem {
    pub ctx: Arc<SeriesContext>,
    pub components: Vec<ComponentSpec>,
}

/// Polynomial symbol: an unknown coefficient function, or a formal time derivative of one.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySymbol {
    pub unknown: usize,
    pub time_order: Option<ExponentVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolTable {
    pub unknown_names: Vec<String>,
    pub symbols: Vec<PolySymbol>,
    param_names: Vec<String>,
}

impl SymbolTable {
    /// Plain symbols for every unknown, then one block per mixed time order.
    pub fn new(unknown_names: Vec<String>, mixed_orders: &[ExponentVector], params: &ParamTable) -> Self {
        let n = unknown_names.len();
        let mut symbols: Vec<PolySymbol> = (0..n).map(|u| PolySymbol { unknown: u, time_order: None }).collect();
        for o in mixed_orders {
            symbols.extend((0..n).map(|u| PolySymbol { unknown: u, time_order: Some(*o) }));
        }
        Self { unknown_names, symbols, param_names: params.names().to_vec() }
    }

    pub fn name(&self, sym: u32) -> String {
        let s = &self.symbols[sym as usize];
        let base = &self.unknown_names[s.unknown];
        match &s.time_order {
            None => base.clone(),
            Some(o) => format!("D^{{{}}}[{}]", o.display_with(&self.param_names), base),
        }
    }

    /// Symbol index of unknown `u` (plain or differentiated).
    pub fn index_of(&self, unknown: usize, time_order: Option<&ExponentVector>) -> Option<u32> {
        self.symbols
            .iter()
            .position(|s| s.unknown == unknown && s.time_order.as_ref() == time_order)
            .map(|i| i as u32)
    }

    pub fn render(&self, p: &Poly) -> String {
        let name = |s: u32| self.name(s);
        let shown = p.display_with(&name).to_string();
        shown
    }
}

/// Outcome of fitting one component's image to its basis.
#[derive(Debug, Clone)]
pub struct ComponentFit {
    pub in_span: bool,
    pub residual_terms: usize,
    pub frontier: Vec<f64>,
    /// Terms at or beyond the truncation frontier that were discarded.
    pub beyond_frontier: usize,
}

#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub invariant: bool,
    /// `psi[p][j]`: coefficient of basis function `j` in `N_p` of the generic element.
    pub psi: Vec<Vec<Poly>>,
    pub fits: Vec<ComponentFit>,
    pub symbols: SymbolTable,
}

impl PdeSystem {
    pub fn unknown_names(&self) -> Vec<String> {
        self.components.iter().flat_map(|c| c.unknowns.iter().cloned()).collect()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.components.len());
        let mut acc = 0;
        for c in &self.components {
            out.push(acc);
            acc += c.basis.len();
        }
        out
    }

    fn validate(&self) -> Result<(), OperatorError> {
        let r = self.components.len();
        for c in &self.components {
            if c.basis.is_empty() || c.basis.len() != c.unknowns.len() {
                return Err(OperatorError::Invalid(format!("component {} needs one unknown per basis function", c.name)));
            }
            if matches!(c.operator.max_component(), Some(p) if p >= r) {
                return Err(OperatorError::Component(c.operator.max_component().unwrap_or(0)));
            }
        }
        Ok(())
    }

    fn mixed_orders(&self) -> Vec<ExponentVector> {
        let mut orders = Vec::new();
        for c in &self.components {
            c.operator.mixed_orders(&mut orders);
        }
        orders
    }

    pub fn symbol_table(&self) -> SymbolTable {
        SymbolTable::new(self.unknown_names(), &self.mixed_orders(), self.ctx.params())
    }

    fn generic_fields(&self, table: &SymbolTable, order: Option<&ExponentVector>) -> Vec<GenSeries<Poly>> {
        let offsets = self.offsets();
        self.components
            .iter()
            .zip(&offsets)
            .map(|(c, &off)| {
                c.basis.iter().enumerate().fold(GenSeries::zero(&self.ctx), |acc, (j, phi)| {
                    let sym = table.index_of(off + j, order).expect("symbol table covers every unknown");
                    acc.add(&phi.lift::<Poly>().mul_coeff(&Poly::var(sym))).expect("shared context")
                })
            })
            .collect()
    }

    /// Applies every `N_p` to the generic element and fits the images to the bases.
    pub fn check_invariant(&self) -> Result<InvarianceReport, OperatorError> {
        self.validate()?;
        let table = self.symbol_table();
        let fields = self.generic_fields(&table, None);
        let mut subs = BTreeMap::new();
        for o in self.mixed_orders() {
            subs.insert(o, self.generic_fields(&table, Some(&o)));
        }
        let inputs = Inputs { ctx: &self.ctx, fields: &fields, time_derivatives: Some(&subs) };
        let mut psi = Vec::new();
        let mut fits = Vec::new();
        for c in &self.components {
            let image = apply(&c.operator, &inputs)?;
            let fit = fit_to_basis(&image, &c.basis)?;
            fits.push(ComponentFit {
                in_span: fit.in_span,
                residual_terms: fit.residual.len(),
                frontier: fit.frontier.clone(),
                beyond_frontier: fit.beyond_frontier,
            });
            psi.push(fit.coeffs);
        }
        let invariant = fits.iter().all(|f| f.in_span);
        Ok(InvarianceReport { invariant, psi, fits, symbols: table })
    }

    /// Reduced FODE system; fails unless the subspace is invariant.
    pub fn reduce(&self) -> Result<FodeSystem, OperatorError> {
        let report = self.check_invariant()?;
        if !report.invariant {
            let bad: Vec<&str> =
                self.components.iter().zip(&report.fits).filter(|(_, f)| !f.in_span).map(|(c, _)| c.name.as_str()).collect();
            return Err(OperatorError::NotInvariant(bad.join(", ")));
        }
        let offsets = self.offsets();
        let mut equations = Vec::new();
        for ((c, &off), psi) in self.components.iter().zip(&offsets).zip(report.psi) {
            for (j, rhs) in psi.into_iter().enumerate() {
                equations.push(FodeEquation { unknown: off + j, lhs: c.time.clone(), rhs });
            }
        }
        Ok(FodeSystem { ctx: Arc::clone(&self.ctx), symbols: report.symbols, equations })
    }
}

/// `sum_i λ_i D^{γ_i} K_u = ψ(K, D^γ K)`.
#[derive(Debug, Clone)]
pub struct FodeEquation {
    pub unknown: usize,
    pub lhs: Vec<TimeTerm>,
    pub rhs: Poly,
}

/// Reduced system; unknowns are indexed as in [`SymbolTable::unknown_names`].
#[derive(Debug, Clone)]
pub struct FodeSystem {
    pub ctx: Arc<SeriesContext>,
    pub symbols: SymbolTable,
    pub equations: Vec<FodeEquation>,
}

impl FodeSystem {
    pub fn unknown_names(&self) -> &[String] {
        &self.symbols.unknown_names
    }

    pub fn equation_for(&self, unknown: usize) -> Option<&FodeEquation> {
        self.equations.iter().find(|e| e.unknown == unknown)
    }

    /// Canonical one-equation-per-line rendering.
    pub fn render_equation(&self, eq: &FodeEquation) -> String {
        let params = self.ctx.params();
        let name = &self.symbols.unknown_names[eq.unknown];
        let lhs: Vec<String> = eq
            .lhs
            .iter()
            .map(|t| {
                let kind = match t.kind {
                    DerivKind::Caputo => "",
                    DerivKind::RiemannLiouville => "RL",
                };
                let d = format!("{kind}D^{{{}}}", t.order.display(params));
                let d = if t.times > 1 { format!("({d})^{}", t.times) } else { d };
                format!("{}*{d}[{name}]", t.coeff)
            })
            .collect();
        format!("{} = {}", lhs.join(" + "), self.symbols.render(&eq.rhs))
    }
}

impl fmt::Display for FodeSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for eq in &self.equations {
            writeln!(f, "{}", self.render_equation(eq))?;
        }
        Ok(())
    }
}
