//! Residual of a candidate solution of a PDE system.

use crate::fracalc::{sequential_deriv, FracOrder};
use crate::series::{GenSeries, MAX_VARS};

use super::expr::{apply, Inputs};
use super::system::PdeSystem;
use super::OperatorError;

/// Candidate `f_p = sum_j K_pj(t) φ_pj`, with each `K_pj` a series in `t`.
#[derive(Debug, Clone)]
pub struct SolutionForm {
    pub coefficients: Vec<Vec<GenSeries<f64>>>,
}

impl SolutionForm {
    pub fn assemble(&self, sys: &PdeSystem) -> Result<Vec<GenSeries<f64>>, OperatorError> {
        if self.coefficients.len() != sys.components.len() {
            return Err(OperatorError::Invalid("solution has the wrong number of components".into()));
        }
        let mut out = Vec::with_capacity(self.coefficients.len());
        for (ks, c) in self.coefficients.iter().zip(&sys.components) {
            if ks.len() != c.basis.len() {
                return Err(OperatorError::Invalid(format!("component {} needs {} coefficients", c.name, c.basis.len())));
            }
            let mut f = GenSeries::zero(&sys.ctx);
            for (k, phi) in ks.iter().zip(&c.basis) {
                f = f.add(&k.mul(phi)?)?;
            }
            out.push(f);
        }
        Ok(out)
    }
}

/// Tensor grid given per variable as `(min, max, count)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub axes: Vec<(f64, f64, usize)>,
}

impl Grid {
    pub fn new(axes: Vec<(f64, f64, usize)>) -> Result<Self, OperatorError> {
        if axes.is_empty() || axes.len() > MAX_VARS {
            return Err(OperatorError::Invalid("grid needs one axis per variable".into()));
        }
        for &(lo, hi, n) in &axes {
            if n == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
                return Err(OperatorError::Invalid(format!("bad grid axis ({lo}, {hi}, {n})")));
            }
        }
        Ok(Self { axes })
    }

    pub fn axis_values(&self, v: usize) -> Vec<f64> {
        let (lo, hi, n) = self.axes[v];
        if n == 1 {
            return vec![lo];
        }
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    /// Points in row-major order (last variable fastest).
    pub fn points(&self) -> Vec<Vec<f64>> {
        let values: Vec<Vec<f64>> = (0..self.axes.len()).map(|v| self.axis_values(v)).collect();
        let mut out = vec![Vec::new()];
        for vals in &values {
            out = out.into_iter().flat_map(|p| vals.iter().map(move |&x| [p.clone(), vec![x]].concat())).collect();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.2).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone)]
pub struct ResidualReport {
    /// `max |LHS - RHS| / (1 + max |f|)` over the grid.
    pub max_relative: f64,
    pub max_abs: f64,
    pub max_field: f64,
    /// Smallest finite per-variable frontier below which both sides were compared.
    pub frontier: f64,
    pub per_component: Vec<f64>,
}

/// Evaluates both sides of the system on `candidate` and compares them on `grid`.
pub fn residual(sys: &PdeSystem, candidate: &SolutionForm, grid: &Grid) -> Result<ResidualReport, OperatorError> {
    let fields = candidate.assemble(sys)?;
    let params = sys.ctx.params();
    let inputs = Inputs { ctx: &sys.ctx, fields: &fields, time_derivatives: None };
    let points = grid.points();
    if grid.axes.len() != sys.ctx.nvars() {
        return Err(OperatorError::Invalid("grid dimension differs from the number of variables".into()));
    }
    let mut max_field = 0.0f64;
    for f in &fields {
        let ev = f.evaluator();
        for p in &points {
            max_field = max_field.max(ev.eval(p)?.abs());
        }
    }
    let mut frontier = f64::INFINITY;
    let mut per_component = Vec::new();
    for (c, f) in sys.components.iter().zip(&fields) {
        let mut lhs = GenSeries::zero(&sys.ctx);
        for t in &c.time {
            let ord = FracOrder::new(t.order, params)
                .map_err(|e| OperatorError::Frac { path: format!("{}/time", c.name), source: e })?;
            let d = sequential_deriv(f, 0, &ord, t.times, t.kind)
                .map_err(|e| OperatorError::Frac { path: format!("{}/time", c.name), source: e })?;
            lhs = lhs.add(&d.scale(t.coeff))?;
        }
        let rhs = apply(&c.operator, &inputs)?;
        let cut: Vec<f64> = lhs.precision().iter().zip(rhs.precision()).map(|(a, b)| a.min(*b)).collect();
        frontier = cut.iter().copied().filter(|x| x.is_finite()).fold(frontier, f64::min);
        let diff = lhs.sub(&rhs)?.restrict_below(&cut);
        let ev = diff.evaluator();
        let mut worst = 0.0f64;
        for p in &points {
            worst = worst.max(ev.eval(p)?.abs());
        }
        per_component.push(worst);
    }
    let max_abs = per_component.iter().copied().fold(0.0, f64::max);
    Ok(ResidualReport { max_relative: max_abs / (1.0 + max_field), max_abs, max_field, frontier, per_component })
}
