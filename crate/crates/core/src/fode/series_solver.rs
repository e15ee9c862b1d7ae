//! Fractional power-series solutions of Caputo problems with classical initial data.

use std::collections::BTreeSet;

use crate::fracalc::{rl_integral, sequential_deriv, DerivKind, FracOrder};
use crate::operators::{FodeEquation, FodeSystem, TimeTerm};
use crate::series::{gamma_exp, Exps, GenSeries};

use super::{eval_poly, symbol_values, FodeError, FodeSolution};

/// Largest number of distinct time exponents a solution may carry.
pub const LATTICE_CAP: usize = 400;

/// Initial data per unknown.
///
/// For a leading term `D^γ` these are `K(0), K'(0), …` up to order `⌈γ⌉ - 1`;
/// for a sequential leading term `(D^γ)^k` they are `K(0), D^γK(0), …, (D^γ)^{k-1}K(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub values: Vec<Vec<f64>>,
}

struct Inversion {
    lead: TimeTerm,
    lead_order: FracOrder,
    homogeneous: GenSeries<f64>,
    others: Vec<TimeTerm>,
}

fn leading_term(eq: &FodeEquation, sys: &FodeSystem) -> Result<(usize, f64), FodeError> {
    let params = sys.ctx.params();
    let mut best: Option<(usize, f64)> = None;
    for (i, t) in eq.lhs.iter().enumerate() {
        if t.kind != DerivKind::Caputo {
            return Err(FodeError::Unsupported("series solutions need Caputo time derivatives".into()));
        }
        let v = t.total_order().value(params);
        match best {
            Some((_, b)) if (v - b).abs() < 1e-12 => {
                return Err(FodeError::Unsupported("two time terms share the leading order".into()));
            }
            Some((_, b)) if v < b => {}
            _ => best = Some((i, v)),
        }
    }
    best.ok_or_else(|| FodeError::Inconsistent("equation without time derivative".into()))
}

fn invert(sys: &FodeSystem, eq: &FodeEquation, ics: &[f64], bound: f64) -> Result<Inversion, FodeError> {
    let params = sys.ctx.params();
    let name = &sys.symbols.unknown_names[eq.unknown];
    let (lead_idx, _) = leading_term(eq, sys)?;
    let lead = eq.lhs[lead_idx].clone();
    if lead.coeff == 0.0 {
        return Err(FodeError::Inconsistent(format!("leading coefficient of {name} vanishes")));
    }
    let step = FracOrder::new(lead.order, params)?;
    let mut homogeneous = GenSeries::zero(&sys.ctx).set_bound(bound);
    let expected = if lead.times > 1 {
        if step.numeric(params) > 1.0 {
            return Err(FodeError::Unsupported("sequential steps above order one".into()));
        }
        lead.times as usize
    } else {
        step.ceil() as usize
    };
    if ics.len() != expected {
        return Err(FodeError::InitialData { unknown: name.clone(), expected, got: ics.len() });
    }
    for (j, &v) in ics.iter().enumerate() {
        let e = if lead.times > 1 { lead.order.scale_int(j as i64) } else { crate::series::ExponentVector::integer(j as i64) };
        let c = v / gamma_exp(&e.add_int(1), params)?;
        homogeneous = homogeneous.add(&GenSeries::monomial(&sys.ctx, c, Exps::single(0, e)).set_bound(bound))?;
    }
    let others = eq.lhs.iter().enumerate().filter(|(i, _)| *i != lead_idx).map(|(_, t)| t.clone()).collect();
    let lead_order = FracOrder::new(lead.total_order(), params)?;
    Ok(Inversion { lead, lead_order, homogeneous, others })
}

fn lattice_size(components: &[GenSeries<f64>]) -> usize {
    let exps: BTreeSet<_> = components.iter().flat_map(|c| c.terms().map(|(e, _)| *e.get(0))).collect();
    exps.len()
}

/// Solves a Caputo system with classical initial data by equating series coefficients.
///
/// Each equation is inverted through its leading time term, `K = H + I^γ[(ψ - lower terms)/λ]`,
/// and the map is iterated until the coefficients below `truncation` stop changing.
pub fn solve_series(sys: &FodeSystem, ics: &InitialData, truncation: f64) -> Result<FodeSolution, FodeError> {
    let n = sys.unknown_names().len();
    if ics.values.len() != n {
        return Err(FodeError::Inconsistent(format!("{} initial-data rows for {n} unknowns", ics.values.len())));
    }
    let mut order = vec![None; n];
    for (i, eq) in sys.equations.iter().enumerate() {
        match order.get_mut(eq.unknown) {
            Some(slot @ None) => *slot = Some(i),
            _ => return Err(FodeError::Inconsistent(format!("unknown {} has no unique equation", eq.unknown))),
        }
    }
    let eq_of: Vec<usize> = order
        .into_iter()
        .enumerate()
        .map(|(u, e)| e.ok_or_else(|| FodeError::Inconsistent(format!("no equation for {}", sys.symbols.unknown_names[u]))))
        .collect::<Result<_, _>>()?;
    let params = sys.ctx.params();
    let inversions: Vec<Inversion> = (0..n)
        .map(|u| invert(sys, &sys.equations[eq_of[u]], &ics.values[u], truncation))
        .collect::<Result<_, _>>()?;

    let mut current: Vec<GenSeries<f64>> = inversions.iter().map(|inv| inv.homogeneous.clone()).collect();
    for _ in 0..=LATTICE_CAP + 1 {
        let values = symbol_values(sys, &current)?;
        let mut next = Vec::with_capacity(n);
        for (u, inv) in inversions.iter().enumerate() {
            let eq = &sys.equations[eq_of[u]];
            let mut rhs = eval_poly(&eq.rhs, &values, &sys.ctx, truncation)?;
            for t in &inv.others {
                let d = sequential_deriv(&current[u], 0, &FracOrder::new(t.order, params)?, t.times, t.kind)?;
                rhs = rhs.sub(&d.scale(t.coeff))?;
            }
            let update = rl_integral(&rhs.scale(1.0 / inv.lead.coeff), 0, &inv.lead_order)?;
            next.push(inv.homogeneous.add(&update)?);
        }
        let points = lattice_size(&next);
        if points > LATTICE_CAP {
            return Err(FodeError::Lattice { points, cap: LATTICE_CAP });
        }
        let settled = next.iter().zip(&current).all(|(a, b)| a.len() == b.len() && a.approx_eq(b, 0.0));
        current = next;
        if settled {
            return Ok(FodeSolution::new(current));
        }
    }
    Err(FodeError::Inconsistent("coefficient recursion did not settle".into()))
}
