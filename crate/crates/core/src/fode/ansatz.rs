//! Power-law solutions `K_j = c_j t^{-α}` of Riemann-Liouville systems with quadratic right sides.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use crate::fracalc::{rl_deriv, DerivKind, FracOrder};
use crate::operators::FodeSystem;
use crate::series::{ExponentVector, Exps, GenSeries, Poly, SeriesContext};

use super::{ClosedForm, FodeError, FodeSolution, FreeConstant};

/// Values for free constants, keyed by the unknown left undetermined.
pub type FreeBindings = BTreeMap<String, f64>;

const PRUNE: f64 = 1e-12;
const VANISH: f64 = 1e-10;

/// Coefficient `R` in `RL D^α t^{-α} = R t^{-2α}`.
pub fn power_law_ratio(ctx: &Arc<SeriesContext>, alpha: &ExponentVector) -> Result<f64, FodeError> {
    let params = ctx.params();
    let probe = GenSeries::monomial(ctx, 1.0, Exps::single(0, alpha.neg()));
    let image = rl_deriv(&probe, 0, &FracOrder::new(*alpha, params)?)?;
    let target = -2.0 * alpha.value(params);
    let found = image.terms().next().map(|(e, &r)| (ctx.value(e.get(0)), r));
    match found {
        Some((e, r)) if image.len() == 1 && (e - target).abs() < 1e-9 && r != 0.0 => Ok(r),
        _ => Err(FodeError::Pole(format!(
            "RL derivative of t^-alpha vanishes at alpha = {} (gamma pole at 1 - 2 alpha)",
            alpha.value(params)
        ))),
    }
}

#[derive(Clone)]
struct Equation {
    poly: Poly,
    scale: f64,
}

impl Equation {
    fn new(poly: Poly) -> Self {
        let scale = poly.max_abs();
        Self { poly, scale }
    }

    fn substitute(&self, sym: u32, value: &Poly) -> Self {
        Self { poly: self.poly.substitute(sym, value), scale: self.scale }
    }
}

#[derive(Clone, Default)]
struct State {
    eqs: Vec<Equation>,
    assign: Vec<(u32, Poly)>,
}

impl State {
    fn substitute(&mut self, sym: u32, value: &Poly) {
        self.eqs = self.eqs.iter().map(|e| e.substitute(sym, value)).collect();
        for (_, v) in &mut self.assign {
            *v = v.substitute(sym, value);
        }
        self.assign.push((sym, value.clone()));
    }

    /// Drops vanished equations; `false` if some equation reduced to a nonzero constant.
    fn clean(&mut self) -> bool {
        let mut kept = Vec::with_capacity(self.eqs.len());
        for e in self.eqs.drain(..) {
            let poly = e.poly.prune(PRUNE * e.scale);
            if poly.max_abs() <= VANISH * e.scale {
                continue;
            }
            if poly.degree() == 0 {
                return false;
            }
            kept.push(Equation { poly, scale: e.scale });
        }
        self.eqs = kept;
        true
    }
}

fn eliminate_linear(state: &mut State, i: usize) {
    let eq = state.eqs.remove(i);
    let coeffs: Vec<(u32, f64)> =
        eq.poly.symbols().into_iter().map(|s| (s, eq.poly.coeff(&crate::series::Monomial::var(s)))).collect();
    let largest = coeffs.iter().fold(0.0f64, |m, (_, c)| m.max(c.abs()));
    let (sym, c) = *coeffs.iter().find(|(_, c)| c.abs() >= 1e-8 * largest).expect("linear equation has a variable");
    let value = eq.poly.sub(&Poly::var(sym).scale(c)).scale(-1.0 / c);
    state.substitute(sym, &value);
}

fn factorable(state: &State) -> Option<(usize, u32, Poly)> {
    state.eqs.iter().enumerate().find_map(|(i, e)| {
        e.poly.symbols().into_iter().find_map(|s| e.poly.divide_by_var(s).filter(|c| c.degree() <= 1).map(|c| (i, s, c)))
    })
}

fn quadratic_roots(p: &Poly, sym: u32) -> Vec<f64> {
    use crate::series::Monomial;
    let a = p.coeff(&Monomial::from_pairs(vec![(sym, 2)]));
    let b = p.coeff(&Monomial::var(sym));
    let c = p.coeff(&Monomial::one());
    let disc = b * b - 4.0 * a * c;
    let size = (b * b).max((4.0 * a * c).abs());
    if disc < -1e-12 * size {
        return Vec::new();
    }
    if disc <= 1e-12 * size {
        return vec![-b / (2.0 * a)];
    }
    let root = disc.sqrt();
    // numerically stable pair, larger root first
    let q = -0.5 * (b + b.signum() * root);
    let mut roots = if q == 0.0 { vec![0.0] } else { vec![q / a, c / q] };
    roots.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    roots.dedup();
    roots
}

/// All solutions of a block of polynomial equations, as assignments in the free symbols.
fn solve_block(eqs: Vec<Poly>) -> Result<Vec<State>, FodeError> {
    let mut queue = VecDeque::from([State { eqs: eqs.into_iter().map(Equation::new).collect(), assign: Vec::new() }]);
    let mut done = Vec::new();
    let mut steps = 0;
    while let Some(mut state) = queue.pop_front() {
        steps += 1;
        if steps > 10_000 {
            return Err(FodeError::NoPowerLawSolution("elimination did not terminate".into()));
        }
        if !state.clean() {
            continue;
        }
        if state.eqs.is_empty() {
            done.push(state);
            continue;
        }
        if let Some(i) = state.eqs.iter().position(|e| e.poly.degree() == 1) {
            eliminate_linear(&mut state, i);
            queue.push_back(state);
            continue;
        }
        if let Some((i, sym, cofactor)) = factorable(&state) {
            let mut zero = state.clone();
            zero.eqs.remove(i);
            zero.substitute(sym, &Poly::zero());
            let mut nonzero = state;
            nonzero.eqs[i] = Equation::new(cofactor);
            queue.push_back(zero);
            queue.push_back(nonzero);
            continue;
        }
        if let Some(i) = state.eqs.iter().position(|e| e.poly.symbols().len() == 1 && e.poly.degree() == 2) {
            let eq = state.eqs.remove(i);
            let sym = *eq.poly.symbols().iter().next().expect("one symbol");
            for r in quadratic_roots(&eq.poly, sym) {
                let mut branch = state.clone();
                branch.substitute(sym, &Poly::constant(r));
                queue.push_back(branch);
            }
            continue;
        }
        return Err(FodeError::NoPowerLawSolution("algebraic system needs elimination beyond linear and factored steps".into()));
    }
    Ok(done)
}

/// Strongly connected blocks of the dependency graph, dependencies first.
fn blocks(deps: &[BTreeSet<usize>]) -> Vec<Vec<usize>> {
    let n = deps.len();
    let mut reach = vec![vec![false; n]; n];
    for (u, d) in deps.iter().enumerate() {
        reach[u][u] = true;
        for &v in d {
            reach[u][v] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut assigned = vec![false; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for u in 0..n {
        if !assigned[u] {
            let comp: Vec<usize> = (0..n).filter(|&v| reach[u][v] && reach[v][u]).collect();
            comp.iter().for_each(|&v| assigned[v] = true);
            comps.push(comp);
        }
    }
    let mut ordered = Vec::with_capacity(comps.len());
    let mut solved = vec![false; n];
    while ordered.len() < comps.len() {
        let next = comps
            .iter()
            .position(|c| {
                !solved[c[0]] && c.iter().all(|&u| deps[u].iter().all(|&v| solved[v] || c.contains(&v)))
            })
            .expect("dependency graph of blocks is acyclic");
        comps[next].iter().for_each(|&u| solved[u] = true);
        ordered.push(comps[next].clone());
    }
    ordered
}

/// Substitutes `K_j = c_j t^{-α}` and solves the algebraic system for every real branch.
///
/// Unknowns left undetermined become free constants named after them and take their
/// value from `bindings` (default 1).
pub fn solve_power_ansatz(sys: &FodeSystem, bindings: &FreeBindings) -> Result<Vec<FodeSolution>, FodeError> {
    let names = sys.unknown_names().to_vec();
    let n = names.len();
    let alpha = match sys.equations.first().and_then(|e| e.lhs.first()) {
        Some(t) => t.order,
        None => return Err(FodeError::NoPowerLawSolution("empty system".into())),
    };
    let mut lambda = vec![None; n];
    let mut rhs = vec![Poly::zero(); n];
    for eq in &sys.equations {
        let [t] = eq.lhs.as_slice() else {
            return Err(FodeError::Unsupported("power-law ansatz needs one time term per equation".into()));
        };
        if t.kind != DerivKind::RiemannLiouville || t.times != 1 || t.order != alpha || t.coeff == 0.0 {
            return Err(FodeError::Unsupported("power-law ansatz needs a common RL order".into()));
        }
        if eq.rhs.symbols().iter().any(|&s| sys.symbols.symbols[s as usize].time_order.is_some()) {
            return Err(FodeError::Unsupported("mixed time derivatives in a power-law system".into()));
        }
        if eq.rhs.terms().any(|(m, _)| m.degree() != 2) {
            return Err(FodeError::NoPowerLawSolution(format!(
                "right side of {} is not homogeneous quadratic",
                names[eq.unknown]
            )));
        }
        if lambda[eq.unknown].replace(t.coeff).is_some() {
            return Err(FodeError::Inconsistent(format!("two equations for {}", names[eq.unknown])));
        }
        rhs[eq.unknown] = eq.rhs.clone();
    }
    let lambda: Vec<f64> = lambda
        .into_iter()
        .enumerate()
        .map(|(u, l)| l.ok_or_else(|| FodeError::Inconsistent(format!("no equation for {}", names[u]))))
        .collect::<Result<_, _>>()?;
    let ratio = power_law_ratio(&sys.ctx, &alpha)?;

    let deps: Vec<BTreeSet<usize>> = rhs.iter().map(|p| p.symbols().into_iter().map(|s| s as usize).collect()).collect();
    let mut branches: Vec<(Vec<f64>, Vec<FreeConstant>)> = vec![(vec![f64::NAN; n], Vec::new())];
    for block in blocks(&deps) {
        let mut next = Vec::new();
        for (values, free) in &branches {
            let eqs: Vec<Poly> = block
                .iter()
                .map(|&u| {
                    let mut p = Poly::var(u as u32).scale(lambda[u] * ratio).sub(&rhs[u]);
                    for (v, &x) in values.iter().enumerate() {
                        if !x.is_nan() {
                            p = p.substitute(v as u32, &Poly::constant(x));
                        }
                    }
                    p
                })
                .collect();
            for state in solve_block(eqs)? {
                let mut vals = values.clone();
                let mut free = free.clone();
                let mut point = vec![0.0; n];
                for &u in &block {
                    if !state.assign.iter().any(|(s, _)| *s as usize == u) {
                        let value = bindings.get(&names[u]).copied().unwrap_or(1.0);
                        point[u] = value;
                        vals[u] = value;
                        free.push(FreeConstant { name: names[u].clone(), value });
                    }
                }
                for (s, p) in &state.assign {
                    vals[*s as usize] = p.eval(&point);
                }
                next.push((vals, free));
            }
        }
        branches = next;
    }

    let mut unique: Vec<(Vec<f64>, Vec<FreeConstant>)> = Vec::new();
    for b in branches {
        let scale = b.0.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if !unique.iter().any(|u| u.0.iter().zip(&b.0).all(|(x, y)| (x - y).abs() <= 1e-9 * scale)) {
            unique.push(b);
        }
    }
    if unique.is_empty() {
        return Err(FodeError::NoPowerLawSolution("algebraic system has no real solution".into()));
    }
    Ok(unique
        .into_iter()
        .map(|(values, free)| {
            let components =
                values.iter().map(|&c| GenSeries::monomial(&sys.ctx, c, Exps::single(0, alpha.neg()))).collect();
            FodeSolution { components, form: Some(ClosedForm::PowerLaw), free }
        })
        .collect())
}
