//! Fractional Adams-Bashforth-Moulton predictor-corrector on a uniform grid.

use crate::fracalc::DerivKind;
use crate::operators::FodeSystem;
use crate::series::Poly;
use crate::specfun::gamma_real;

use super::FodeError;

/// `D^{orders[u]} K_u = rhs[u](K)`, `K(0) = initial`, with every order in `(0, 1]`.
#[derive(Debug, Clone)]
pub struct AdamsProblem {
    pub orders: Vec<f64>,
    pub rhs: Vec<Poly>,
    pub initial: Vec<f64>,
}

impl AdamsProblem {
    /// Reads a single-term Caputo system; each right side is divided by its time coefficient.
    pub fn from_fode(sys: &FodeSystem, initial: &[f64]) -> Result<Self, FodeError> {
        let n = sys.unknown_names().len();
        if initial.len() != n {
            return Err(FodeError::Inconsistent(format!("{} initial values for {n} unknowns", initial.len())));
        }
        let params = sys.ctx.params();
        let mut orders = vec![f64::NAN; n];
        let mut rhs = vec![Poly::zero(); n];
        for eq in &sys.equations {
            let [t] = eq.lhs.as_slice() else {
                return Err(FodeError::Unsupported("predictor-corrector needs one time term per equation".into()));
            };
            if t.kind != DerivKind::Caputo || t.times != 1 || t.coeff == 0.0 {
                return Err(FodeError::Unsupported("predictor-corrector needs simple Caputo terms".into()));
            }
            if eq.rhs.symbols().iter().any(|&s| sys.symbols.symbols[s as usize].time_order.is_some()) {
                return Err(FodeError::Unsupported("mixed time derivatives in a numeric problem".into()));
            }
            orders[eq.unknown] = t.order.value(params);
            rhs[eq.unknown] = eq.rhs.scale(1.0 / t.coeff);
        }
        if orders.iter().any(|o| o.is_nan()) {
            return Err(FodeError::Inconsistent("some unknown has no equation".into()));
        }
        Ok(Self { orders, rhs, initial: initial.to_vec() })
    }
}

/// States at `times[k] = (k + 1) h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn component(&self, u: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[u]).collect()
    }
}

struct Weights {
    predictor: Vec<f64>,
    corrector: Vec<f64>,
    pred_scale: f64,
    corr_scale: f64,
    alpha: f64,
}

impl Weights {
    fn new(alpha: f64, h: f64, steps: usize) -> Result<Self, FodeError> {
        let p = |k: usize, e: f64| (k as f64).powf(e);
        let predictor = (0..steps).map(|k| p(k + 1, alpha) - p(k, alpha)).collect();
        let corrector = (0..steps).map(|k| p(k + 2, alpha + 1.0) + p(k, alpha + 1.0) - 2.0 * p(k + 1, alpha + 1.0)).collect();
        Ok(Self {
            predictor,
            corrector,
            pred_scale: h.powf(alpha) / gamma_real(alpha + 1.0)?,
            corr_scale: h.powf(alpha) / gamma_real(alpha + 2.0)?,
            alpha,
        })
    }

    /// Weight of `f_0` in the corrector at step `n + 1`.
    fn first(&self, n: usize) -> f64 {
        let n = n as f64;
        n.powf(self.alpha + 1.0) - (n - self.alpha) * (n + 1.0).powf(self.alpha)
    }
}

pub fn adams_pece(problem: &AdamsProblem, h: f64, horizon: f64) -> Result<Trajectory, FodeError> {
    if !(h > 0.0 && h.is_finite()) || !(horizon >= h && horizon.is_finite()) {
        return Err(FodeError::Step(format!("need 0 < h <= T, got h = {h}, T = {horizon}")));
    }
    let dim = problem.initial.len();
    if problem.orders.len() != dim || problem.rhs.len() != dim {
        return Err(FodeError::Inconsistent("orders, right sides and initial values differ in length".into()));
    }
    if let Some(a) = problem.orders.iter().find(|&&a| !(a > 0.0 && a <= 1.0)) {
        return Err(FodeError::Unsupported(format!("order {a} outside (0, 1]")));
    }
    let steps = (horizon / h).round() as usize;
    if steps > 1_000_000 {
        return Err(FodeError::Step(format!("{steps} steps exceed the oracle's budget")));
    }
    let weights: Vec<Weights> = problem.orders.iter().map(|&a| Weights::new(a, h, steps)).collect::<Result<_, _>>()?;
    let eval = |y: &[f64]| -> Vec<f64> { problem.rhs.iter().map(|p| p.eval(y)).collect() };

    let mut history: Vec<Vec<f64>> = vec![eval(&problem.initial)];
    let mut values = Vec::with_capacity(steps);
    for n in 0..steps {
        let mut predicted = problem.initial.clone();
        for (u, w) in weights.iter().enumerate() {
            let s: f64 = (0..=n).map(|j| w.predictor[n - j] * history[j][u]).sum();
            predicted[u] += w.pred_scale * s;
        }
        let f_pred = eval(&predicted);
        let mut next = problem.initial.clone();
        for (u, w) in weights.iter().enumerate() {
            let mut s = w.first(n) * history[0][u] + f_pred[u];
            s += (1..=n).map(|j| w.corrector[n - j] * history[j][u]).sum::<f64>();
            next[u] += w.corr_scale * s;
        }
        if next.iter().any(|x| !x.is_finite()) {
            return Err(FodeError::Step(format!("overflow at t = {}", (n + 1) as f64 * h)));
        }
        history.push(eval(&next));
        values.push(next);
    }
    Ok(Trajectory { times: (1..=steps).map(|k| k as f64 * h).collect(), values })
}
