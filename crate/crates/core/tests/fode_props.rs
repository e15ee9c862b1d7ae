use std::sync::Arc;

use fracsub::fode::{
    adams_pece, fode_residual, nim_solve, power_law_ratio, solve_power_ansatz, solve_series, AdamsProblem, FreeBindings,
    InitialData, NimProblem,
};
use fracsub::fracalc::DerivKind;
use fracsub::operators::{ComponentSpec, FodeEquation, FodeSystem, OperatorExpr, PdeSystem, SymbolTable, TimeTerm};
use fracsub::series::{gamma_exp, Exps, GenSeries, MlTerm, ExponentVector, Monomial, ParamTable, Poly, SeriesContext};
use fracsub::specfun::{epsilon_fn, mittag_leffler, KernelSign, MLParams};
use proptest::prelude::*;

fn time_ctx(alpha: f64, bound: f64) -> Arc<SeriesContext> {
    let p = ParamTable::new(vec![("alpha".into(), alpha)]).unwrap();
    SeriesContext::with_truncation(vec!["t".into()], p, bound).unwrap()
}

fn scalar_system(ctx: &Arc<SeriesContext>, lhs: Vec<TimeTerm>, rhs: Poly) -> FodeSystem {
    FodeSystem {
        ctx: Arc::clone(ctx),
        symbols: SymbolTable::new(vec!["K".into()], &[], ctx.params()),
        equations: vec![FodeEquation { unknown: 0, lhs, rhs }],
    }
}

#[test]
fn two_term_series_matches_epsilon_expansion() {
    // a D^α K + D^{α+1} K = λ K, K(0) = 1, K'(0) = 0
    let (a, alpha_v, lambda) = (1.0, 0.6, 0.25);
    let ctx = time_ctx(alpha_v, 20.0);
    let alpha = ctx.params().symbol("alpha").unwrap();
    let sys = scalar_system(
        &ctx,
        vec![TimeTerm::new(a, alpha, DerivKind::Caputo), TimeTerm::new(1.0, alpha.add_int(1), DerivKind::Caputo)],
        Poly::var(0).scale(lambda),
    );
    let sol = solve_series(&sys, &InitialData { values: vec![vec![1.0, 0.0]] }, 20.0).unwrap();
    // K = 1 + sum_{m>=1} λ^m/(m-1)! ε_{m-1}(t; a, 1, αm+2)
    let closed = |t: f64| {
        let mut s = 1.0;
        let mut fact = 1.0;
        for m in 1..40usize {
            if m > 1 {
                fact *= (m - 1) as f64;
            }
            let p = MLParams::new(1.0, alpha_v * m as f64 + 2.0).unwrap();
            s += lambda.powi(m as i32) / fact * epsilon_fn(m - 1, t, a, p, KernelSign::Minus).unwrap();
        }
        s
    };
    for t in [0.5, 1.0, 2.0] {
        let series = sol.components[0].eval(&[t]).unwrap();
        assert!((series - closed(t)).abs() <= 1e-7, "t={t}: {series} vs {}", closed(t));
    }
}

#[test]
fn abm_order_guard() {
    // error at the horizon; the sup norm near t = 0 is dominated by the t^α singularity
    for alpha in [0.3, 0.5, 0.7, 0.9, 1.0] {
        let prob = AdamsProblem { orders: vec![alpha], rhs: vec![Poly::var(0).scale(-1.0)], initial: vec![1.0] };
        let exact = mittag_leffler(MLParams::new(alpha, 1.0).unwrap(), -1.0, 1e-15).unwrap();
        let err = |h: f64| (adams_pece(&prob, h, 1.0).unwrap().values.last().unwrap()[0] - exact).abs();
        let ratio = err(0.01) / err(0.005);
        let needed = 2f64.powf((1.0 + alpha).min(2.0) - 0.2);
        assert!(ratio >= needed, "alpha={alpha}: ratio {ratio} < {needed}");
    }
}

#[test]
fn nim_differences_shrink_for_contractions() {
    for alpha_v in [0.5, 0.8] {
        let ctx = time_ctx(alpha_v, 20.0);
        let alpha = ctx.params().symbol("alpha").unwrap();
        let e = MlTerm::new(0, alpha, ExponentVector::integer(1), 1.0).expand(&ctx).unwrap();
        let prob = NimProblem { var: 0, order: alpha, coeff: 0.5, initial: GenSeries::constant(&ctx, 1.0), forcing: e.pow(2).unwrap() };
        let res = nim_solve(&prob, 8).unwrap();
        let grid: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
        let sup = |s: &GenSeries<f64>| grid.iter().map(|&t| s.eval(&[t]).unwrap().abs()).fold(0.0, f64::max);
        let diffs: Vec<f64> = res.partial_sums.windows(2).map(|w| sup(&w[1].sub(&w[0]).unwrap())).collect();
        assert!(diffs.windows(2).all(|d| d[1] < d[0]), "{diffs:?}");
    }
}

fn burgers_pde(alpha: f64, beta: f64) -> PdeSystem {
    let p = ParamTable::new(vec![("alpha".into(), alpha), ("beta".into(), beta)]).unwrap();
    let c = SeriesContext::new(vec!["t".into(), "x".into()], p.clone()).unwrap();
    let b = p.symbol("beta").unwrap();
    let (f, g) = (OperatorExpr::component(0), OperatorExpr::component(1));
    let d = |e: OperatorExpr| e.dx(1, b);
    let cross = OperatorExpr::sum(vec![f.clone().times(d(g.clone())), g.clone().times(d(f.clone()))]);
    let n = |own: OperatorExpr, x: [f64; 3]| {
        OperatorExpr::sum(vec![
            own.clone().dx_seq(1, b, 2).scale(-x[0]),
            own.clone().times(d(own)).scale(-x[1]),
            cross.clone().scale(-x[2]),
        ])
    };
    let basis = vec![GenSeries::constant(&c, 1.0), GenSeries::monomial(&c, 1.0, Exps::single(1, b))];
    let time = vec![TimeTerm::new(1.0, p.symbol("alpha").unwrap(), DerivKind::RiemannLiouville)];
    PdeSystem {
        ctx: Arc::clone(&c),
        components: vec![
            ComponentSpec { name: "f".into(), time: time.clone(), operator: n(f.clone(), [-1.0, 2.0, -1.0]), basis: basis.clone(), unknowns: vec!["K1".into(), "K2".into()] },
            ComponentSpec { name: "g".into(), time, operator: n(g.clone(), [-1.0, -2.0, 1.0]), basis, unknowns: vec!["L1".into(), "L2".into()] },
        ],
    }
}

#[test]
fn burgers_power_law_branch() {
    let pde = burgers_pde(0.3, 0.8);
    let sys = pde.reduce().unwrap();
    let p = sys.ctx.params();
    let alpha = p.symbol("alpha").unwrap();
    let r = power_law_ratio(&sys.ctx, &alpha).unwrap();
    let gb = gamma_exp(&p.symbol("beta").unwrap().add_int(1), p).unwrap();
    let m1 = 0.75;
    let bindings = FreeBindings::from([("L1".to_string(), m1), ("L2".to_string(), -r / (2.0 * gb))]);
    let sols = solve_power_ansatz(&sys, &bindings).unwrap();
    let tm = Exps::single(0, alpha.neg());
    let coeff = |s: &fracsub::fode::FodeSolution, u: usize| s.components[u].coeff(&tm).copied().unwrap_or(0.0);
    let hit = sols.iter().find(|s| s.free.len() == 2).expect("two-parameter family");
    assert!((coeff(hit, 0) - 2.0 * m1).abs() < 1e-12);
    assert!((coeff(hit, 1) + r / gb).abs() < 1e-12);
    assert!((coeff(hit, 2) - m1).abs() < 1e-12);
    assert!((coeff(hit, 3) + r / (2.0 * gb)).abs() < 1e-12);
    for s in &sols {
        assert!(fode_residual(&sys, s).unwrap().max_relative() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn series_solutions_have_no_defect(
        alpha in 0.25f64..1.0,
        c in -2.0f64..2.0,
        q in -1.0f64..1.0,
        k0 in -1.5f64..1.5,
    ) {
        let ctx = time_ctx(alpha, 6.0);
        let a = ctx.params().symbol("alpha").unwrap();
        let rhs = Poly::from_terms([(Monomial::var(0), c), (Monomial::from_pairs(vec![(0, 2)]), q)]);
        let sys = scalar_system(&ctx, vec![TimeTerm::new(1.0, a, DerivKind::Caputo)], rhs);
        let sol = solve_series(&sys, &InitialData { values: vec![vec![k0]] }, 6.0).unwrap();
        let res = fode_residual(&sys, &sol).unwrap();
        prop_assert!(res.max_relative() < 1e-12, "{:?}", res);
    }
}
