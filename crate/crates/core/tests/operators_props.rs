use std::sync::Arc;

use fracsub::fracalc::{caputo_deriv, DerivKind, FracOrder};
use fracsub::operators::{apply, residual, ComponentSpec, Grid, Inputs, OperatorExpr, PdeSystem, SolutionForm, TimeTerm};
use fracsub::series::{gamma_exp, ExponentVector, Exps, GenSeries, Monomial, MlTerm, ParamTable, Poly, SeriesContext};
use proptest::prelude::*;

fn ctx(alpha: f64, beta: f64) -> Arc<SeriesContext> {
    let p = ParamTable::new(vec![("alpha".into(), alpha), ("beta".into(), beta)]).unwrap();
    SeriesContext::new(vec!["t".into(), "x".into()], p).unwrap()
}

fn sym(c: &Arc<SeriesContext>, n: &str) -> ExponentVector {
    c.params().symbol(n).unwrap()
}

fn f() -> OperatorExpr {
    OperatorExpr::component(0)
}

fn g() -> OperatorExpr {
    OperatorExpr::component(1)
}

fn burgers(c: &Arc<SeriesContext>, a: [f64; 3], b: [f64; 3]) -> PdeSystem {
    let beta = sym(c, "beta");
    let d = |e: OperatorExpr| e.dx(1, beta);
    let n = |x: [f64; 3], own: OperatorExpr| {
        OperatorExpr::sum(vec![
            own.clone().dx_seq(1, beta, 2).scale(-x[0]),
            own.clone().times(d(own)).scale(-x[1]),
            OperatorExpr::sum(vec![f().times(d(g())), g().times(d(f()))]).scale(-x[2]),
        ])
    };
    let basis = vec![GenSeries::constant(c, 1.0), GenSeries::monomial(c, 1.0, Exps::single(1, beta))];
    let time = vec![TimeTerm::new(1.0, sym(c, "alpha"), DerivKind::RiemannLiouville)];
    PdeSystem {
        ctx: Arc::clone(c),
        components: vec![
            ComponentSpec { name: "f".into(), time: time.clone(), operator: n(a, f()), basis: basis.clone(), unknowns: vec!["K1".into(), "K2".into()] },
            ComponentSpec { name: "g".into(), time, operator: n(b, g()), basis, unknowns: vec!["L1".into(), "L2".into()] },
        ],
    }
}

fn mono(pairs: &[(u32, u32)]) -> Monomial {
    Monomial::from_pairs(pairs.to_vec())
}

#[test]
fn burgers_image_matches_derivative_rules() {
    let c = ctx(0.3, 0.8);
    let (a1, a2) = (-2.0, 1.0);
    let sys = burgers(&c, [-1.0, a1, a2], [-1.0, -2.0, 1.0]);
    let report = sys.check_invariant().unwrap();
    assert!(report.invariant);
    let gb = gamma_exp(&sym(&c, "beta").add_int(1), c.params()).unwrap();
    // symbols: K1=0, K2=1, L1=2, L2=3
    let psi1 = Poly::from_terms([
        (mono(&[(0, 1), (1, 1)]), -gb * a1),
        (mono(&[(0, 1), (3, 1)]), -gb * a2),
        (mono(&[(2, 1), (1, 1)]), -gb * a2),
    ]);
    let psi2 = Poly::from_terms([(mono(&[(1, 2)]), -gb * a1), (mono(&[(1, 1), (3, 1)]), -2.0 * gb * a2)]);
    assert!(report.psi[0][0].approx_eq(&psi1, 1e-12), "{:?}", report.psi[0][0]);
    assert!(report.psi[0][1].approx_eq(&psi2, 1e-12), "{:?}", report.psi[0][1]);
}

#[test]
fn square_leaves_single_power_span() {
    let c = ctx(0.3, 0.8);
    let xb = Exps::single(1, sym(&c, "beta"));
    let sys = PdeSystem {
        ctx: Arc::clone(&c),
        components: vec![ComponentSpec {
            name: "f".into(),
            time: vec![TimeTerm::new(1.0, sym(&c, "alpha"), DerivKind::Caputo)],
            operator: f().pow(2),
            basis: vec![GenSeries::monomial(&c, 1.0, xb)],
            unknowns: vec!["K".into()],
        }],
    };
    let report = sys.check_invariant().unwrap();
    assert!(!report.invariant);
    assert!(report.fits[0].residual_terms > 0);
    assert!(sys.reduce().is_err());
}

#[test]
fn zero_fields_give_zero_image() {
    let c = ctx(0.3, 0.8);
    let sys = burgers(&c, [1.0, 2.0, 3.0], [4.0, 5.0, 6.0]);
    let zeros = vec![GenSeries::<f64>::zero(&c), GenSeries::zero(&c)];
    let inputs = Inputs { ctx: &c, fields: &zeros, time_derivatives: None };
    for comp in &sys.components {
        assert!(apply(&comp.operator, &inputs).unwrap().is_zero());
    }
}

#[test]
fn trig_and_exponential_cancellation() {
    // N2 = D^{2β} g + n1 D^{2β} f + a2^2 n1 f + n2 g on sin/cos x E basis
    let c = ctx(0.6, 0.7);
    let beta = sym(&c, "beta");
    let (a1, a2, n1, n2) = (0.8, 1.3, 0.4, -0.2);
    let sin = fracsub::series::frac_sin_series(&c, 1, &beta, a2).unwrap();
    let cos = fracsub::series::frac_cos_series(&c, 1, &beta, a2).unwrap();
    let e = MlTerm::new(1, beta, ExponentVector::integer(1), -a1).expand(&c).unwrap();
    let (k1, k2, l1) = (0.7, -1.1, 2.0);
    let fields = vec![sin.scale(k1).add(&cos.scale(k2)).unwrap(), e.scale(l1)];
    let n2_op = OperatorExpr::sum(vec![
        g().dx_seq(1, beta, 2),
        f().dx_seq(1, beta, 2).scale(n1),
        f().scale(a2 * a2 * n1),
        g().scale(n2),
    ]);
    let inputs = Inputs { ctx: &c, fields: &fields, time_derivatives: None };
    let image = apply(&n2_op, &inputs).unwrap();
    let expected = e.scale((a1 * a1 + n2) * l1).restrict_below(image.precision());
    assert!(image.approx_eq(&expected, 1e-12));
}

#[test]
fn mixed_derivative_commutes_with_space_factor() {
    let c = ctx(0.6, 0.7);
    let gamma = ExponentVector::rational(1, 3);
    let k = MlTerm::new(0, sym(&c, "alpha"), ExponentVector::integer(1), 0.9).expand(&c).unwrap();
    let phi = MlTerm::new(1, sym(&c, "beta"), ExponentVector::integer(1), -0.5).expand(&c).unwrap();
    let ord = FracOrder::new(gamma, c.params()).unwrap();
    let lhs = caputo_deriv(&k.mul(&phi).unwrap(), 0, &ord).unwrap();
    let rhs = caputo_deriv(&k, 0, &ord).unwrap().mul(&phi).unwrap();
    let cut: Vec<f64> = lhs.precision().iter().zip(rhs.precision()).map(|(a, b)| a.min(*b)).collect();
    assert!(lhs.restrict_below(&cut).approx_eq(&rhs.restrict_below(&cut), 1e-13));
}

#[test]
fn power_law_candidate_has_small_residual() {
    let c = ctx(0.3, 0.8);
    let sys = burgers(&c, [-1.0, 2.0, -1.0], [-1.0, -2.0, 1.0]);
    let p = c.params();
    let alpha = sym(&c, "alpha");
    let r = gamma_exp(&alpha.neg().add_int(1), p).unwrap() * fracsub::series::rgamma_exp(&alpha.scale_int(-2).add_int(1), p);
    let gb = gamma_exp(&sym(&c, "beta").add_int(1), p).unwrap();
    let (m1, m2) = (1.0, -r / (2.0 * gb));
    let tpow = |k: f64| GenSeries::monomial(&c, k, Exps::single(0, alpha.neg()));
    let sol = SolutionForm { coefficients: vec![vec![tpow(2.0 * m1), tpow(2.0 * m2)], vec![tpow(m1), tpow(m2)]] };
    let grid = Grid::new(vec![(0.5, 2.0, 7), (0.1, 2.0, 7)]).unwrap();
    let rep = residual(&sys, &sol, &grid).unwrap();
    assert!(rep.max_relative < 1e-12, "{rep:?}");
    // a wrong amplitude is caught
    let bad = SolutionForm { coefficients: vec![vec![tpow(2.0 * m1), tpow(m2)], vec![tpow(m1), tpow(m2)]] };
    assert!(residual(&sys, &bad, &grid).unwrap().max_relative > 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn psi_reassembles_operator_image(ks in prop::collection::vec(-2.0f64..2.0, 4), a in prop::collection::vec(-2.0f64..2.0, 6)) {
        let c = ctx(0.3, 0.8);
        let sys = burgers(&c, [a[0], a[1], a[2]], [a[3], a[4], a[5]]);
        let report = sys.check_invariant().unwrap();
        let basis = &sys.components[0].basis;
        let fields = vec![
            basis[0].scale(ks[0]).add(&basis[1].scale(ks[1])).unwrap(),
            basis[0].scale(ks[2]).add(&basis[1].scale(ks[3])).unwrap(),
        ];
        let inputs = Inputs { ctx: &c, fields: &fields, time_derivatives: None };
        for (comp, psi) in sys.components.iter().zip(&report.psi) {
            let image = apply(&comp.operator, &inputs).unwrap();
            let rebuilt = comp.basis.iter().zip(psi).fold(GenSeries::zero(&c), |s, (b, p)| s.add(&b.scale(p.eval(&ks))).unwrap());
            for x in [0.3, 1.0, 1.7] {
                let u = image.eval(&[1.0, x]).unwrap();
                let v = rebuilt.eval(&[1.0, x]).unwrap();
                prop_assert!((u - v).abs() <= 1e-9 * (1.0 + u.abs()));
            }
        }
    }

    #[test]
    fn basis_scaling_rescales_psi(scale in prop::sample::select(vec![-3.0, -0.5, 0.25, 2.0, 7.0])) {
        let c = ctx(0.3, 0.8);
        let sys = burgers(&c, [-1.0, 2.0, -1.0], [-1.0, -2.0, 1.0]);
        let mut scaled = sys.clone();
        for comp in &mut scaled.components {
            comp.basis[1] = comp.basis[1].scale(scale);
        }
        let r0 = sys.check_invariant().unwrap();
        let r1 = scaled.check_invariant().unwrap();
        // with φ2 -> sφ2 the coefficient K2 becomes K2/s, so the images must agree
        let ks = [0.4, -1.2, 0.9, 0.35];
        let ks_scaled = [ks[0], ks[1] / scale, ks[2], ks[3] / scale];
        for p in 0..2 {
            let img0 = r0.psi[p][0].eval(&ks);
            let img1 = r1.psi[p][0].eval(&ks_scaled);
            prop_assert!((img0 - img1).abs() <= 1e-12 * (1.0 + img0.abs()));
            let high0 = r0.psi[p][1].eval(&ks);
            let high1 = r1.psi[p][1].eval(&ks_scaled) * scale;
            prop_assert!((high0 - high1).abs() <= 1e-12 * (1.0 + high0.abs()));
        }
    }
}
