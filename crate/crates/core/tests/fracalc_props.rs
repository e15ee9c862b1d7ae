use std::sync::Arc;

use fracsub::fracalc::{caputo_deriv, frac_deriv, rl_deriv, rl_integral, DerivKind, FracOrder};
use fracsub::series::{frac_cos_series, frac_sin_series, ExponentVector, Exps, GenSeries, ParamTable, SeriesContext};
use proptest::prelude::*;

fn ctx(a: f64, b: f64) -> Arc<SeriesContext> {
    let p = ParamTable::new(vec![("a".into(), a), ("b".into(), b)]).unwrap();
    SeriesContext::new(vec!["t".into()], p).unwrap()
}

fn build(c: &Arc<SeriesContext>, raw: &[(i64, i64, i64, f64)]) -> GenSeries<f64> {
    let a = c.params().symbol("a").unwrap();
    let b = c.params().symbol("b").unwrap();
    raw.iter().fold(GenSeries::zero(c), |s, &(i, j, k, v)| {
        let e = a.scale_int(i).add(&b.scale_int(j)).add_int(k);
        s.add(&GenSeries::monomial(c, v, Exps::single(0, e))).unwrap()
    })
}

fn raw() -> impl Strategy<Value = Vec<(i64, i64, i64, f64)>> {
    prop::collection::vec((0i64..3, 0i64..3, 0i64..3, -3.0f64..3.0), 0..6)
}

fn close(x: &GenSeries<f64>, y: &GenSeries<f64>, frontier: &[f64]) -> bool {
    x.restrict_below(frontier).approx_eq(&y.restrict_below(frontier), 1e-12)
}

fn min_frontier(x: &GenSeries<f64>, y: &GenSeries<f64>) -> Vec<f64> {
    x.precision().iter().zip(y.precision()).map(|(p, q)| p.min(*q)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn linearity(a in 0.2f64..0.95, b in 0.2f64..0.95, f in raw(), g in raw(), ka in -2.0f64..2.0, kb in -2.0f64..2.0) {
        let c = ctx(a, b);
        let (f, g) = (build(&c, &f), build(&c, &g));
        let ord = FracOrder::new(c.params().symbol("a").unwrap(), c.params()).unwrap();
        for kind in [DerivKind::Caputo, DerivKind::RiemannLiouville] {
            let lhs = frac_deriv(&f.scale(ka).add(&g.scale(kb)).unwrap(), 0, &ord, kind).unwrap();
            let rhs = frac_deriv(&f, 0, &ord, kind).unwrap().scale(ka)
                .add(&frac_deriv(&g, 0, &ord, kind).unwrap().scale(kb)).unwrap();
            prop_assert!(lhs.approx_eq(&rhs, 1e-12));
        }
    }

    #[test]
    fn integral_undoes_caputo(a in 0.05f64..0.95, b in 0.2f64..0.95, f in raw()) {
        let c = ctx(a, b);
        let f = build(&c, &f);
        let ord = FracOrder::new(c.params().symbol("a").unwrap(), c.params()).unwrap();
        let back = rl_integral(&caputo_deriv(&f, 0, &ord).unwrap(), 0, &ord).unwrap();
        let f0 = f.coeff(&Exps::zero()).copied().unwrap_or(0.0);
        let expected = f.sub(&GenSeries::constant(&c, f0)).unwrap();
        prop_assert!(close(&back, &expected, &min_frontier(&back, &expected)));
    }

    #[test]
    fn integral_semigroup(a in 0.05f64..0.95, b in 0.05f64..0.95, f in raw()) {
        let c = ctx(a, b);
        let f = build(&c, &f);
        let (sa, sb) = (c.params().symbol("a").unwrap(), c.params().symbol("b").unwrap());
        let oa = FracOrder::new(sa, c.params()).unwrap();
        let ob = FracOrder::new(sb, c.params()).unwrap();
        let oab = FracOrder::new(sa.add(&sb), c.params()).unwrap();
        let two = rl_integral(&rl_integral(&f, 0, &ob).unwrap(), 0, &oa).unwrap();
        let one = rl_integral(&f, 0, &oab).unwrap();
        prop_assert!(close(&two, &one, &min_frontier(&two, &one)));
    }

    #[test]
    fn caputo_matches_rl_on_high_powers(a in 0.05f64..0.95, b in 0.05f64..0.95, f in raw()) {
        let c = ctx(a, b);
        let shifted = f.iter().map(|&(i, j, k, v)| (i, j, k + 1, v)).collect::<Vec<_>>();
        let f = build(&c, &shifted);
        let ord = FracOrder::new(c.params().symbol("a").unwrap(), c.params()).unwrap();
        let cap = caputo_deriv(&f, 0, &ord).unwrap();
        let rl = rl_deriv(&f, 0, &ord).unwrap();
        prop_assert!(cap.approx_eq(&rl, 1e-12));
    }

    #[test]
    fn fractional_trig_derivatives(g in 0.3f64..0.95, lam in 0.1f64..2.0) {
        let c = ctx(g, 0.5);
        let gamma = c.params().symbol("a").unwrap();
        let ord = FracOrder::new(gamma, c.params()).unwrap();
        let cos = frac_cos_series(&c, 0, &gamma, lam).unwrap();
        let sin = frac_sin_series(&c, 0, &gamma, lam).unwrap();
        let dcos = caputo_deriv(&cos, 0, &ord).unwrap();
        let dsin = caputo_deriv(&sin, 0, &ord).unwrap();
        let neg_sin = sin.scale(-lam);
        let lam_cos = cos.scale(lam);
        prop_assert!(close(&dcos, &neg_sin, &min_frontier(&dcos, &neg_sin)));
        prop_assert!(close(&dsin, &lam_cos, &min_frontier(&dsin, &lam_cos)));
    }
}

#[test]
fn semigroup_example() {
    let c = ctx(0.3, 0.7);
    let f = GenSeries::monomial(&c, 1.0, Exps::single(0, ExponentVector::rational(1, 5)));
    let o3 = FracOrder::new(c.params().symbol("a").unwrap(), c.params()).unwrap();
    let o7 = FracOrder::new(c.params().symbol("b").unwrap(), c.params()).unwrap();
    let s = rl_integral(&rl_integral(&f, 0, &o3).unwrap(), 0, &o7).unwrap();
    let (e, _, v) = s.sorted_terms().remove(0);
    assert_eq!(e.get(0).as_integer(c.params()), None);
    assert!((e.get(0).value(c.params()) - 1.2).abs() < 1e-15);
    assert!((v - 1.0 / 1.2).abs() < 1e-14);
}
