use std::sync::Arc;

use fracsub::series::{fit_to_basis, ExponentVector, Exps, GenSeries, MlTerm, ParamTable, SeriesContext};
use proptest::prelude::*;

fn ctx() -> Arc<SeriesContext> {
    let p = ParamTable::new(vec![("alpha".into(), 0.37), ("beta".into(), 0.61)]).unwrap();
    SeriesContext::new(vec!["t".into(), "x".into()], p).unwrap()
}

fn exps(c: &Arc<SeriesContext>, t: (i64, i64), x: (i64, i64)) -> Exps {
    let a = c.params().symbol("alpha").unwrap();
    let b = c.params().symbol("beta").unwrap();
    Exps::zero().with(0, a.scale_int(t.0).add_int(t.1)).with(1, b.scale_int(x.0).add_int(x.1))
}

type Raw = Vec<((i64, i64), (i64, i64), i64)>;

fn raw_series() -> impl Strategy<Value = Raw> {
    prop::collection::vec(((0i64..3, 0i64..2), (0i64..3, 0i64..2), -5i64..=5), 0..5)
}

fn build(c: &Arc<SeriesContext>, raw: &Raw) -> GenSeries<f64> {
    raw.iter().fold(GenSeries::zero(c), |s, &(t, x, k)| s.add(&GenSeries::monomial(c, k as f64, exps(c, t, x))).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(a in raw_series(), b in raw_series(), d in raw_series()) {
        let c = ctx();
        let (a, b, d) = (build(&c, &a), build(&c, &b), build(&c, &d));
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&d).unwrap(), a.add(&b.add(&d).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&d).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&d).unwrap()).unwrap()
        );
        prop_assert_eq!(a.mul(&b).unwrap().mul(&d).unwrap(), a.mul(&b.mul(&d).unwrap()).unwrap());
    }

    #[test]
    fn eval_is_homomorphism(a in raw_series(), b in raw_series(), t in 0.1f64..2.0, x in 0.1f64..2.0) {
        let c = ctx();
        let (a, b) = (build(&c, &a).scale(0.731), build(&c, &b).scale(-1.27));
        let p = [t, x];
        let lhs = a.mul(&b).unwrap().eval(&p).unwrap();
        let rhs = a.eval(&p).unwrap() * b.eval(&p).unwrap();
        let mag = a.terms().map(|(_, v)| v.abs()).sum::<f64>() * b.terms().map(|(_, v)| v.abs()).sum::<f64>() * 32.0;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(mag).max(1e-300));
        let sum = a.add(&b).unwrap().eval(&p).unwrap();
        prop_assert!((sum - a.eval(&p).unwrap() - b.eval(&p).unwrap()).abs() <= 1e-9 * mag.max(1.0));
    }

    #[test]
    fn fit_then_reassemble(coeffs in prop::collection::vec(-4.0f64..4.0, 3), lam in -1.5f64..1.5) {
        let c = ctx();
        let beta = c.params().symbol("beta").unwrap();
        let basis = vec![
            GenSeries::constant(&c, 1.0),
            MlTerm::new(1, beta, ExponentVector::integer(1), lam).expand(&c).unwrap(),
            GenSeries::monomial(&c, 1.0, exps(&c, (0, 0), (2, 0))),
        ];
        let s = basis.iter().zip(&coeffs).fold(GenSeries::zero(&c), |acc, (b, &k)| acc.add(&b.scale(k)).unwrap());
        let fit = fit_to_basis(&s, &basis).unwrap();
        prop_assert!(fit.in_span);
        let back = basis.iter().zip(&fit.coeffs).fold(GenSeries::zero(&c), |acc, (b, &k)| acc.add(&b.scale(k)).unwrap());
        let diff = back.sub(&s).unwrap().restrict_below(&fit.frontier);
        let scale = s.max_magnitude();
        prop_assert!(diff.terms().all(|(_, v)| v.abs() <= 1e-10 * scale));
    }
}

#[test]
fn symbolic_exponents_unify() {
    let c = ctx();
    let b = c.params().symbol("beta").unwrap();
    let s = GenSeries::monomial(&c, 1.0, Exps::single(1, b.add(&b)))
        .add(&GenSeries::monomial(&c, 1.0, Exps::single(1, b.scale_int(2))))
        .unwrap();
    assert_eq!(s.len(), 1);
    let parsed = ExponentVector::parse("2*beta", c.params()).unwrap();
    assert_eq!(s.coeff(&Exps::single(1, parsed)), Some(&2.0));
}
