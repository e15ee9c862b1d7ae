//! Fractional Boussinesq-type equation in `1+2` dimensions on `{1, x^β, y^γ}`.

use crate::fode::ClosedForm;
use crate::operators::FodeSystem;
use crate::series::Poly;

use super::super::doc::{AlternateDoc, BasisFactor, BasisFn, ComponentDoc, ExprDoc, ProblemSpec, TimeKind};
use super::super::solution::{KnownSolution, TimeFn};
use super::super::{CatalogError, Example, ParamDecl, Values};
use super::{entries, exp, gamma1, names, problem, time, Syms};

pub struct Boussinesq2d;

impl Example for Boussinesq2d {
    fn id(&self) -> &'static str {
        "boussinesq-2d"
    }

    fn provenance(&self) -> &'static str {
        "fractional Boussinesq equation in 1+2 dimensions with K(0) = (9/5, 0, e^2); alternate {1, x^2beta, y^2gamma, x^beta y^gamma}"
    }

    fn params(&self) -> Vec<ParamDecl> {
        vec![
            ParamDecl::order("alpha", 0.7, "α ∈ (0,1]"),
            ParamDecl::order("beta", 0.8, "β ∈ (0,1]"),
            ParamDecl::order("gamma", 0.6, "γ ∈ (0,1]"),
            ParamDecl::coefficient("r", 1.0),
            ParamDecl::coefficient("s", 0.0),
            ParamDecl::free("a1", 1.8),
            ParamDecl::free("a2", 0.0),
            ParamDecl::free("a3", std::f64::consts::E.powi(2)),
        ]
    }

    fn spec(&self, v: &Values) -> Result<ProblemSpec, CatalogError> {
        let u = ExprDoc::sum(vec![ExprDoc::field("f").scale(v.at("r")), ExprDoc::constant(v.at("s"))]);
        let flux = |var: &str, order: &str| u.clone().times(u.clone().dx(var, order)).dx(var, order);
        let mut spec = problem(
            self.id(),
            &["t", "x", "y"],
            entries(&self.params(), v),
            vec![ComponentDoc {
                name: "f".into(),
                time: vec![time(1.0, "alpha", TimeKind::Caputo)],
                operator: ExprDoc::sum(vec![flux("x", "beta"), flux("y", "gamma")]),
                basis: vec![BasisFn::one(), BasisFn::power("x", "beta"), BasisFn::power("y", "gamma")],
                unknowns: names(&["K1", "K2", "K3"]),
            }],
        );
        let mixed = BasisFn::of(vec![
            BasisFactor::Power { var: "x".into(), exponent: "beta".into() },
            BasisFactor::Power { var: "y".into(), exponent: "gamma".into() },
        ]);
        spec.alternates.push(AlternateDoc {
            label: "quadratic".into(),
            bases: vec![vec![BasisFn::one(), BasisFn::power("x", "2*beta"), BasisFn::power("y", "2*gamma"), mixed]],
            unknowns: vec![names(&["K1", "K2", "K3", "K4"])],
        });
        spec.initial_data = Some(["a1", "a2", "a3"].iter().map(|n| vec![v.at(n)]).collect());
        Ok(spec)
    }

    fn target(&self, v: &Values, sys: &FodeSystem) -> Result<Vec<Poly>, CatalogError> {
        let s = Syms(sys);
        let r2 = v.at("r").powi(2);
        let (gb, gg) = (gamma1(v.at("beta"))?, gamma1(v.at("gamma"))?);
        let k1 = s.k("K2")?.pow(2).scale(gb * gb).add(&s.k("K3")?.pow(2).scale(gg * gg)).scale(r2);
        Ok(vec![k1, Poly::zero(), Poly::zero()])
    }

    fn known(&self, v: &Values, spec: &ProblemSpec) -> Result<KnownSolution, CatalogError> {
        let (gb, gg) = (gamma1(v.at("beta"))?, gamma1(v.at("gamma"))?);
        let (a1, a2, a3) = (v.at("a1"), v.at("a2"), v.at("a3"));
        let rate = v.at("r").powi(2) * (a2 * a2 * gb * gb + a3 * a3 * gg * gg) / gamma1(v.at("alpha"))?;
        let k1 = TimeFn::constant(a1).plus(TimeFn::power(rate, exp(spec, "alpha")?));
        Ok(KnownSolution::new(
            "K1 = a1 + r^2 [a2^2 G(1+beta)^2 + a3^2 G(1+gamma)^2] t^alpha / G(1+alpha), K2 = a2, K3 = a3",
            ClosedForm::Polynomial,
            vec![vec![k1, TimeFn::constant(a2), TimeFn::constant(a3)]],
        )
        .with_free(&["a1", "a2", "a3"], spec))
    }

    fn verify_grid(&self, _v: &Values) -> Vec<(f64, f64, usize)> {
        vec![(0.0, 2.0, 5), (0.0, 2.0, 5), (0.0, 2.0, 5)]
    }
}
