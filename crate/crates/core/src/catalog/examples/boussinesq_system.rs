//! Coupled fractional Boussinesq system with distinct time orders on `{1, x^β}`.

use crate::fode::ClosedForm;
use crate::operators::FodeSystem;
use crate::series::Poly;

use super::super::doc::{BasisFn, ComponentDoc, ExprDoc, ProblemSpec, TimeKind};
use super::super::solution::{KnownSolution, TimeFn};
use super::super::{CatalogError, Example, ParamDecl, Values};
use super::{entries, exp, gamma1, names, problem, time, Syms};

pub struct BoussinesqSystem;

impl Example for BoussinesqSystem {
    fn id(&self) -> &'static str {
        "boussinesq-system"
    }

    fn provenance(&self) -> &'static str {
        "coupled Boussinesq system D^a1 f = -D^b g, D^a2 g = ...; polynomial-in-t solution from K(0) = (a, b), L(0) = (c, d)"
    }

    fn params(&self) -> Vec<ParamDecl> {
        vec![
            ParamDecl::order("alpha1", 0.4, "α₁ ∈ (0,1]"),
            ParamDecl::order("alpha2", 0.7, "α₂ ∈ (0,1]"),
            ParamDecl::order("beta", 0.9, "β ∈ (0,1]"),
            ParamDecl::coefficient("m1", 1.0),
            ParamDecl::coefficient("m2", 1.0),
            ParamDecl::free("a", std::f64::consts::E),
            ParamDecl::free("b", 2.0),
            ParamDecl::free("c", 1.5),
            ParamDecl::free("d", 0.0),
        ]
    }

    fn spec(&self, v: &Values) -> Result<ProblemSpec, CatalogError> {
        let (f, g) = (ExprDoc::field("f"), ExprDoc::field("g"));
        let basis = vec![BasisFn::one(), BasisFn::power("x", "beta")];
        let n_g = ExprDoc::sum(vec![
            f.clone().dx("x", "beta").scale(-v.at("m1")),
            f.clone().times(f.clone().dx("x", "beta")).scale(3.0),
            f.dx_seq("x", "beta", 3).scale(v.at("m2")),
        ]);
        let mut spec = problem(
            self.id(),
            &["t", "x"],
            entries(&self.params(), v),
            vec![
                ComponentDoc {
                    name: "f".into(),
                    time: vec![time(1.0, "alpha1", TimeKind::Caputo)],
                    operator: g.dx("x", "beta").scale(-1.0),
                    basis: basis.clone(),
                    unknowns: names(&["K1", "K2"]),
                },
                ComponentDoc {
                    name: "g".into(),
                    time: vec![time(1.0, "alpha2", TimeKind::Caputo)],
                    operator: n_g,
                    basis,
                    unknowns: names(&["L1", "L2"]),
                },
            ],
        );
        spec.initial_data = Some(["a", "b", "c", "d"].iter().map(|n| vec![v.at(n)]).collect());
        Ok(spec)
    }

    fn target(&self, v: &Values, sys: &FodeSystem) -> Result<Vec<Poly>, CatalogError> {
        let s = Syms(sys);
        let g = gamma1(v.at("beta"))?;
        let (k1, k2, l2) = (s.k("K1")?, s.k("K2")?, s.k("L2")?);
        Ok(vec![
            l2.scale(-g),
            Poly::zero(),
            k2.scale(-v.at("m1")).add(&k1.mul(&k2).scale(3.0)).scale(g),
            k2.pow(2).scale(3.0 * g),
        ])
    }

    fn known(&self, v: &Values, spec: &ProblemSpec) -> Result<KnownSolution, CatalogError> {
        let g = gamma1(v.at("beta"))?;
        let (a1, a2) = (v.at("alpha1"), v.at("alpha2"));
        let (a, b, c, d, m1) = (v.at("a"), v.at("b"), v.at("c"), v.at("d"), v.at("m1"));
        let term = |coeff: f64, order: &str, value: f64| -> Result<TimeFn, CatalogError> {
            Ok(TimeFn::power(coeff / gamma1(value)?, exp(spec, order)?))
        };
        let k1 = TimeFn::constant(a)
            .plus(term(-d * g, "alpha1", a1)?)
            .plus(term(-3.0 * b * b * g * g, "alpha1+alpha2", a1 + a2)?);
        let l1 = TimeFn::constant(c)
            .plus(term((3.0 * a * b - m1 * b) * g, "alpha2", a2)?)
            .plus(term(-3.0 * b * d * g * g, "alpha1+alpha2", a1 + a2)?)
            .plus(term(-9.0 * b.powi(3) * g.powi(3), "alpha1+2*alpha2", a1 + 2.0 * a2)?);
        let l2 = TimeFn::constant(d).plus(term(3.0 * b * b * g, "alpha2", a2)?);
        Ok(KnownSolution::new(
            "polynomial in t^alpha1, t^alpha2 fixed by K1(0)=a, K2(0)=b, L1(0)=c, L2(0)=d",
            ClosedForm::Polynomial,
            vec![vec![k1, TimeFn::constant(b)], vec![l1, l2]],
        )
        .with_free(&["a", "b", "c", "d"], spec))
    }

    fn verify_grid(&self, _v: &Values) -> Vec<(f64, f64, usize)> {
        vec![(0.0, 2.0, 9), (0.0, 2.0, 9)]
    }
}
