//! Coupled system with mixed time-space derivatives `D^γ_t (D^β_x)²` on Mittag-Leffler subspaces.

use crate::fode::ClosedForm;
use crate::operators::FodeSystem;
use crate::series::Poly;

use super::super::doc::{BasisFn, ComponentDoc, ExprDoc, ProblemSpec, TimeKind};
use super::super::solution::{KnownSolution, MlSeriesSum, TimeAtom, TimeFn};
use super::super::{CatalogError, Example, ParamDecl, Values};
use super::{entries, exp, names, problem, time, Syms};

pub struct MixedDerivative;

const RELATION: &str = "γ < α₁, γ < α₂";

impl Example for MixedDerivative {
    fn id(&self) -> &'static str {
        "mixed-derivative"
    }

    fn provenance(&self) -> &'static str {
        "coupled system with mixed derivatives D^gamma_t (D^beta_x)^2 on {E_beta(a2 x^beta), E_beta(-a2 x^beta)} x {E_beta(-a1 x^beta)}"
    }

    fn params(&self) -> Vec<ParamDecl> {
        vec![
            ParamDecl::order("alpha1", 0.9, "α₁ ∈ (0,1]").drawn(0.5, 1.0),
            ParamDecl::order("alpha2", 0.8, "α₂ ∈ (0,1]").drawn(0.5, 1.0),
            ParamDecl::order("beta", 0.7, "β ∈ (0,1]"),
            ParamDecl::order("gamma", 0.3, "γ ∈ (0,1], γ < α₁, γ < α₂").drawn(0.1, 0.3),
            ParamDecl::coefficient("a1", 0.5),
            ParamDecl::coefficient("a2", 0.8),
            ParamDecl::coefficient("m1", 1.0),
            ParamDecl::coefficient("n1", 1.0),
            ParamDecl::coefficient("n2", 0.5),
            ParamDecl::free("b1", 1.0),
            ParamDecl::free("b2", 0.5),
            ParamDecl::free("c1", 1.0),
        ]
    }

    fn check(&self, v: &Values) -> Result<(), CatalogError> {
        let g = v.at("gamma");
        if !(g < v.at("alpha1") && g < v.at("alpha2")) {
            return Err(CatalogError::ParamOutOfRange { name: "gamma".into(), value: g, range: RELATION.into() });
        }
        Ok(())
    }

    fn spec(&self, v: &Values) -> Result<ProblemSpec, CatalogError> {
        let (f, g) = (ExprDoc::field("f"), ExprDoc::field("g"));
        let (a1, a2, m1, n1, n2) = (v.at("a1"), v.at("a2"), v.at("m1"), v.at("n1"), v.at("n2"));
        let n_f = ExprDoc::sum(vec![
            f.clone().dx_seq("x", "beta", 2).dt("gamma"),
            g.clone().times(g.clone().dx("x", "beta")).scale(m1),
            g.clone().pow(2).scale(a1 * m1),
        ]);
        let n_g = ExprDoc::sum(vec![
            g.clone().dx_seq("x", "beta", 2).dt("gamma"),
            f.clone().dx_seq("x", "beta", 2).scale(n1),
            f.scale(-a2 * a2 * n1),
            g.scale(n2),
        ]);
        let mut spec = problem(
            self.id(),
            &["t", "x"],
            entries(&self.params(), v),
            vec![
                ComponentDoc {
                    name: "f".into(),
                    time: vec![time(1.0, "alpha1", TimeKind::Caputo)],
                    operator: n_f,
                    basis: vec![BasisFn::ml("x", "beta", a2), BasisFn::ml("x", "beta", -a2)],
                    unknowns: names(&["K1", "K2"]),
                },
                ComponentDoc {
                    name: "g".into(),
                    time: vec![time(1.0, "alpha2", TimeKind::Caputo)],
                    operator: n_g,
                    basis: vec![BasisFn::ml("x", "beta", -a1)],
                    unknowns: names(&["L1"]),
                },
            ],
        );
        spec.initial_data = Some(["b1", "b2", "c1"].iter().map(|n| vec![v.at(n)]).collect());
        Ok(spec)
    }

    fn target(&self, v: &Values, sys: &FodeSystem) -> Result<Vec<Poly>, CatalogError> {
        let s = Syms(sys);
        let (a1, a2, n2) = (v.at("a1"), v.at("a2"), v.at("n2"));
        Ok(vec![
            s.d("K1", "gamma")?.scale(a2 * a2),
            s.d("K2", "gamma")?.scale(a2 * a2),
            s.d("L1", "gamma")?.scale(a1 * a1).add(&s.k("L1")?.scale(n2)),
        ])
    }

    fn known(&self, v: &Values, spec: &ProblemSpec) -> Result<KnownSolution, CatalogError> {
        let nu = v.at("a1").powi(2);
        let c1 = v.at("c1");
        let delta = exp(spec, "alpha2-gamma")?;
        let sum = |beta0, shift0, scale| {
            Ok::<_, CatalogError>(TimeAtom::MlSum(MlSeriesSum {
                alpha: delta,
                arg: nu,
                beta0,
                dbeta: exp(spec, "gamma")?,
                shift0,
                dshift: exp(spec, "alpha2")?,
                ratio: v.at("n2"),
                scale,
            }))
        };
        let l1 = TimeFn(vec![sum(exp(spec, "1")?, exp(spec, "0")?, c1)?, sum(delta.add_int(1), delta, -c1 * nu)?]);
        Ok(KnownSolution::new(
            "K1 = b1, K2 = b2, L1 = c1 sum_m n2^m/m! [eps_m(t; a1^2, alpha2-gamma, 1+gamma m) - a1^2 eps_m(t; a1^2, alpha2-gamma, 1+alpha2-gamma+gamma m)]",
            ClosedForm::EpsilonSeries,
            vec![vec![TimeFn::constant(v.at("b1")), TimeFn::constant(v.at("b2"))], vec![l1]],
        )
        .with_free(&["b1", "b2", "c1"], spec))
    }

    fn verify_grid(&self, _v: &Values) -> Vec<(f64, f64, usize)> {
        vec![(0.0, 1.0, 6), (0.0, 1.5, 6)]
    }
}
