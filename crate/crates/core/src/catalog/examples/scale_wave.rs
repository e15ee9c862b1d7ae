//! Fractional scale wave equation `a D^α f + D^{α+1} f = (D^β_x)² f + (D^γ_y)² f`.

use crate::fode::ClosedForm;
use crate::operators::FodeSystem;
use crate::series::Poly;

use super::super::doc::{BasisFn, ComponentDoc, ExprDoc, ProblemSpec, TimeKind};
use super::super::solution::KnownSolution;
use super::super::{CatalogError, Example, ParamDecl, Values};
use super::coupled_ml::two_term;
use super::{entries, exp, names, problem, time, Syms};

pub struct ScaleWave;

impl Example for ScaleWave {
    fn id(&self) -> &'static str {
        "scale-wave"
    }

    fn provenance(&self) -> &'static str {
        "fractional scale wave equation in 1+2 dimensions on {E_beta(l1 x^beta), E_gamma(-l2 y^gamma)}, epsilon-series solution"
    }

    fn params(&self) -> Vec<ParamDecl> {
        vec![
            ParamDecl::order("alpha", 0.6, "α ∈ (0,1]"),
            ParamDecl::order("beta", 0.7, "β ∈ (0,1]"),
            ParamDecl::order("gamma", 0.8, "γ ∈ (0,1]"),
            ParamDecl::coefficient("a", 1.0),
            ParamDecl::coefficient("lambda1", 0.8),
            ParamDecl::coefficient("lambda2", 0.6),
            ParamDecl::free("K1_0", 1.0),
            ParamDecl::free("K1_1", 0.0),
            ParamDecl::free("K2_0", 0.5),
            ParamDecl::free("K2_1", 1.0),
        ]
    }

    fn spec(&self, v: &Values) -> Result<ProblemSpec, CatalogError> {
        let f = ExprDoc::field("f");
        let operator = ExprDoc::sum(vec![f.clone().dx_seq("x", "beta", 2), f.dx_seq("y", "gamma", 2)]);
        let mut spec = problem(
            self.id(),
            &["t", "x", "y"],
            entries(&self.params(), v),
            vec![ComponentDoc {
                name: "f".into(),
                time: vec![time(v.at("a"), "alpha", TimeKind::Caputo), time(1.0, "alpha+1", TimeKind::Caputo)],
                operator,
                basis: vec![BasisFn::ml("x", "beta", v.at("lambda1")), BasisFn::ml("y", "gamma", -v.at("lambda2"))],
                unknowns: names(&["K1", "K2"]),
            }],
        );
        spec.initial_data = Some(vec![vec![v.at("K1_0"), v.at("K1_1")], vec![v.at("K2_0"), v.at("K2_1")]]);
        Ok(spec)
    }

    fn target(&self, v: &Values, sys: &FodeSystem) -> Result<Vec<Poly>, CatalogError> {
        let s = Syms(sys);
        Ok(vec![s.k("K1")?.scale(v.at("lambda1").powi(2)), s.k("K2")?.scale(v.at("lambda2").powi(2))])
    }

    fn known(&self, v: &Values, spec: &ProblemSpec) -> Result<KnownSolution, CatalogError> {
        let alpha = exp(spec, "alpha")?;
        let a = v.at("a");
        let k1 = two_term(alpha, a, v.at("lambda1").powi(2), v.at("K1_0"), v.at("K1_1"));
        let k2 = two_term(alpha, a, v.at("lambda2").powi(2), v.at("K2_0"), v.at("K2_1"));
        Ok(KnownSolution::new(
            "K_i = sum_m l_i^(2m)/m! [K_i(0) eps_m(t; a, 1+alpha m) + (a K_i(0) + K_i'(0)) eps_m(t; a, 2+alpha m)]",
            ClosedForm::EpsilonSeries,
            vec![vec![k1, k2]],
        )
        .with_free(&["K1_0", "K1_1", "K2_0", "K2_1"], spec))
    }

    fn verify_grid(&self, _v: &Values) -> Vec<(f64, f64, usize)> {
        vec![(0.0, 1.0, 5), (0.0, 1.5, 5), (0.0, 1.5, 5)]
    }
}
