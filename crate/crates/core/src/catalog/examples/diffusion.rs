//! Diffusion-like equation `D^α f = ½(x^{2β} (D^γ_y)² f + y^{2γ} (D^β_x)² f)` on `{1, x^{2β}, y^{2γ}}`.

use crate::fode::ClosedForm;
use crate::operators::FodeSystem;
use crate::series::{MlTerm, Poly};
use crate::specfun::gamma_real;

use super::super::doc::{BasisFn, ComponentDoc, ExprDoc, ProblemSpec, TimeKind};
use super::super::solution::{KnownSolution, TimeFn};
use super::super::{CatalogError, Example, ParamDecl, Values};
use super::{entries, exp, names, problem, time, Syms};

pub struct DiffusionLike;

/// `(λ1, λ2) = (Γ(2γ+1)/2, Γ(2β+1)/2)`.
fn rates(v: &Values) -> Result<(f64, f64), CatalogError> {
    Ok((gamma_real(2.0 * v.at("gamma") + 1.0)? / 2.0, gamma_real(2.0 * v.at("beta") + 1.0)? / 2.0))
}

impl Example for DiffusionLike {
    fn id(&self) -> &'static str {
        "diffusion-like"
    }

    fn provenance(&self) -> &'static str {
        "diffusion-like equation in 1+2 dimensions, E_2alpha solution reducing to sinh(t) x^2 + cosh(t) y^2"
    }

    fn params(&self) -> Vec<ParamDecl> {
        vec![
            ParamDecl::order("alpha", 0.7, "α ∈ (0,1]"),
            ParamDecl::order("beta", 0.8, "β ∈ (0,1]"),
            ParamDecl::order("gamma", 0.6, "γ ∈ (0,1]"),
            ParamDecl::free("a", 0.0),
            ParamDecl::free("b1", 0.0),
            ParamDecl::free("c", 1.0),
        ]
    }

    fn spec(&self, v: &Values) -> Result<ProblemSpec, CatalogError> {
        let f = ExprDoc::field("f");
        let operator = ExprDoc::sum(vec![
            ExprDoc::coord("x", "2*beta").times(f.clone().dx_seq("y", "gamma", 2)),
            ExprDoc::coord("y", "2*gamma").times(f.dx_seq("x", "beta", 2)),
        ])
        .scale(0.5);
        let mut spec = problem(
            self.id(),
            &["t", "x", "y"],
            entries(&self.params(), v),
            vec![ComponentDoc {
                name: "f".into(),
                time: vec![time(1.0, "alpha", TimeKind::Caputo)],
                operator,
                basis: vec![BasisFn::one(), BasisFn::power("x", "2*beta"), BasisFn::power("y", "2*gamma")],
                unknowns: names(&["K1", "K2", "K3"]),
            }],
        );
        spec.initial_data = Some(["a", "b1", "c"].iter().map(|n| vec![v.at(n)]).collect());
        Ok(spec)
    }

    fn target(&self, v: &Values, sys: &FodeSystem) -> Result<Vec<Poly>, CatalogError> {
        let s = Syms(sys);
        let (l1, l2) = rates(v)?;
        Ok(vec![Poly::zero(), s.k("K3")?.scale(l1), s.k("K2")?.scale(l2)])
    }

    fn known(&self, v: &Values, spec: &ProblemSpec) -> Result<KnownSolution, CatalogError> {
        let (l1, l2) = rates(v)?;
        let lambda = l1 * l2;
        let (alpha, two_alpha, one) = (exp(spec, "alpha")?, exp(spec, "2*alpha")?, exp(spec, "1")?);
        let even = |k: f64| TimeFn::ml(MlTerm::new(0, two_alpha, one, lambda).scaled(k));
        let odd = |k: f64| TimeFn::ml(MlTerm::new(0, two_alpha, alpha.add_int(1), lambda).shifted(alpha).scaled(k));
        let (b1, c) = (v.at("b1"), v.at("c"));
        Ok(KnownSolution::new(
            "K1 = a, K2 = b1 E_2a(l t^2a) + c l1 t^a E_2a,a+1(l t^2a), K3 = c E_2a(l t^2a) + b1 l2 t^a E_2a,a+1(l t^2a)",
            ClosedForm::MittagLeffler,
            vec![vec![TimeFn::constant(v.at("a")), even(b1).plus(odd(c * l1)), even(c).plus(odd(b1 * l2))]],
        )
        .with_free(&["a", "b1", "c"], spec))
    }

    fn verify_grid(&self, _v: &Values) -> Vec<(f64, f64, usize)> {
        vec![(0.0, 1.0, 5), (0.0, 2.0, 5), (0.0, 2.0, 5)]
    }
}
