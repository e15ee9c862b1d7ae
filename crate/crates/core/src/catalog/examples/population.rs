//! Fractional population model in `1+2` dimensions on `{1, x^β, y^γ}`.

use std::sync::Arc;

use crate::fode::ClosedForm;
use crate::fracalc::{rl_integral, FracOrder};
use crate::operators::FodeSystem;
use crate::series::{MlTerm, Poly, SeriesContext};
use crate::specfun::gamma_real;

use super::super::doc::{BasisFn, ComponentDoc, ExprDoc, ProblemSpec, TimeKind};
use super::super::solution::{KnownSolution, SeriesBuilder, TimeAtom, TimeFn};
use super::super::{CatalogError, Example, ParamDecl, Values};
use super::{entries, exp, names, problem, time, Syms};

pub struct Population;

fn weights(v: &Values) -> Result<(f64, f64), CatalogError> {
    Ok((gamma_real(2.0 * v.at("beta") + 1.0)?, gamma_real(2.0 * v.at("gamma") + 1.0)?))
}

impl Example for Population {
    fn id(&self) -> &'static str {
        "population-model"
    }

    fn provenance(&self) -> &'static str {
        "fractional population model in 1+2 dimensions, K2, K3 Mittag-Leffler and K1 by iterated integrals"
    }

    fn params(&self) -> Vec<ParamDecl> {
        vec![
            ParamDecl::order("alpha", 0.8, "α ∈ (0,1]"),
            ParamDecl::order("beta", 0.7, "β ∈ (0,1]"),
            ParamDecl::order("gamma", 0.9, "γ ∈ (0,1]"),
            ParamDecl::coefficient("c", 0.5),
            ParamDecl::free("a1", 1.0),
            ParamDecl::free("a2", 1.0),
            ParamDecl::free("a3", 1.0),
        ]
    }

    fn spec(&self, v: &Values) -> Result<ProblemSpec, CatalogError> {
        let f = ExprDoc::field("f");
        let sq = f.clone().pow(2);
        let operator = ExprDoc::sum(vec![sq.clone().dx_seq("x", "beta", 2), sq.dx_seq("y", "gamma", 2), f.scale(v.at("c"))]);
        let mut spec = problem(
            self.id(),
            &["t", "x", "y"],
            entries(&self.params(), v),
            vec![ComponentDoc {
                name: "f".into(),
                time: vec![time(1.0, "alpha", TimeKind::Caputo)],
                operator,
                basis: vec![BasisFn::one(), BasisFn::power("x", "beta"), BasisFn::power("y", "gamma")],
                unknowns: names(&["K1", "K2", "K3"]),
            }],
        );
        spec.initial_data = Some(["a1", "a2", "a3"].iter().map(|n| vec![v.at(n)]).collect());
        Ok(spec)
    }

    fn target(&self, v: &Values, sys: &FodeSystem) -> Result<Vec<Poly>, CatalogError> {
        let s = Syms(sys);
        let c = v.at("c");
        let (wb, wg) = weights(v)?;
        let (k1, k2, k3) = (s.k("K1")?, s.k("K2")?, s.k("K3")?);
        Ok(vec![k1.scale(c).add(&k2.pow(2).scale(wb)).add(&k3.pow(2).scale(wg)), k2.scale(c), k3.scale(c)])
    }

    fn known(&self, v: &Values, spec: &ProblemSpec) -> Result<KnownSolution, CatalogError> {
        let c = v.at("c");
        let (wb, wg) = weights(v)?;
        let forcing = v.at("a2").powi(2) * wb + v.at("a3").powi(2) * wg;
        let alpha = exp(spec, "alpha")?;
        let one = exp(spec, "1")?;
        let e = |scale: f64| TimeFn::ml(MlTerm::new(0, alpha, one, c).scaled(scale));
        // sum_m c^m I^{(m+1)α}[A E_α(c t^α)²], one series term per iteration
        let particular: Arc<SeriesBuilder> = Arc::new(move |ctx: &Arc<SeriesContext>| {
            let order = FracOrder::new(alpha, ctx.params())?;
            let square = MlTerm::new(0, alpha, one, c).expand(ctx)?.pow(2)?.scale(forcing);
            let mut term = rl_integral(&square, 0, &order)?;
            let mut acc = term.clone();
            loop {
                term = rl_integral(&term, 0, &order)?.scale(c);
                if term.is_zero() {
                    return Ok(acc);
                }
                acc = acc.add(&term)?;
            }
        });
        let k1 = e(v.at("a1")).plus(TimeFn(vec![TimeAtom::Series(particular)]));
        Ok(KnownSolution::new(
            "K2 = a2 E_alpha(c t^alpha), K3 = a3 E_alpha(c t^alpha), K1 = a1 E_alpha(c t^alpha) + sum_m c^m I^((m+1)alpha)[A E_alpha^2]",
            ClosedForm::IteratedIntegral,
            vec![vec![k1, e(v.at("a2")), e(v.at("a3"))]],
        )
        .with_free(&["a1", "a2", "a3"], spec))
    }

    fn verify_grid(&self, _v: &Values) -> Vec<(f64, f64, usize)> {
        vec![(0.0, 1.0, 5), (0.0, 2.0, 5), (0.0, 2.0, 5)]
    }
}
