//! Fractional KdV-type system (RL time) with the power-law family on `{1, x^β}`.

use crate::fode::{power_law_ratio, ClosedForm};
use crate::operators::FodeSystem;
use crate::series::Poly;

use super::super::doc::{BasisFn, ComponentDoc, ExprDoc, ProblemSpec, TimeKind};
use super::super::solution::{KnownSolution, TimeFn};
use super::super::{CatalogError, Example, ParamDecl, Range, Values};
use super::{entries, exp, gamma1, names, problem, time, Syms};

pub struct KdvSystem;

const RELATION: &str = "b = b₁ + b₂ > a₁ and a₂ > 0";

impl Example for KdvSystem {
    fn id(&self) -> &'static str {
        "kdv-system"
    }

    fn provenance(&self) -> &'static str {
        "fractional KdV-type system (RL time), t^{-alpha} family with free M1 on {1, x^beta}"
    }

    fn params(&self) -> Vec<ParamDecl> {
        vec![
            ParamDecl::order("alpha", 0.3, "α ∈ (0,1]\\{1/2}").with_range(Range::unit_order().excluding(0.5), "α ∈ (0,1]\\{1/2}"),
            ParamDecl::order("beta", 0.8, "β ∈ (0,1]"),
            ParamDecl::coefficient("a1", 2.0),
            ParamDecl::coefficient("a2", 4.0),
            ParamDecl::coefficient("a3", 1.0),
            ParamDecl::coefficient("b1", 1.0),
            ParamDecl::coefficient("b2", 2.0),
            ParamDecl::coefficient("b3", 1.0),
            ParamDecl::free("M1", 1.0),
        ]
    }

    fn check(&self, v: &Values) -> Result<(), CatalogError> {
        let b = v.at("b1") + v.at("b2");
        if !(b > v.at("a1")) {
            return Err(CatalogError::ParamOutOfRange { name: "b1+b2".into(), value: b, range: RELATION.into() });
        }
        if !(v.at("a2") > 0.0) {
            return Err(CatalogError::ParamOutOfRange { name: "a2".into(), value: v.at("a2"), range: RELATION.into() });
        }
        Ok(())
    }

    fn spec(&self, v: &Values) -> Result<ProblemSpec, CatalogError> {
        let (f, g) = (ExprDoc::field("f"), ExprDoc::field("g"));
        let d = |e: &ExprDoc| e.clone().dx("x", "beta");
        let n_f = ExprDoc::sum(vec![
            f.clone().times(d(&f)).scale(v.at("a1")),
            g.clone().times(d(&g)).scale(v.at("a2")),
            f.clone().dx_seq("x", "beta", 3).scale(v.at("a3")),
        ]);
        let n_g = ExprDoc::sum(vec![
            f.clone().times(d(&g)).scale(v.at("b1")),
            g.clone().times(d(&f)).scale(v.at("b2")),
            g.dx_seq("x", "beta", 3).scale(v.at("b3")),
        ]);
        let rl = vec![time(1.0, "alpha", TimeKind::RiemannLiouville)];
        let basis = vec![BasisFn::one(), BasisFn::power("x", "beta")];
        Ok(problem(
            self.id(),
            &["t", "x"],
            entries(&self.params(), v),
            vec![
                ComponentDoc { name: "f".into(), time: rl.clone(), operator: n_f, basis: basis.clone(), unknowns: names(&["K1", "K2"]) },
                ComponentDoc { name: "g".into(), time: rl, operator: n_g, basis, unknowns: names(&["L1", "L2"]) },
            ],
        ))
    }

    fn target(&self, v: &Values, sys: &FodeSystem) -> Result<Vec<Poly>, CatalogError> {
        let s = Syms(sys);
        let g = gamma1(v.at("beta"))?;
        let (k1, k2, l1, l2) = (s.k("K1")?, s.k("K2")?, s.k("L1")?, s.k("L2")?);
        let (a1, a2, b1, b2) = (v.at("a1"), v.at("a2"), v.at("b1"), v.at("b2"));
        Ok(vec![
            k1.mul(&k2).scale(a1).add(&l1.mul(&l2).scale(a2)).scale(g),
            k2.pow(2).scale(a1).add(&l2.pow(2).scale(a2)).scale(g),
            k1.mul(&l2).scale(b1).add(&l1.mul(&k2).scale(b2)).scale(g),
            k2.mul(&l2).scale((b1 + b2) * g),
        ])
    }

    fn known(&self, v: &Values, spec: &ProblemSpec) -> Result<KnownSolution, CatalogError> {
        let ctx = spec.context()?;
        let r = power_law_ratio(&ctx, &exp(spec, "alpha")?)?;
        let g = gamma1(v.at("beta"))?;
        let (a1, a2, b) = (v.at("a1"), v.at("a2"), v.at("b1") + v.at("b2"));
        let m1 = v.at("M1");
        // the first-order case takes the other root
        let sign = if (v.at("alpha") - 1.0).abs() < 1e-12 { -1.0 } else { 1.0 };
        let e = exp(spec, "-alpha")?;
        let k1 = sign * (a2 / (b - a1)).sqrt() * m1;
        let k2 = r / (b * g);
        let l2 = sign * r * (b - a1).sqrt() / (b * g * a2.sqrt());
        Ok(KnownSolution::new(
            "power-law family t^{-alpha}(K1 + K2 x^beta), t^{-alpha}(M1 + L2 x^beta)",
            ClosedForm::PowerLaw,
            vec![vec![TimeFn::power(k1, e), TimeFn::power(k2, e)], vec![TimeFn::power(m1, e), TimeFn::power(l2, e)]],
        )
        .with_free(&["M1"], spec)
        .binding("L1", m1))
    }

    fn verify_grid(&self, _v: &Values) -> Vec<(f64, f64, usize)> {
        vec![(0.1, 2.0, 8), (0.0, 2.0, 8)]
    }
}
