//! Coupled generalized Burgers system with RL time derivatives on `{1, x^β}`.

use crate::fode::{power_law_ratio, ClosedForm};
use crate::operators::FodeSystem;
use crate::series::Poly;

use super::super::doc::{BasisFn, ComponentDoc, ExprDoc, ProblemSpec, TimeKind};
use super::super::solution::{KnownSolution, TimeFn};
use super::super::{CatalogError, Example, ParamDecl, Range, Values};
use super::{entries, exp, gamma1, names, problem, time, Syms};

pub struct Burgers;

fn ratio(spec: &ProblemSpec) -> Result<f64, CatalogError> {
    let ctx = spec.context()?;
    Ok(power_law_ratio(&ctx, &exp(spec, "alpha")?)?)
}

/// `-a0 (D^β)² u - a1 u D^β u - a2 (f D^β g + g D^β f)`
fn operator(own: &str, c: [f64; 3]) -> ExprDoc {
    let (f, g) = (ExprDoc::field("f"), ExprDoc::field("g"));
    let u = ExprDoc::field(own);
    let cross = ExprDoc::sum(vec![f.clone().times(g.clone().dx("x", "beta")), g.times(f.dx("x", "beta"))]);
    ExprDoc::sum(vec![
        u.clone().dx_seq("x", "beta", 2).scale(-c[0]),
        u.clone().times(u.dx("x", "beta")).scale(-c[1]),
        cross.scale(-c[2]),
    ])
}

impl Example for Burgers {
    fn id(&self) -> &'static str {
        "burgers-coupled"
    }

    fn provenance(&self) -> &'static str {
        "coupled generalized fractional Burgers system (RL time), power-law family on {1, x^beta}"
    }

    fn params(&self) -> Vec<ParamDecl> {
        vec![
            ParamDecl::order("alpha", 0.3, "α ∈ (0,1)\\{1/2}").with_range(Range::open(0.0, 1.0).excluding(0.5), "α ∈ (0,1)\\{1/2}"),
            ParamDecl::order("beta", 0.8, "β ∈ (0,1]"),
            ParamDecl::coefficient("a0", -1.0),
            ParamDecl::coefficient("a1", 2.0),
            ParamDecl::coefficient("a2", -1.0),
            ParamDecl::coefficient("b0", -1.0),
            ParamDecl::coefficient("b1", -2.0),
            ParamDecl::coefficient("b2", 1.0),
            ParamDecl::free("M1", 1.0),
            // NaN selects the default member -R/(2Γ(1+β)), which depends on the orders.
            ParamDecl::free("M2", f64::NAN),
        ]
    }

    fn check(&self, v: &Values) -> Result<(), CatalogError> {
        for name in ["b2", "M2"] {
            if v.at(name) == 0.0 {
                return Err(CatalogError::ParamOutOfRange { name: name.into(), value: 0.0, range: format!("{name} ≠ 0") });
            }
        }
        Ok(())
    }

    fn spec(&self, v: &Values) -> Result<ProblemSpec, CatalogError> {
        let rl = vec![time(1.0, "alpha", TimeKind::RiemannLiouville)];
        let basis = vec![BasisFn::one(), BasisFn::power("x", "beta")];
        let mut spec = problem(
            self.id(),
            &["t", "x"],
            entries(&self.params(), v),
            vec![
                ComponentDoc {
                    name: "f".into(),
                    time: rl.clone(),
                    operator: operator("f", [v.at("a0"), v.at("a1"), v.at("a2")]),
                    basis: basis.clone(),
                    unknowns: names(&["K1", "K2"]),
                },
                ComponentDoc {
                    name: "g".into(),
                    time: rl,
                    operator: operator("g", [v.at("b0"), v.at("b1"), v.at("b2")]),
                    basis,
                    unknowns: names(&["L1", "L2"]),
                },
            ],
        );
        if v.at("M2").is_nan() {
            let m2 = -ratio(&spec)? / (2.0 * gamma1(v.at("beta"))?);
            for p in spec.params.iter_mut().filter(|p| p.name == "M2") {
                p.value = m2;
            }
        }
        Ok(spec)
    }

    fn target(&self, v: &Values, sys: &FodeSystem) -> Result<Vec<Poly>, CatalogError> {
        let s = Syms(sys);
        let (k1, k2, l1, l2) = (s.k("K1")?, s.k("K2")?, s.k("L1")?, s.k("L2")?);
        let g = -gamma1(v.at("beta"))?;
        let (a1, a2, b1, b2) = (v.at("a1"), v.at("a2"), v.at("b1"), v.at("b2"));
        Ok(vec![
            k1.mul(&k2).scale(a1).add(&k1.mul(&l2).scale(a2)).add(&l1.mul(&k2).scale(a2)).scale(g),
            k2.pow(2).scale(a1).add(&k2.mul(&l2).scale(2.0 * a2)).scale(g),
            l1.mul(&l2).scale(b1).add(&k1.mul(&l2).scale(b2)).add(&l1.mul(&k2).scale(b2)).scale(g),
            l2.pow(2).scale(b1).add(&k2.mul(&l2).scale(2.0 * b2)).scale(g),
        ])
    }

    fn known(&self, v: &Values, spec: &ProblemSpec) -> Result<KnownSolution, CatalogError> {
        let r = ratio(spec)?;
        let g = gamma1(spec.param("beta").unwrap_or(v.at("beta")))?;
        let (b1, b2) = (v.at("b1"), v.at("b2"));
        let m1 = spec.param("M1").unwrap_or(v.at("M1"));
        let m2 = spec.param("M2").unwrap_or(v.at("M2"));
        let e = exp(spec, "-alpha")?;
        let k2 = -b1 * m2 / (2.0 * b2) - r / (2.0 * b2 * g);
        let k1 = -m1 * r / (2.0 * b2 * m2 * g) - b1 * m1 / (2.0 * b2);
        let sol = KnownSolution::new(
            "power-law family t^{-alpha}(K1 + K2 x^beta), t^{-alpha}(L1 + L2 x^beta) with free M1, M2",
            ClosedForm::PowerLaw,
            vec![vec![TimeFn::power(k1, e), TimeFn::power(k2, e)], vec![TimeFn::power(m1, e), TimeFn::power(m2, e)]],
        );
        Ok(sol.with_free(&["M1", "M2"], spec).binding("L1", m1).binding("L2", m2))
    }

    fn verify_grid(&self, _v: &Values) -> Vec<(f64, f64, usize)> {
        vec![(0.5, 2.0, 7), (0.5, 2.0, 7)]
    }
}
